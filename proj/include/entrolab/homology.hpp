#pragma once

// The algebraic side of the entropy inequality: integer homology actions of
// toral maps through exterior powers of the lift matrix, spectral radii, and
// the report comparing log sp(f_*) against an entropy estimate.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "entrolab/entropy.hpp"
#include "entrolab/linalg.hpp"
#include "entrolab/maps.hpp"

namespace entrolab {

namespace detail {

// k-subsets of {0..m-1} in lexicographic order
inline std::vector<std::vector<int>> lex_subsets(int m, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<size_t>(i)] = i;
    if (k == 0) {
        out.push_back({});
        return out;
    }
    if (k > m) return out;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
    }
    return out;
}

}  // namespace detail

/// Matrix of k x k minors indexed by lexicographically ordered index subsets;
/// the action on degree-k homology of the torus. Integer exact.
inline IntMat exterior_power(const IntMat& a, int k) {
    int m = a.rows();
    if (m != a.cols()) throw std::invalid_argument("exterior_power: matrix must be square");
    if (k < 0 || k > m) throw std::invalid_argument("exterior_power: k out of range");
    auto subsets = detail::lex_subsets(m, k);
    int n = static_cast<int>(subsets.size());
    IntMat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMat minor(k, k);
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c)
                    minor(r, c) = a(subsets[static_cast<size_t>(i)][static_cast<size_t>(r)],
                                    subsets[static_cast<size_t>(j)][static_cast<size_t>(c)]);
            out(i, j) = int_det(minor);
        }
    return out;
}

namespace detail {

// exactly one entry of modulus 1 per row and column, zeros elsewhere: the
// spectrum lies on the unit circle, so the radius is exactly 1
inline bool is_signed_permutation(const Mat& b) {
    int n = b.rows();
    std::vector<int> col_hits(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        int hits = 0;
        for (int j = 0; j < n; ++j) {
            double v = b(i, j);
            if (v == 0.0) continue;
            if (v != 1.0 && v != -1.0) return false;
            ++hits;
            ++col_hits[static_cast<size_t>(j)];
        }
        if (hits != 1) return false;
    }
    for (int c : col_hits)
        if (c != 1) return false;
    return true;
}

// power iteration from a fixed start; returns |Rayleigh quotient| when the
// residual converges, 0 otherwise. The converged pair need not be dominant
// (the start can lie in a proper invariant subspace), so callers always
// cross-check against a second route and keep the max.
inline double power_iteration_radius(const Mat& b, std::vector<double> v) {
    double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    for (double& c : v) c /= nv;
    double rho = 0.0;
    for (int it = 0; it < 10000; ++it) {
        std::vector<double> w = b * v;
        double nw = norm2(w);
        if (nw == 0.0) return 0.0;
        for (double& c : w) c /= nw;
        rho = dot(w, b * w);
        std::vector<double> bw = b * w;
        double res = 0.0;
        for (size_t i = 0; i < bw.size(); ++i) {
            double r = bw[i] - rho * w[i];
            res += r * r;
        }
        if (std::sqrt(res) <= 1e-10 * std::max(1.0, std::fabs(rho)))
            return std::fabs(rho);
        v = std::move(w);
    }
    return 0.0;
}

// Gelfand bound ||B^(2^k)||_F^(1/2^k); converges onto the radius from above
inline double gelfand_radius(Mat p) {
    double log_norm = 0.0;
    double weight = 1.0;
    for (int k = 0; k < 45; ++k) {
        double s = p.frobenius_norm();
        if (s == 0.0) return 0.0;
        p *= (1.0 / s);
        log_norm += weight * std::log(s);
        p = p * p;
        weight *= 0.5;
    }
    log_norm += weight * std::log(std::max(p.frobenius_norm(), 1e-300));
    return std::exp(log_norm);
}

}  // namespace detail

/// Max eigenvalue modulus. Power iteration from the all-ones start, always
/// cross-checked: characteristic-polynomial roots for sizes <= 6, a second
/// start plus a repeated-squaring norm bound beyond that. The max of the
/// routes is returned; signed permutation matrices (rotation lifts and their
/// exterior powers) report exactly 1.
inline double spectral_radius(const Mat& b) {
    int n = b.rows();
    if (n != b.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
    if (n == 0) return 0.0;
    if (b.max_abs() == 0.0) return 0.0;
    if (detail::is_signed_permutation(b)) return 1.0;

    std::vector<double> ones(static_cast<size_t>(n), 1.0);
    double radius = detail::power_iteration_radius(b, ones);

    if (n <= 6) {
        auto roots = eigenvalues_small(b);
        for (const auto& r : roots) radius = std::max(radius, std::abs(r));
        return radius;
    }
    std::vector<double> ramp(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        ramp[static_cast<size_t>(i)] = (i % 2 ? -1.0 : 1.0) * (1.0 + 0.5 * i);
    radius = std::max(radius, detail::power_iteration_radius(b, std::move(ramp)));
    return std::max(radius, detail::gelfand_radius(b));
}

/// The family of integer matrices acting on H_k(T^m), k = 0..m, with their
/// spectral radii. Only toral maps carry a computable lift.
struct HomologyAction {
    int m = 0;
    std::vector<IntMat> matrices;        // index k
    std::vector<double> spectral_radii;  // index k
    double sp_f_star = 0.0;              // max over k
};

inline HomologyAction homology_action(const MapSpec& map) {
    IntMat lift = map.lift_matrix();  // throws unavailable_error for non-toral kinds
    HomologyAction h;
    h.m = lift.rows();
    for (int k = 0; k <= h.m; ++k) {
        IntMat mk = exterior_power(lift, k);
        double r = spectral_radius(mk.to_double());
        h.matrices.push_back(std::move(mk));
        h.spectral_radii.push_back(r);
        h.sp_f_star = std::max(h.sp_f_star, r);
    }
    return h;
}

enum class ConjectureVerdict { holds_within_tolerance, violated_beyond_tolerance, inconclusive };

inline const char* verdict_name(ConjectureVerdict v) {
    switch (v) {
        case ConjectureVerdict::holds_within_tolerance: return "holds_within_tolerance";
        case ConjectureVerdict::violated_beyond_tolerance: return "violated_beyond_tolerance";
        case ConjectureVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

/// log sp(f_*) against an entropy estimate. A LOWER entropy bound below
/// log sp cannot witness violation, so that case reports inconclusive.
struct ConjectureReport {
    double log_sp = 0.0;
    EntropyEstimate entropy;
    double margin = 0.0;  // entropy.value - log_sp
    double tolerance = 0.0;
    ConjectureVerdict verdict = ConjectureVerdict::inconclusive;
};

inline ConjectureReport conjecture_report(const MapSpec& map, const EntropyEstimate& h,
                                          double tolerance) {
    if (tolerance < 0.0) throw std::invalid_argument("conjecture_report: negative tolerance");
    HomologyAction act = homology_action(map);
    ConjectureReport rep;
    rep.log_sp = std::log(act.sp_f_star);
    rep.entropy = h;
    rep.margin = h.value - rep.log_sp;
    rep.tolerance = tolerance;
    if (rep.margin >= -tolerance)
        rep.verdict = ConjectureVerdict::holds_within_tolerance;
    else if (h.bound == BoundDirection::lower)
        rep.verdict = ConjectureVerdict::inconclusive;
    else
        rep.verdict = ConjectureVerdict::violated_beyond_tolerance;
    return rep;
}

}  // namespace entrolab
