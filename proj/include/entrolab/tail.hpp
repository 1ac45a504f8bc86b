#pragma once

// Tail entropy: the entropy of a truncated infinite dynamical ball, the
// computable surrogate for the expansiveness quantity sup_x h(f, B(x,eps)).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "entrolab/balls.hpp"
#include "entrolab/entropy.hpp"
#include "entrolab/nets.hpp"
#include "entrolab/parallel.hpp"
#include "entrolab/point_cloud.hpp"

namespace entrolab {

namespace detail {

// Difference vectors v with ||A^j v mod G||_sup <= eps for all |j| <= t; the
// two-sided truncated ball around any lattice point is its translate set.
// Only defined for lattice-exact map/grid pairs.
inline std::vector<std::vector<std::int64_t>> two_sided_diff_ball(const MapSpec& m,
                                                                  const PointCloud& k,
                                                                  double eps, int t) {
    int g = k.grid_per_axis();
    int dim = k.dim();
    int ticks = ticks_within(eps, g);
    std::vector<std::int64_t> lift, lift_inv;
    bool rot = m.kind() == MapKind::rotation;
    if (!rot) {
        IntMat a = m.lift_matrix();
        IntMat ainv = int_inverse_unimodular(a);
        lift.resize(static_cast<size_t>(dim) * dim);
        lift_inv.resize(static_cast<size_t>(dim) * dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                lift[static_cast<size_t>(i) * dim + j] = a(i, j);
                lift_inv[static_cast<size_t>(i) * dim + j] = ainv(i, j);
            }
    }
    auto advance = [&](std::vector<std::int64_t>& v, const std::vector<std::int64_t>& mat) {
        std::vector<std::int64_t> w(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            std::int64_t s = 0;
            for (int j = 0; j < dim; ++j)
                s += mat[static_cast<size_t>(i) * dim + j] * v[static_cast<size_t>(j)];
            s %= g;
            if (s < 0) s += g;
            w[static_cast<size_t>(i)] = s;
        }
        v.swap(w);
    };
    auto within = [&](const std::vector<std::int64_t>& v) {
        for (std::int64_t c : v)
            if (std::min(c, g - c) > ticks) return false;
        return true;
    };
    std::vector<std::vector<std::int64_t>> diffs;
    std::vector<std::int64_t> v(static_cast<size_t>(dim), 0);
    size_t total = 1;
    for (int c = 0; c < dim; ++c) total *= static_cast<size_t>(2 * ticks + 1);
    for (size_t id = 0; id < total; ++id) {
        size_t rem = id;
        for (int c = 0; c < dim; ++c) {
            std::int64_t off =
                static_cast<std::int64_t>(rem % (2 * static_cast<size_t>(ticks) + 1)) - ticks;
            rem /= (2 * static_cast<size_t>(ticks) + 1);
            v[static_cast<size_t>(c)] = off < 0 ? off + g : off;
        }
        bool ok = true;
        if (!rot) {
            std::vector<std::int64_t> w = v;
            for (int j = 0; j < t && ok; ++j) {
                advance(w, lift);
                ok = within(w);
            }
            w = v;
            for (int j = 0; j < t && ok; ++j) {
                advance(w, lift_inv);
                ok = within(w);
            }
        }
        if (ok) diffs.push_back(v);
    }
    return diffs;
}

inline bool on_lattice(const Point& x, int g, std::vector<std::int64_t>* out) {
    out->resize(static_cast<size_t>(x.dim()));
    for (int c = 0; c < x.dim(); ++c) {
        double s = x[c] * g;
        if (s != std::floor(s)) return false;
        (*out)[static_cast<size_t>(c)] = static_cast<std::int64_t>(s);
    }
    return true;
}

inline std::vector<size_t> translate_diff_ball(const std::vector<std::vector<std::int64_t>>& diffs,
                                               const std::vector<std::int64_t>& xi, int g,
                                               int dim) {
    std::vector<size_t> idx;
    idx.reserve(diffs.size());
    for (const auto& v : diffs) {
        size_t flat = 0;
        for (int c = dim - 1; c >= 0; --c) {
            std::int64_t cc = xi[static_cast<size_t>(c)] + v[static_cast<size_t>(c)];
            if (cc >= g) cc -= g;
            flat = flat * static_cast<size_t>(g) + static_cast<size_t>(cc);
        }
        idx.push_back(flat);
    }
    std::sort(idx.begin(), idx.end());
    return idx;
}

inline std::vector<size_t> scan_candidates(const MapSpec& m, const PointCloud& k,
                                           const Point& x, double eps, int t) {
    BallSpec spec = BallSpec::two_sided_infinite(t, eps);
    std::vector<size_t> idx;
    for (size_t i = 0; i < k.size(); ++i) {
        Point y = k.point(i);
        if (y.escaped) continue;
        if (m.distance(x, y) > eps) continue;  // j = 0 cut, identical to the ball test
        if (in_dynamical_ball(m, x, y, spec)) idx.push_back(i);
    }
    return idx;
}

// Candidate indices of the truncated two-sided ball around x, in cloud index
// order. Uses exact difference-lattice arithmetic when available, otherwise a
// direct scan (identical results either way; see the equivalence tests).
inline std::vector<size_t> two_sided_candidates(const MapSpec& m, const PointCloud& k,
                                                const Point& x, double eps, int t) {
    if (!m.invertible())
        throw unavailable_error("two-sided candidate sets require an invertible map");
    if (lattice_exact(m, k)) {
        std::vector<std::int64_t> xi;
        if (on_lattice(x, k.grid_per_axis(), &xi)) {
            auto diffs = two_sided_diff_ball(m, k, eps, t);
            return translate_diff_ball(diffs, xi, k.grid_per_axis(), k.dim());
        }
    }
    return scan_candidates(m, k, x, eps, t);
}

}  // namespace detail

struct TailOptions {
    NetOptions net;
};

namespace detail {

inline double tail_entropy_from_candidates(const MapSpec& m, const std::vector<size_t>& cand,
                                           int t, double beta, const PointCloud& k,
                                           const TailOptions& opts) {
    if (cand.empty()) return 0.0;
    std::vector<Point> pts;
    pts.reserve(cand.size());
    for (size_t i : cand) pts.push_back(k.point(i));
    PointCloud y = PointCloud::from_points(pts);

    NetOptions net = opts.net;
    if (net.engine == NetEngine::lattice || net.engine == NetEngine::automatic)
        net.engine = NetEngine::hashed;  // explicit-list cloud
    CountCurve curve = count_curve(m, y, beta, 1, t, CurveKind::separated_lower, net);
    GrowthFit fit = growth_rate(curve, 1, t);
    return std::max(0.0, fit.slope);
}

inline void check_tail_args(double eps, int t, double beta) {
    if (!(beta > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("tail_entropy: eps and beta must be positive");
    if (!(beta <= eps / 4.0))
        throw std::invalid_argument("tail_entropy: requires beta <= eps/4");
    if (t < 2) throw std::invalid_argument("tail_entropy: horizon must be >= 2");
}

}  // namespace detail

/// Entropy estimate of the truncated two-sided ball B(x, eps) at horizon T:
/// growth rate of greedy separated counts at radius beta over n = 1..T inside
/// the candidate set. Non-negative by clamping; an empty candidate set (x not
/// carried by K) reports 0.
inline double tail_entropy(const MapSpec& m, const Point& x, double eps, int t, double beta,
                           const PointCloud& k, const TailOptions& opts = {}) {
    detail::check_tail_args(eps, t, beta);
    std::vector<size_t> cand = detail::two_sided_candidates(m, k, x, eps, t);
    return detail::tail_entropy_from_candidates(m, cand, t, beta, k, opts);
}

enum class ProfileWeighting { sup, empirical_orbit };

struct ProfilePoint {
    double epsilon = 0.0;
    double h_estimate = 0.0;
};

/// Expansiveness profile: tail entropy aggregated over sample points by sup.
/// In empirical_orbit mode the samples are replaced by the forward orbit of
/// the first sample point (an empirical-measure surrogate); aggregation is
/// still the sup over that orbit. Raw values are reported in schedule order,
/// with no monotone reordering.
inline std::vector<ProfilePoint> expansiveness_profile(
    const MapSpec& m, const std::vector<double>& eps_list, const PointCloud& samples,
    ProfileWeighting weighting, int t, const PointCloud& k, int workers = 1,
    const TailOptions& opts = {}) {
    if (eps_list.empty()) throw std::invalid_argument("expansiveness_profile: empty schedule");
    for (size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("expansiveness_profile: eps_list must be decreasing");

    std::vector<Point> sample_pts;
    if (weighting == ProfileWeighting::empirical_orbit) {
        Point p = samples.point(0);
        for (size_t i = 0; i < samples.size(); ++i) {
            if (p.escaped) break;
            sample_pts.push_back(p);
            p = m.eval(p);
        }
    } else {
        for (size_t i = 0; i < samples.size(); ++i) sample_pts.push_back(samples.point(i));
    }

    std::vector<ProfilePoint> out;
    bool lattice = detail::lattice_exact(m, k);
    for (double eps : eps_list) {
        double beta = eps / 4.0;
        detail::check_tail_args(eps, t, beta);
        // the difference ball depends only on (eps, T); share it across samples
        std::vector<std::vector<std::int64_t>> diffs;
        if (lattice) diffs = detail::two_sided_diff_ball(m, k, eps, t);
        std::vector<double> vals = parallel_map<double>(
            sample_pts.size(), workers, [&](size_t i) {
                if (sample_pts[i].escaped) return 0.0;
                std::vector<std::int64_t> xi;
                std::vector<size_t> cand;
                if (lattice && detail::on_lattice(sample_pts[i], k.grid_per_axis(), &xi))
                    cand = detail::translate_diff_ball(diffs, xi, k.grid_per_axis(), k.dim());
                else
                    cand = detail::scan_candidates(m, k, sample_pts[i], eps, t);
                return detail::tail_entropy_from_candidates(m, cand, t, beta, k, opts);
            });
        double sup = 0.0;
        for (double v : vals) sup = std::max(sup, v);
        out.push_back({eps, sup});
    }
    return out;
}

}  // namespace entrolab
