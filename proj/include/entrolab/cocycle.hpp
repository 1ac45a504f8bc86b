#pragma once

// Derivative cocycles along orbits and finite-time Lyapunov exponents.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "entrolab/linalg.hpp"
#include "entrolab/maps.hpp"

namespace entrolab {

enum class OrbitDirection { forward, backward };

/// Product of Jacobians along an orbit. When entries would overflow a double
/// the product is returned in factored form matrix * exp(log_scale).
struct CocycleProduct {
    Mat matrix;
    double log_scale = 0.0;
    bool factored = false;
};

inline CocycleProduct cocycle_product(const MapSpec& m, const Point& x, int steps,
                                      OrbitDirection dir = OrbitDirection::forward) {
    if (steps < 0) throw std::invalid_argument("cocycle_product: steps must be >= 0");
    if (dir == OrbitDirection::backward && !m.invertible())
        throw unavailable_error("backward cocycle requires an invertible map");

    CocycleProduct out;
    out.matrix = Mat::identity(m.dim());
    Point p = x;
    for (int s = 0; s < steps; ++s) {
        if (p.escaped) throw escape_error("cocycle_product: orbit escaped");
        Mat j = (dir == OrbitDirection::forward) ? m.jacobian(p) : m.inverse_jacobian(p);
        out.matrix = j * out.matrix;
        double scale = out.matrix.max_abs();
        if (scale > 1e100 || (scale > 0.0 && scale < 1e-100)) {
            out.matrix *= (1.0 / scale);
            out.log_scale += std::log(scale);
            out.factored = true;
        }
        p = (dir == OrbitDirection::forward) ? m.eval(p) : m.inverse(p);
    }
    return out;
}

/// Finite-time Lyapunov exponents from a QR-reorthonormalized cocycle walk.
/// A warm-up stretch lets the orthonormal frame align with the singular
/// flag before logging starts, so constant-Jacobian maps reproduce their
/// eigenvalue logarithms to machine precision.
struct ExponentEstimate {
    std::vector<double> exponents;  // per iterate, sorted descending
    int blocks = 0;                 // N
    int block_len = 0;              // L
    int warmup_steps = 0;
    double logdet_per_step = 0.0;   // (1/NL) sum log|det Df| over the window
};

inline ExponentEstimate finite_time_exponents(const MapSpec& m, const Point& x, int n_blocks,
                                              int block_len = 1, int warmup_blocks = 16) {
    if (n_blocks < 1 || block_len < 1)
        throw std::invalid_argument("finite_time_exponents: need N >= 1 and L >= 1");
    int d = m.dim();
    ExponentEstimate est;
    est.blocks = n_blocks;
    est.block_len = block_len;
    est.warmup_steps = warmup_blocks * block_len;

    Mat q = Mat::identity(d);
    Point p = x;
    auto step = [&](bool log_it, std::vector<double>& sums, double& logdet) {
        if (p.escaped) throw escape_error("finite_time_exponents: orbit escaped");
        Mat j = m.jacobian(p);
        QrResult qr = qr_mgs(j * q);
        q = qr.q;
        if (log_it) {
            for (int i = 0; i < d; ++i) sums[static_cast<size_t>(i)] += std::log(qr.r(i, i));
            // independent volume bookkeeping through det Df itself
            double det;
            if (d == 2) {
                det = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
            } else {
                double s = 1.0;
                QrResult jqr = qr_mgs(j);
                for (int i = 0; i < d; ++i) s *= jqr.r(i, i);
                det = s;
            }
            logdet += std::log(std::fabs(det));
        }
        p = m.eval(p);
    };

    std::vector<double> sums(static_cast<size_t>(d), 0.0);
    double logdet = 0.0;
    for (int s = 0; s < est.warmup_steps; ++s) step(false, sums, logdet);
    int main_steps = n_blocks * block_len;
    for (int s = 0; s < main_steps; ++s) step(true, sums, logdet);

    est.exponents.resize(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
        est.exponents[static_cast<size_t>(i)] = sums[static_cast<size_t>(i)] / main_steps;
    std::sort(est.exponents.begin(), est.exponents.end(), std::greater<double>());
    est.logdet_per_step = logdet / main_steps;
    return est;
}

}  // namespace entrolab
