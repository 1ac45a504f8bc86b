#pragma once

// Dynamical balls: the membership predicate behind every spanning/separated
// count and every tail-entropy candidate set.

#include <stdexcept>

#include "entrolab/maps.hpp"

namespace entrolab {

enum class BallMode {
    forward,            // d(f^j x, f^j y) <= eps for 0 <= j < n
    two_sided,          // |j| < n
    forward_infinite,   // 0 <= j <= T (truncation horizon)
    two_sided_infinite, // |j| <= T
};

struct BallSpec {
    BallMode mode = BallMode::forward;
    int n = 1;        // time length for the finite modes
    double epsilon = 0.0;
    int horizon = 1;  // truncation T for the "infinite" modes

    static BallSpec forward(int n, double eps) { return {BallMode::forward, n, eps, 1}; }
    static BallSpec two_sided(int n, double eps) { return {BallMode::two_sided, n, eps, 1}; }
    static BallSpec forward_infinite(int t, double eps) {
        return {BallMode::forward_infinite, 1, eps, t};
    }
    static BallSpec two_sided_infinite(int t, double eps) {
        return {BallMode::two_sided_infinite, 1, eps, t};
    }

    void validate() const {
        if (epsilon <= 0.0) throw std::invalid_argument("BallSpec: epsilon must be positive");
        if (n < 1) throw std::invalid_argument("BallSpec: n must be >= 1");
        if (horizon < 1) throw std::invalid_argument("BallSpec: horizon must be >= 1");
    }

    bool needs_inverse() const {
        return mode == BallMode::two_sided || mode == BallMode::two_sided_infinite;
    }
};

/// True iff every sampled iterate pair stays within epsilon. Escape of either
/// orbit counts as failure, never as an error.
inline bool in_dynamical_ball(const MapSpec& m, const Point& x, const Point& y,
                              const BallSpec& spec) {
    spec.validate();
    if (spec.needs_inverse() && !m.invertible())
        throw unavailable_error("two-sided dynamical ball requires an invertible map");

    int fwd_steps = 0, bwd_steps = 0;
    switch (spec.mode) {
        case BallMode::forward: fwd_steps = spec.n - 1; break;
        case BallMode::two_sided: fwd_steps = bwd_steps = spec.n - 1; break;
        case BallMode::forward_infinite: fwd_steps = spec.horizon; break;
        case BallMode::two_sided_infinite: fwd_steps = bwd_steps = spec.horizon; break;
    }

    if (x.escaped || y.escaped) return false;
    if (m.distance(x, y) > spec.epsilon) return false;

    Point fx = x, fy = y;
    for (int j = 0; j < fwd_steps; ++j) {
        fx = m.eval(fx);
        fy = m.eval(fy);
        if (fx.escaped || fy.escaped) return false;
        if (m.distance(fx, fy) > spec.epsilon) return false;
    }
    Point bx = x, by = y;
    for (int j = 0; j < bwd_steps; ++j) {
        bx = m.inverse(bx);
        by = m.inverse(by);
        if (bx.escaped || by.escaped) return false;
        if (m.distance(bx, by) > spec.epsilon) return false;
    }
    return true;
}

}  // namespace entrolab
