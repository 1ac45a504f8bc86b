#pragma once

// Growth rates and topological-entropy estimates from count curves.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "entrolab/nets.hpp"
#include "entrolab/point_cloud.hpp"

namespace entrolab {

enum class BoundDirection { upper, lower, point };

inline const char* bound_name(BoundDirection b) {
    switch (b) {
        case BoundDirection::upper: return "upper";
        case BoundDirection::lower: return "lower";
        case BoundDirection::point: return "point";
    }
    return "?";
}

struct GrowthFit {
    double slope = 0.0;      // least-squares slope of log count vs n
    double residual = 0.0;   // RMS residual of the fit
    double max_step = 0.0;   // max successive difference of log counts (diagnostic)
    int n_lo = 0, n_hi = 0;  // window actually used
};

/// Least-squares slope of log count versus n over [w_lo, w_hi]; the finite-n
/// proxy for the limsup growth rate. A constant window is reported as slope
/// exactly zero.
inline GrowthFit growth_rate(const CountCurve& curve, int w_lo, int w_hi) {
    std::vector<double> xs, ys;
    for (const auto& [n, c] : curve.entries)
        if (n >= w_lo && n <= w_hi) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(std::log(static_cast<double>(c)));
        }
    if (xs.size() < 2)
        throw std::invalid_argument("growth_rate: window must contain at least 2 entries");

    GrowthFit fit;
    fit.n_lo = static_cast<int>(xs.front());
    fit.n_hi = static_cast<int>(xs.back());
    for (size_t i = 1; i < ys.size(); ++i)
        fit.max_step = std::max(fit.max_step, ys[i] - ys[i - 1]);

    bool constant = std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys[0]; });
    if (constant) return fit;  // slope and residual exactly zero

    double xm = 0, ym = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= xs.size();
    ym /= ys.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - xm) * (ys[i] - ym);
        sxx += (xs[i] - xm) * (xs[i] - xm);
    }
    fit.slope = sxy / sxx;
    double sr = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (ym + fit.slope * (xs[i] - xm));
        sr += r * r;
    }
    fit.residual = std::sqrt(sr / xs.size());
    return fit;
}

struct EntropyEstimate {
    double value = 0.0;  // nats per iterate, clamped at 0
    std::vector<double> epsilon_schedule;
    int n_lo = 0, n_hi = 0;  // fit window at the smallest epsilon
    double fit_residual = 0.0;
    BoundDirection bound = BoundDirection::lower;
};

struct EntropyPerEpsilon {
    double epsilon = 0.0;
    CountCurve curve;
    GrowthFit fit;
    bool saturated_from_start = false;
};

struct EntropyRun {
    EntropyEstimate estimate;
    std::vector<EntropyPerEpsilon> per_epsilon;
};

struct EntropyOptions {
    NetOptions net;
    // counts above this fraction of the cloud are saturated by the finite
    // sample and excluded from the fit window
    double saturation_fraction = 0.5;
};

namespace detail {

// Fit window for one count curve: drop the n = 1 packing anchor and the
// saturated tail, where the finite cloud caps the counts.
inline std::pair<int, int> fit_window(const CountCurve& c, size_t cloud_size,
                                      double sat_frac, bool* saturated_from_start) {
    double cap = sat_frac * static_cast<double>(cloud_size);
    int n_hi = 0;
    for (const auto& [n, cnt] : c.entries) {
        if (static_cast<double>(cnt) <= cap)
            n_hi = n;
        else
            break;
    }
    int n_max = c.entries.back().first;
    *saturated_from_start = (n_hi < 2);
    if (n_hi < 2) n_hi = std::min(2, n_max);
    int n_lo = (n_hi >= 3) ? 2 : 1;
    return {n_lo, n_hi};
}

}  // namespace detail

/// Separated-count growth rates over an epsilon schedule; the headline value
/// is the rate at the smallest epsilon and is a LOWER bound by construction.
inline EntropyRun entropy_estimate(const MapSpec& m, const PointCloud& k,
                                   std::vector<double> eps_schedule, int n_max,
                                   const EntropyOptions& opts = {}) {
    if (eps_schedule.empty())
        throw std::invalid_argument("entropy_estimate: empty epsilon schedule");
    if (n_max < 2) throw std::invalid_argument("entropy_estimate: n_max must be >= 2");
    double eps_min = *std::min_element(eps_schedule.begin(), eps_schedule.end());
    if (eps_min <= 0.0) throw std::invalid_argument("entropy_estimate: epsilons must be positive");
    if (k.provenance() == CloudProvenance::grid && !(k.mesh() <= eps_min / 4.0))
        throw std::invalid_argument(
            "entropy_estimate: grid mesh must satisfy mesh <= min(eps)/4");

    EntropyRun run;
    for (double eps : eps_schedule) {
        EntropyPerEpsilon pe;
        pe.epsilon = eps;
        pe.curve = count_curve(m, k, eps, n_max, CurveKind::separated_lower, opts.net);
        auto [lo, hi] = detail::fit_window(pe.curve, k.size(), opts.saturation_fraction,
                                           &pe.saturated_from_start);
        pe.fit = growth_rate(pe.curve, lo, hi);
        run.per_epsilon.push_back(std::move(pe));
    }

    const EntropyPerEpsilon* smallest = &run.per_epsilon.front();
    for (const auto& pe : run.per_epsilon)
        if (pe.epsilon < smallest->epsilon) smallest = &pe;

    run.estimate.value = std::max(0.0, smallest->fit.slope);
    run.estimate.epsilon_schedule = std::move(eps_schedule);
    run.estimate.n_lo = smallest->fit.n_lo;
    run.estimate.n_hi = smallest->fit.n_hi;
    run.estimate.fit_residual = smallest->fit.residual;
    run.estimate.bound = BoundDirection::lower;
    return run;
}

}  // namespace entrolab
