#pragma once

// Exponent-gap analysis at periodic orbits: the period cocycle's eigenvalue
// moduli, per-iterate exponents, and the "at most one exponent in
// [-gamma, gamma], and then real and simple" gap test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "entrolab/cocycle.hpp"
#include "entrolab/linalg.hpp"
#include "entrolab/maps.hpp"

namespace entrolab {

struct PeriodicAnalysis {
    int period = 0;
    std::vector<double> exponents;  // per iterate, sorted descending
    double gamma_gap = 0.0;
    int center_count = 0;  // exponents inside [-gamma, gamma]
    bool passes_gap = false;
    int dims_below = 0, dims_center = 0, dims_above = 0;
};

inline PeriodicAnalysis periodic_orbit_analysis(const MapSpec& m, const Point& p,
                                                int claimed_period, double gamma) {
    if (claimed_period < 1)
        throw std::invalid_argument("periodic_orbit_analysis: period must be >= 1");
    if (gamma < 0.0) throw std::invalid_argument("periodic_orbit_analysis: gamma must be >= 0");

    Point back = iterate(m, p, claimed_period);
    if (back.escaped || m.distance(back, p) > 1e-9)
        throw std::invalid_argument("periodic_orbit_analysis: point is not periodic with the "
                                    "claimed period (tolerance 1e-9)");

    CocycleProduct cp = cocycle_product(m, p, claimed_period, OrbitDirection::forward);
    std::vector<std::complex<double>> roots = eigenvalues_small(cp.matrix);
    double per_root_scale = cp.log_scale;  // log-scale factored out of the product

    PeriodicAnalysis res;
    res.period = claimed_period;
    res.gamma_gap = gamma;
    for (const auto& r : roots) {
        double mod = std::abs(r);
        double expnt = (mod > 0.0 ? std::log(mod) + per_root_scale : -1e300) / claimed_period;
        res.exponents.push_back(expnt);
    }
    std::sort(res.exponents.begin(), res.exponents.end(), std::greater<double>());

    int in_band = 0;
    int band_root = -1;
    for (size_t i = 0; i < roots.size(); ++i) {
        double e = (std::abs(roots[i]) > 0.0)
                       ? (std::log(std::abs(roots[i])) + per_root_scale) / claimed_period
                       : -1e300;
        if (e >= -gamma && e <= gamma) {
            ++in_band;
            band_root = static_cast<int>(i);
        }
        if (e < -gamma) ++res.dims_below;
        if (e > gamma) ++res.dims_above;
    }
    res.dims_center = in_band;
    res.center_count = in_band;

    if (in_band == 0) {
        res.passes_gap = true;
    } else if (in_band == 1) {
        const auto& r = roots[static_cast<size_t>(band_root)];
        double scale = std::max(1.0, std::abs(r));
        bool real = std::fabs(r.imag()) <= 1e-8 * scale;
        bool simple = true;
        for (size_t j = 0; j < roots.size(); ++j) {
            if (static_cast<int>(j) == band_root) continue;
            if (std::abs(roots[j] - r) <= 1e-6 * scale) simple = false;
        }
        res.passes_gap = real && simple;
    } else {
        res.passes_gap = false;
    }
    return res;
}

}  // namespace entrolab
