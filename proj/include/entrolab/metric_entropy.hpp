#pragma once

// Measure-theoretic entropy from empirical measures: Shannon entropy of the
// itinerary-word distribution fitted against word length, plus the
// variational inequality check h_mu <= h_top.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "entrolab/entropy.hpp"
#include "entrolab/maps.hpp"
#include "entrolab/partition.hpp"
#include "entrolab/point_cloud.hpp"

namespace entrolab {

/// Finite-support surrogate for an invariant measure: uniform weights 1/n on
/// the support points (a seeded orbit or a seeded sample).
struct EmpiricalMeasure {
    PointCloud support;

    static EmpiricalMeasure from_cloud(PointCloud c) { return {std::move(c)}; }

    static EmpiricalMeasure from_orbit(const MapSpec& m, const Point& start, size_t length) {
        std::vector<Point> pts;
        pts.reserve(length);
        Point p = start;
        for (size_t i = 0; i < length; ++i) {
            if (p.escaped) break;
            pts.push_back(p);
            p = m.eval(p);
        }
        if (pts.empty()) throw escape_error("EmpiricalMeasure: orbit escaped immediately");
        return {PointCloud::from_points(pts)};
    }
};

struct MetricEntropyRun {
    double value = 0.0;                  // fitted slope of H_n, clamped at 0
    std::vector<int> ns;                 // requested window
    std::vector<double> h_per_n;         // empirical H at each n
    std::vector<size_t> distinct_words;  // word counts at each n
    int fit_lo = 0, fit_hi = 0;          // window actually fitted
    bool saturated_trim = false;         // fit window shortened by the support guard
    bool short_support = false;          // support below 100 x cell count
};

/// Empirical word entropies H_n over the window with a least-squares slope.
/// Word statistics saturate once the distinct-word count approaches the
/// support size, so the fitted window is trimmed to n with
/// distinct(n) <= support/3; the full requested sequence is still reported.
inline MetricEntropyRun metric_entropy_estimate(const MapSpec& m, const EmpiricalMeasure& mu,
                                                const BoxPartition& xi, int window_lo,
                                                int window_hi) {
    if (window_lo < 1 || window_hi <= window_lo)
        throw std::invalid_argument("metric_entropy_estimate: need 1 <= lo < hi");

    ItinerarySet set = itineraries(m, xi, mu.support, window_hi);
    size_t support = set.words.size();
    if (support == 0) throw escape_error("metric_entropy_estimate: all orbits escaped");

    MetricEntropyRun run;
    run.short_support = support < 100 * xi.cell_count();

    // sort once by the full word; every prefix length then groups contiguously
    std::vector<const std::vector<int>*> order;
    order.reserve(support);
    for (const auto& w : set.words) order.push_back(&w);
    std::sort(order.begin(), order.end(),
              [](const auto* a, const auto* b) { return *a < *b; });

    auto prefix_equal = [](const std::vector<int>& a, const std::vector<int>& b, int n) {
        for (int i = 0; i < n; ++i)
            if (a[static_cast<size_t>(i)] != b[static_cast<size_t>(i)]) return false;
        return true;
    };

    for (int n = window_lo; n <= window_hi; ++n) {
        std::vector<size_t> counts;
        size_t run_len = 1;
        for (size_t i = 1; i < support; ++i) {
            if (prefix_equal(*order[i - 1], *order[i], n)) {
                ++run_len;
            } else {
                counts.push_back(run_len);
                run_len = 1;
            }
        }
        counts.push_back(run_len);
        double h = 0.0;
        double total = static_cast<double>(support);
        for (size_t c : counts) {
            double p = static_cast<double>(c) / total;
            h -= p * std::log(p);
        }
        run.ns.push_back(n);
        run.h_per_n.push_back(std::max(0.0, h));
        run.distinct_words.push_back(counts.size());
    }

    // trim the saturated tail
    int hi_used = window_lo;
    for (size_t i = 0; i < run.ns.size(); ++i)
        if (run.distinct_words[i] * 3 <= support) hi_used = run.ns[i];
    if (hi_used < window_lo + 1) {
        hi_used = window_lo + 1;
        run.saturated_trim = true;
    } else if (hi_used < window_hi) {
        run.saturated_trim = true;
    }
    run.fit_lo = window_lo;
    run.fit_hi = hi_used;

    // least-squares slope of H versus n over [fit_lo, fit_hi]
    std::vector<double> xs, ys;
    for (size_t i = 0; i < run.ns.size(); ++i)
        if (run.ns[i] >= run.fit_lo && run.ns[i] <= run.fit_hi) {
            xs.push_back(static_cast<double>(run.ns[i]));
            ys.push_back(run.h_per_n[i]);
        }
    bool constant = std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys[0]; });
    if (!constant) {
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
        run.value = std::max(0.0, sxy / sxx);
    }
    return run;
}

enum class VariationalVerdict { pass, fail_with_caveat, fail };

inline const char* variational_name(VariationalVerdict v) {
    switch (v) {
        case VariationalVerdict::pass: return "pass";
        case VariationalVerdict::fail_with_caveat: return "fail_with_caveat";
        case VariationalVerdict::fail: return "fail";
    }
    return "?";
}

/// h_mu <= h_top up to tolerance. When h_top is only a lower bound a failure
/// carries a caveat: a lower bound below h_mu does not witness a violation.
inline VariationalVerdict variational_check(double h_mu, const EntropyEstimate& h_top,
                                            double tolerance) {
    if (h_mu <= h_top.value + tolerance) return VariationalVerdict::pass;
    return h_top.bound == BoundDirection::lower ? VariationalVerdict::fail_with_caveat
                                                : VariationalVerdict::fail;
}

}  // namespace entrolab
