#pragma once

// Pliss-time extraction for bounded real sequences: the indices n_j with
//   sum_{i=n+1}^{n_j} a_i <= c1 (n_j - n)   for all 0 <= n < n_j,
// found by a running-minimum scan on prefix sums of (a_i - c1). When the
// hypothesis sum a_i <= c2 N holds, the count exceeds theta N with
// theta = (c1 - c2)/(c1 - a*).

#include <stdexcept>
#include <vector>

namespace entrolab {

struct PlissParams {
    double a_star = 0.0;  // lower bound on the sequence
    double c1 = 0.0;
    double c2 = 0.0;

    void validate() const {
        if (!(a_star <= c2) || !(c2 < c1))
            throw std::invalid_argument("PlissParams: need a_star <= c2 < c1");
    }

    double theta() const {
        validate();
        return (c1 - c2) / (c1 - a_star);
    }
};

inline double pliss_theta(double a_star, double c1, double c2) {
    return PlissParams{a_star, c1, c2}.theta();
}

struct PlissResult {
    std::vector<int> times;  // 1-based indices n_j, strictly increasing
    int count_l = 0;
    int n_total = 0;
    double theta = 0.0;
    bool hypothesis_ok = false;  // sum a_i <= c2 N
};

/// Exactly the set of indices satisfying the defining inequality. Ties
/// (equality) are accepted since the inequality is non-strict.
inline PlissResult pliss_times(const std::vector<double>& a, const PlissParams& p) {
    p.validate();
    for (double ai : a)
        if (ai < p.a_star)
            throw std::invalid_argument("pliss_times: sequence value below a_star");

    PlissResult res;
    res.n_total = static_cast<int>(a.size());
    res.theta = p.theta();

    double sum = 0.0;
    for (double ai : a) sum += ai;
    res.hypothesis_ok = (sum <= p.c2 * res.n_total);

    // n_j qualifies iff S_{n_j} <= min_{0 <= n < n_j} S_n for the prefix sums
    // S_k of (a_i - c1); equivalent to the double-indexed condition.
    double s = 0.0, run_min = 0.0;  // S_0 = 0
    for (int k = 1; k <= res.n_total; ++k) {
        s += a[static_cast<size_t>(k - 1)] - p.c1;
        if (s <= run_min) res.times.push_back(k);
        if (s < run_min) run_min = s;
    }
    res.count_l = static_cast<int>(res.times.size());
    return res;
}

}  // namespace entrolab
