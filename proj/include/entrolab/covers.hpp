#pragma once

// Open-cover entropy: the joined cover beta^n = { A_{i0} cap f^-1 A_{i1} cap
// ... cap f^-(n-1) A_{i(n-1)} } realized through itinerary words on an
// evaluation grid, with a greedy set-cover upper bound for the minimal
// subcover cardinality.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "entrolab/maps.hpp"
#include "entrolab/point_cloud.hpp"

namespace entrolab {

/// Open box on the torus, one open interval (lo, hi) per axis with hi - lo
/// <= 1; membership is taken mod 1 so intervals may straddle 0.
struct CoverBox {
    std::vector<std::pair<double, double>> intervals;

    bool contains(const Point& p) const {
        for (size_t c = 0; c < intervals.size(); ++c) {
            auto [lo, hi] = intervals[c];
            double x = p[static_cast<int>(c)];
            bool in = (x > lo && x < hi) || (x + 1.0 > lo && x + 1.0 < hi) ||
                      (x - 1.0 > lo && x - 1.0 < hi);
            if (!in) return false;
        }
        return true;
    }
};

/// Per-axis family of s open intervals of the given length, shifted by 1/s;
/// covers the torus whenever length > 1/s.
inline std::vector<CoverBox> shifted_interval_cover(int dim, int s, double length) {
    if (length <= 1.0 / s)
        throw std::invalid_argument("shifted_interval_cover: intervals too short to cover");
    std::vector<CoverBox> boxes;
    std::vector<int> idx(static_cast<size_t>(dim), 0);
    size_t total = 1;
    for (int c = 0; c < dim; ++c) total *= static_cast<size_t>(s);
    for (size_t n = 0; n < total; ++n) {
        CoverBox b;
        for (int c = 0; c < dim; ++c) {
            double lo = static_cast<double>(idx[static_cast<size_t>(c)]) / s;
            b.intervals.emplace_back(lo, lo + length);
        }
        boxes.push_back(std::move(b));
        for (int c = 0; c < dim; ++c) {
            if (++idx[static_cast<size_t>(c)] < s) break;
            idx[static_cast<size_t>(c)] = 0;
        }
    }
    return boxes;
}

struct CoverEntropyResult {
    std::uint64_t count = 0;  // greedy subcover cardinality (upper bound)
    double rate = 0.0;        // (1/n) log count
};

namespace detail {

using BoxMask = std::array<std::uint64_t, 2>;  // up to 128 boxes

inline void mask_set(BoxMask& m, int b) { m[static_cast<size_t>(b >> 6)] |= 1ull << (b & 63); }
inline bool mask_get(const BoxMask& m, int b) {
    return (m[static_cast<size_t>(b >> 6)] >> (b & 63)) & 1ull;
}
inline bool mask_empty(const BoxMask& m) { return m[0] == 0 && m[1] == 0; }
inline int mask_lowest(const BoxMask& m) {
    if (m[0]) return __builtin_ctzll(m[0]);
    return 64 + __builtin_ctzll(m[1]);
}

}  // namespace detail

/// Greedy upper bound for |beta^n| on an evaluation grid. Candidate words are
/// the canonical itineraries (lowest covering box index at each step); the
/// greedy pass picks the word covering the most uncovered grid points, ties
/// broken lexicographically.
inline CoverEntropyResult cover_entropy(const MapSpec& m, const std::vector<CoverBox>& cover,
                                        int n, int eval_per_axis = 0) {
    if (!m.is_toral())
        throw unavailable_error("cover_entropy requires a toral map");
    if (n < 1) throw std::invalid_argument("cover_entropy: n must be >= 1");
    if (cover.empty() || cover.size() > 128)
        throw std::invalid_argument("cover_entropy: need between 1 and 128 boxes");
    for (const auto& b : cover)
        if (static_cast<int>(b.intervals.size()) != m.dim())
            throw std::invalid_argument("cover_entropy: box dimension mismatch");

    if (eval_per_axis <= 0) {
        double min_side = 1.0;
        for (const auto& b : cover)
            for (auto [lo, hi] : b.intervals) min_side = std::min(min_side, hi - lo);
        eval_per_axis = std::max(8, static_cast<int>(std::ceil(4.0 / min_side)));
    }
    PointCloud grid = PointCloud::torus_grid(m.dim(), eval_per_axis);
    size_t np = grid.size();
    int nb = static_cast<int>(cover.size());

    // membership masks per grid point and step
    std::vector<detail::BoxMask> masks(np * static_cast<size_t>(n));
    for (size_t i = 0; i < np; ++i) {
        Point p = grid.point(i);
        for (int j = 0; j < n; ++j) {
            detail::BoxMask mk{0, 0};
            for (int b = 0; b < nb; ++b)
                if (cover[static_cast<size_t>(b)].contains(p)) detail::mask_set(mk, b);
            if (detail::mask_empty(mk))
                throw std::invalid_argument("cover_entropy: cover fails to cover the grid");
            masks[i * static_cast<size_t>(n) + static_cast<size_t>(j)] = mk;
            if (j + 1 < n) p = m.eval(p);
        }
    }

    // canonical words, deduplicated and sorted lexicographically
    std::vector<std::vector<int>> words(np, std::vector<int>(static_cast<size_t>(n)));
    for (size_t i = 0; i < np; ++i)
        for (int j = 0; j < n; ++j)
            words[i][static_cast<size_t>(j)] =
                detail::mask_lowest(masks[i * static_cast<size_t>(n) + static_cast<size_t>(j)]);
    std::vector<std::vector<int>> family = words;
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());

    // incidence bitsets: word w covers p iff every letter's box contains the
    // matching iterate
    size_t wcount = family.size();
    size_t stride = (np + 63) / 64;
    std::vector<std::uint64_t> incidence(wcount * stride, 0);
    for (size_t w = 0; w < wcount; ++w)
        for (size_t i = 0; i < np; ++i) {
            bool covers = true;
            for (int j = 0; j < n; ++j)
                if (!detail::mask_get(
                        masks[i * static_cast<size_t>(n) + static_cast<size_t>(j)],
                        family[w][static_cast<size_t>(j)])) {
                    covers = false;
                    break;
                }
            if (covers) incidence[w * stride + i / 64] |= 1ull << (i & 63);
        }

    std::vector<std::uint64_t> uncovered(stride, ~0ull);
    if (np % 64) uncovered[stride - 1] = (1ull << (np % 64)) - 1;
    size_t remaining = np;
    std::uint64_t chosen = 0;
    while (remaining > 0) {
        size_t best = wcount;
        size_t best_gain = 0;
        for (size_t w = 0; w < wcount; ++w) {
            size_t gain = 0;
            const std::uint64_t* row = incidence.data() + w * stride;
            for (size_t b = 0; b < stride; ++b)
                gain += static_cast<size_t>(__builtin_popcountll(row[b] & uncovered[b]));
            if (gain > best_gain) {  // first maximum wins: family is lex sorted
                best_gain = gain;
                best = w;
            }
        }
        if (best == wcount || best_gain == 0)
            throw std::logic_error("cover_entropy: greedy stalled");  // cannot happen
        const std::uint64_t* row = incidence.data() + best * stride;
        for (size_t b = 0; b < stride; ++b) uncovered[b] &= ~row[b];
        remaining -= best_gain;
        ++chosen;
    }

    CoverEntropyResult res;
    res.count = chosen;
    res.rate = std::log(static_cast<double>(chosen)) / n;
    return res;
}

}  // namespace entrolab
