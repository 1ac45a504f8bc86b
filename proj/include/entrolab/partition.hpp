#pragma once

// Box partitions and itinerary words. Cells of the refined partition are
// realized implicitly as distinct words, never as materialized intersections.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "entrolab/maps.hpp"
#include "entrolab/point_cloud.hpp"

namespace entrolab {

/// Product partition into half-open boxes from per-axis cut lists. Cuts are
/// sorted values in [0,1) starting at 0; axis cells are [cut_j, cut_{j+1})
/// with the last wrapping to 1. Every torus point classifies to exactly one
/// cell.
class BoxPartition {
public:
    static BoxPartition torus_mesh(int dim, int cells_per_axis) {
        if (dim < 1 || cells_per_axis < 1)
            throw std::invalid_argument("BoxPartition: bad mesh shape");
        std::vector<std::vector<double>> cuts(static_cast<size_t>(dim));
        for (auto& c : cuts)
            for (int i = 0; i < cells_per_axis; ++i)
                c.push_back(static_cast<double>(i) / cells_per_axis);
        return torus_axis_cuts(std::move(cuts));
    }

    static BoxPartition torus_axis_cuts(std::vector<std::vector<double>> cuts) {
        BoxPartition p;
        p.cuts_ = std::move(cuts);
        p.dim_ = static_cast<int>(p.cuts_.size());
        if (p.dim_ < 1) throw std::invalid_argument("BoxPartition: no axes");
        p.cells_ = 1;
        p.mesh_ = 0.0;
        for (auto& c : p.cuts_) {
            if (c.empty() || c.front() != 0.0)
                throw std::invalid_argument("BoxPartition: each axis needs cuts starting at 0");
            if (!std::is_sorted(c.begin(), c.end()) ||
                std::adjacent_find(c.begin(), c.end()) != c.end() || c.back() >= 1.0)
                throw std::invalid_argument("BoxPartition: cuts must be strictly increasing in [0,1)");
            p.cells_ *= c.size();
            for (size_t i = 0; i < c.size(); ++i) {
                double hi = (i + 1 < c.size()) ? c[i + 1] : 1.0;
                p.mesh_ = std::max(p.mesh_, hi - c[i]);
            }
        }
        return p;
    }

    int dim() const { return dim_; }
    size_t cell_count() const { return cells_; }
    double mesh() const { return mesh_; }

    /// Cell index of a point; -1 for escaped planar points.
    int classify(const Point& x) const {
        if (x.escaped) return -1;
        if (x.dim() != dim_) throw std::invalid_argument("BoxPartition: dimension mismatch");
        size_t idx = 0;
        for (int a = dim_ - 1; a >= 0; --a) {
            const auto& c = cuts_[static_cast<size_t>(a)];
            double v = wrap01(x[a]);
            auto it = std::upper_bound(c.begin(), c.end(), v);
            size_t cell = static_cast<size_t>(it - c.begin()) - 1;
            idx = idx * c.size() + cell;
        }
        return static_cast<int>(idx);
    }

private:
    int dim_ = 0;
    size_t cells_ = 0;
    double mesh_ = 0.0;
    std::vector<std::vector<double>> cuts_;
};

/// -sum p log p with 0 log 0 = 0, in nats. The weights must be a probability
/// vector up to 1e-9.
inline double partition_entropy(const std::vector<double>& weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("partition_entropy: negative weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("partition_entropy: weights must sum to 1");
    double h = 0.0;
    for (double w : weights)
        if (w > 0.0) h -= w * std::log(w);
    return std::max(0.0, h);
}

struct ItinerarySet {
    std::vector<std::vector<int>> words;  // one word per surviving point, input order
    size_t escaped_dropped = 0;           // points whose orbit escaped before n steps
};

/// Itinerary words of length n (cell indices of iterates 0..n-1) for every
/// point; escaped orbits are dropped and counted rather than erroring.
inline ItinerarySet itineraries(const MapSpec& m, const BoxPartition& xi,
                                const PointCloud& pts, int n) {
    if (n < 1) throw std::invalid_argument("itineraries: n must be >= 1");
    ItinerarySet out;
    for (size_t i = 0; i < pts.size(); ++i) {
        Point p = pts.point(i);
        std::vector<int> w;
        w.reserve(static_cast<size_t>(n));
        bool ok = true;
        for (int j = 0; j < n; ++j) {
            if (p.escaped) {
                ok = false;
                break;
            }
            w.push_back(xi.classify(p));
            if (j + 1 < n) p = m.eval(p);
        }
        if (ok)
            out.words.push_back(std::move(w));
        else
            ++out.escaped_dropped;
    }
    return out;
}

/// The refined partition xi^n realized as the distinct itinerary words on an
/// evaluation cloud, sorted lexicographically.
inline std::vector<std::vector<int>> refine_partition(const MapSpec& m, const BoxPartition& xi,
                                                      int n, const PointCloud& eval_points) {
    ItinerarySet set = itineraries(m, xi, eval_points, n);
    std::sort(set.words.begin(), set.words.end());
    set.words.erase(std::unique(set.words.begin(), set.words.end()), set.words.end());
    return set.words;
}

}  // namespace entrolab
