#pragma once

// Finite samples of phase space standing in for the compact manifold. Every
// cloud is deterministic given its provenance, and index order is the
// tie-break order for all greedy constructions downstream.

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "entrolab/common.hpp"
#include "entrolab/maps.hpp"

namespace entrolab {

enum class CloudProvenance { grid, random, explicit_list };

class PointCloud {
public:
    /// Regular grid on T^dim with per_axis points per axis (mesh 1/per_axis).
    /// Coordinate 0 varies fastest in index order.
    static PointCloud torus_grid(int dim, int per_axis) {
        if (dim < 1 || per_axis < 1) throw std::invalid_argument("torus_grid: bad shape");
        PointCloud c;
        c.dim_ = dim;
        c.provenance_ = CloudProvenance::grid;
        c.mesh_ = 1.0 / per_axis;
        c.grid_per_axis_ = per_axis;
        size_t total = 1;
        for (int i = 0; i < dim; ++i) total *= static_cast<size_t>(per_axis);
        c.flat_.reserve(total * dim);
        std::vector<int> idx(dim, 0);
        for (size_t n = 0; n < total; ++n) {
            for (int i = 0; i < dim; ++i)
                c.flat_.push_back(static_cast<double>(idx[i]) / per_axis);
            for (int i = 0; i < dim; ++i) {
                if (++idx[i] < per_axis) break;
                idx[i] = 0;
            }
        }
        c.count_ = total;
        return c;
    }

    /// Seeded uniform sample of T^dim; exact duplicates are dropped keeping
    /// the first occurrence so points are pairwise distinct.
    static PointCloud torus_random(int dim, size_t count, std::uint64_t seed) {
        PointCloud c;
        c.dim_ = dim;
        c.provenance_ = CloudProvenance::random;
        c.seed_ = seed;
        SeededUniform rng(seed);
        std::unordered_set<std::uint64_t> seen;
        c.flat_.reserve(count * dim);
        std::vector<double> p(dim);
        while (c.count_ < count) {
            std::uint64_t h = 1469598103934665603ULL;
            for (int i = 0; i < dim; ++i) {
                p[i] = rng.next();
                std::uint64_t bits;
                static_assert(sizeof(bits) == sizeof(double));
                std::memcpy(&bits, &p[i], sizeof(bits));
                h = (h ^ bits) * 1099511628211ULL;
            }
            if (!seen.insert(h).second) continue;
            c.flat_.insert(c.flat_.end(), p.begin(), p.end());
            ++c.count_;
        }
        return c;
    }

    /// Grid over a planar domain box (for the Henon family).
    static PointCloud planar_grid(const Box& box, int per_axis) {
        PointCloud c;
        c.dim_ = 2;
        c.provenance_ = CloudProvenance::grid;
        c.grid_per_axis_ = per_axis;
        double hx = (box.xhi - box.xlo) / per_axis;
        double hy = (box.yhi - box.ylo) / per_axis;
        c.mesh_ = std::max(hx, hy);
        for (int iy = 0; iy < per_axis; ++iy)
            for (int ix = 0; ix < per_axis; ++ix) {
                c.flat_.push_back(box.xlo + (ix + 0.5) * hx);
                c.flat_.push_back(box.ylo + (iy + 0.5) * hy);
            }
        c.count_ = static_cast<size_t>(per_axis) * per_axis;
        return c;
    }

    static PointCloud planar_random(const Box& box, size_t count, std::uint64_t seed) {
        PointCloud c;
        c.dim_ = 2;
        c.provenance_ = CloudProvenance::random;
        c.seed_ = seed;
        SeededUniform rng(seed);
        for (size_t n = 0; n < count; ++n) {
            c.flat_.push_back(box.xlo + rng.next() * (box.xhi - box.xlo));
            c.flat_.push_back(box.ylo + rng.next() * (box.yhi - box.ylo));
        }
        c.count_ = count;
        return c;
    }

    static PointCloud from_points(const std::vector<Point>& pts) {
        if (pts.empty()) throw std::invalid_argument("from_points: empty cloud");
        PointCloud c;
        c.dim_ = pts.front().dim();
        c.provenance_ = CloudProvenance::explicit_list;
        for (const Point& p : pts) {
            if (p.dim() != c.dim_) throw std::invalid_argument("from_points: mixed dimensions");
            c.flat_.insert(c.flat_.end(), p.coords.begin(), p.coords.end());
        }
        c.count_ = pts.size();
        return c;
    }

    size_t size() const { return count_; }
    int dim() const { return dim_; }
    double mesh() const { return mesh_; }
    CloudProvenance provenance() const { return provenance_; }
    std::uint64_t seed() const { return seed_; }

    Point point(size_t i) const {
        Point p;
        p.coords.assign(flat_.begin() + i * dim_, flat_.begin() + (i + 1) * dim_);
        return p;
    }

    const double* raw(size_t i) const { return flat_.data() + i * dim_; }
    const std::vector<double>& flat() const { return flat_; }

    /// True when this is exactly the full torus grid with a power-of-two
    /// resolution, in which case grid coordinates are exact dyadics and the
    /// integer-lattice fast paths apply.
    bool is_pow2_torus_grid() const {
        if (provenance_ != CloudProvenance::grid || grid_per_axis_ <= 0) return false;
        int g = grid_per_axis_;
        return (g & (g - 1)) == 0;
    }
    int grid_per_axis() const { return grid_per_axis_; }

private:
    int dim_ = 0;
    size_t count_ = 0;
    double mesh_ = 0.0;
    int grid_per_axis_ = -1;
    std::uint64_t seed_ = 0;
    CloudProvenance provenance_ = CloudProvenance::explicit_list;
    std::vector<double> flat_;
};

}  // namespace entrolab
