#pragma once

// Greedy (n,eps)-nets over a point cloud. Processing points in cloud index
// order and accepting any point farther than eps (in dynamical distance d_n)
// from all accepted points yields a set that is simultaneously
//   - (n,eps)-separated, hence a LOWER bound on the maximal separated count,
//   - (n,eps)-spanning for the cloud, hence an UPPER bound on the minimal
//     spanning count restricted to the cloud.
// spanning_count and separated_count therefore share one construction and
// differ only in the reported bound direction.
//
// Three engines compute the identical greedy result:
//   naive   - reference, O(points * accepted * n), used by tests
//   hashed  - prunes candidate pairs by time-0 buckets (d_n >= d_0), generic
//   lattice - integer arithmetic on difference vectors; applies to
//             lattice-exact toral maps on full power-of-two grids, where
//             d_n(x, y) depends only on x - y and every quantity is an exact
//             dyadic, so results are bit-identical to the generic engines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "entrolab/maps.hpp"
#include "entrolab/parallel.hpp"
#include "entrolab/point_cloud.hpp"

namespace entrolab {

enum class CurveKind { spanning_upper, separated_lower, subcover_upper };

struct CountCurve {
    CurveKind kind = CurveKind::separated_lower;
    std::vector<std::pair<int, std::uint64_t>> entries;  // (n, count), n increasing

    std::uint64_t count_at(int n) const {
        for (const auto& e : entries)
            if (e.first == n) return e.second;
        throw std::out_of_range("CountCurve: no entry at requested n");
    }
};

enum class NetEngine { automatic, naive, hashed, lattice };

struct NetOptions {
    NetEngine engine = NetEngine::automatic;
    int workers = 1;  // used only for orbit-table fill; the greedy is sequential
};

namespace detail {

// Orbit table: iterates 0..n_max of every cloud point, point-major layout.
struct OrbitTable {
    int dim = 0, n_max = 0;
    size_t count = 0;
    std::vector<double> data;      // [(i * (n_max+1) + j) * dim + k]
    std::vector<int> alive_steps;  // iterates available before escape (n_max+1 if full)

    const double* at(size_t i, int j) const {
        return data.data() + (i * static_cast<size_t>(n_max + 1) + j) * dim;
    }
};

inline OrbitTable build_orbit_table(const MapSpec& m, const PointCloud& k, int n_max,
                                    int workers) {
    OrbitTable t;
    t.dim = k.dim();
    t.n_max = n_max;
    t.count = k.size();
    size_t bytes = t.count * static_cast<size_t>(n_max + 1) * t.dim * sizeof(double);
    if (bytes > (3ull << 30))
        throw std::runtime_error("orbit table would exceed 3 GiB; reduce the grid or n_max");
    t.data.resize(t.count * static_cast<size_t>(n_max + 1) * t.dim);
    t.alive_steps.resize(t.count);
    parallel_chunks(t.count, workers, [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            Point p = k.point(i);
            int alive = n_max + 1;
            for (int j = 0; j <= n_max; ++j) {
                double* dst = t.data.data() + (i * static_cast<size_t>(n_max + 1) + j) * t.dim;
                if (p.escaped) {
                    if (alive > j) alive = j;
                    for (int c = 0; c < t.dim; ++c) dst[c] = 0.0;
                    continue;
                }
                for (int c = 0; c < t.dim; ++c) dst[c] = p[c];
                if (j < n_max) p = m.eval(p);
            }
            t.alive_steps[i] = alive;
        }
    });
    return t;
}

inline bool dyn_close(const OrbitTable& t, bool toral, size_t a, size_t b, int n,
                      double eps) {
    if (t.alive_steps[a] < n || t.alive_steps[b] < n) return false;
    for (int j = 0; j < n; ++j) {
        const double* pa = t.at(a, j);
        const double* pb = t.at(b, j);
        for (int c = 0; c < t.dim; ++c) {
            double d = std::fabs(pa[c] - pb[c]);
            if (toral && d > 0.5) d = 1.0 - d;
            if (d > eps) return false;
        }
    }
    return true;
}

// Greedy net, reference implementation.
inline std::uint64_t greedy_net_naive(const MapSpec& m, const OrbitTable& t, int n,
                                      double eps) {
    bool toral = m.is_toral();
    std::vector<size_t> accepted;
    for (size_t i = 0; i < t.count; ++i) {
        if (t.alive_steps[i] < n) continue;  // escaped orbits are excluded
        bool blocked = false;
        for (size_t a : accepted)
            if (dyn_close(t, toral, a, i, n, eps)) {
                blocked = true;
                break;
            }
        if (!blocked) accepted.push_back(i);
    }
    return accepted.size();
}

// Spatial buckets over time-0 coordinates with side >= eps per axis.
struct BucketGrid {
    int dim = 0;
    bool toral = true;
    double lo[4] = {0, 0, 0, 0};
    double extent[4] = {1, 1, 1, 1};
    int side[4] = {1, 1, 1, 1};
    size_t nbuckets = 1;
    std::vector<std::vector<std::uint32_t>> cells;

    BucketGrid(const MapSpec& m, int dim_, double eps) : dim(dim_), toral(m.is_toral()) {
        int cap_per_axis = dim <= 2 ? 2048 : (dim == 3 ? 160 : 45);
        for (int c = 0; c < dim; ++c) {
            if (!toral) {
                const Box& b = m.domain_box();
                lo[c] = (c == 0 ? b.xlo : b.ylo);
                extent[c] = (c == 0 ? b.xhi - b.xlo : b.yhi - b.ylo);
            }
            side[c] = std::max(1, static_cast<int>(std::floor(extent[c] / eps)));
            side[c] = std::min(side[c], cap_per_axis);
            nbuckets *= static_cast<size_t>(side[c]);
        }
        cells.resize(nbuckets);
    }

    void coords_of(const double* p, int* out) const {
        for (int c = 0; c < dim; ++c) {
            double f = (p[c] - lo[c]) / extent[c];
            int b = static_cast<int>(f * side[c]);
            if (b >= side[c]) b = side[c] - 1;
            if (b < 0) b = 0;
            out[c] = b;
        }
    }

    size_t flat(const int* coord) const {
        size_t idx = 0;
        for (int c = dim - 1; c >= 0; --c) idx = idx * side[c] + static_cast<size_t>(coord[c]);
        return idx;
    }

    void insert(const double* p, std::uint32_t id) {
        int coord[4];
        coords_of(p, coord);
        cells[flat(coord)].push_back(id);
    }

    // visit each bucket in the +-1 neighborhood once (duplicates from small
    // wrap-around grids are harmless but wasteful, so dedupe inline)
    template <typename Fn>
    void for_neighbors(const double* p, Fn&& fn) const {
        int base[4];
        coords_of(p, base);
        size_t seen[81];
        int nseen = 0;
        int total = 1;
        for (int c = 0; c < dim; ++c) total *= 3;
        for (int mask = 0; mask < total; ++mask) {
            int rem = mask;
            int coord[4];
            bool valid = true;
            for (int c = 0; c < dim; ++c) {
                int off = rem % 3 - 1;
                rem /= 3;
                int b = base[c] + off;
                if (toral) {
                    if (b < 0) b += side[c];
                    if (b >= side[c]) b -= side[c];
                } else if (b < 0 || b >= side[c]) {
                    valid = false;
                    break;
                }
                coord[c] = b;
            }
            if (!valid) continue;
            size_t idx = flat(coord);
            bool dup = false;
            for (int s = 0; s < nseen; ++s)
                if (seen[s] == idx) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            seen[nseen++] = idx;
            fn(cells[idx]);
        }
    }
};

// Greedy net with time-0 bucket pruning: only accepted points with d_0 <= eps
// can block a candidate, and those live in neighboring buckets.
inline std::uint64_t greedy_net_hashed(const MapSpec& m, const OrbitTable& t, int n,
                                       double eps) {
    bool toral = m.is_toral();
    BucketGrid grid(m, t.dim, eps);
    std::uint64_t count = 0;
    for (size_t i = 0; i < t.count; ++i) {
        if (t.alive_steps[i] < n) continue;
        const double* p = t.at(i, 0);
        bool blocked = false;
        grid.for_neighbors(p, [&](const std::vector<std::uint32_t>& cell) {
            if (blocked) return;
            for (std::uint32_t a : cell)
                if (dyn_close(t, toral, a, i, n, eps)) {
                    blocked = true;
                    return;
                }
        });
        if (!blocked) {
            ++count;
            grid.insert(p, static_cast<std::uint32_t>(i));
        }
    }
    return count;
}

// ---------------------------------------------------------------------------
// Lattice engine. On the full torus grid with G = 2^k points per axis, grid
// coordinates i/G, their iterates under an integer matrix mod 1, and all
// torus distances are exact dyadics, and d_n(x,y) depends only on the lattice
// difference x - y. The greedy result is then reproduced by blocking, for
// each accepted point, the translates x + v over the difference ball
//   D_n = { v : max_{0<=j<n} ||A^j v mod G||_sup <= eps }.

// Largest tick count k with k/G <= eps, computed through the same dyadic
// comparisons the generic engines perform.
inline int ticks_within(double eps, int g) {
    int k = static_cast<int>(std::floor(eps * g));
    if (k > g / 2) k = g / 2;
    while (k + 1 <= g / 2 && static_cast<double>(k + 1) / g <= eps) ++k;
    while (k > 0 && static_cast<double>(k) / g > eps) --k;
    return k;
}

inline bool lattice_exact(const MapSpec& m, const PointCloud& k) {
    if (!k.is_pow2_torus_grid()) return false;
    int g = k.grid_per_axis();
    switch (m.kind()) {
        case MapKind::toral_automorphism:
            return true;
        case MapKind::perturbed_toral:
            return m.perturbation_eta() == 0.0;
        case MapKind::rotation: {
            for (double a : m.angles()) {
                double t = a * g;
                if (t != std::floor(t)) return false;
            }
            return true;
        }
        default:
            return false;
    }
}

struct LatticeDiffBall {
    int dim, g, ticks;
    bool is_rotation;
    std::vector<std::int64_t> a;  // row-major lift (empty for rotations)
    std::vector<std::vector<std::int64_t>> vectors;   // current difference ball
    std::vector<std::vector<std::int64_t>> iterates;  // image of each vector so far
    int n = 1;  // vectors currently represent D_n

    LatticeDiffBall(const MapSpec& m, const PointCloud& k, double eps)
        : dim(k.dim()), g(k.grid_per_axis()), ticks(ticks_within(eps, g)),
          is_rotation(m.kind() == MapKind::rotation) {
        if (!is_rotation) {
            IntMat lift = m.lift_matrix();
            a.resize(static_cast<size_t>(dim) * dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) a[static_cast<size_t>(i) * dim + j] = lift(i, j);
        }
        std::vector<std::int64_t> v(dim, 0);
        size_t total = 1;
        for (int c = 0; c < dim; ++c) total *= static_cast<size_t>(2 * ticks + 1);
        vectors.reserve(total);
        for (size_t id = 0; id < total; ++id) {
            size_t rem = id;
            for (int c = 0; c < dim; ++c) {
                std::int64_t off =
                    static_cast<std::int64_t>(rem % (2 * static_cast<size_t>(ticks) + 1)) - ticks;
                rem /= (2 * static_cast<size_t>(ticks) + 1);
                v[static_cast<size_t>(c)] = off < 0 ? off + g : off;
            }
            vectors.push_back(v);
        }
        iterates = vectors;
    }

    bool within(const std::vector<std::int64_t>& v) const {
        for (std::int64_t c : v) {
            std::int64_t d = std::min(c, g - c);
            if (d > ticks) return false;
        }
        return true;
    }

    // advance to D_{n+1}
    void refine() {
        if (is_rotation) {  // differences are invariant under a rotation
            ++n;
            return;
        }
        std::vector<std::vector<std::int64_t>> nv, ni;
        nv.reserve(vectors.size());
        ni.reserve(vectors.size());
        for (size_t i = 0; i < vectors.size(); ++i) {
            std::vector<std::int64_t> w(dim);
            for (int r = 0; r < dim; ++r) {
                std::int64_t s = 0;
                for (int c = 0; c < dim; ++c)
                    s += a[static_cast<size_t>(r) * dim + c] * iterates[i][static_cast<size_t>(c)];
                s %= g;
                if (s < 0) s += g;
                w[static_cast<size_t>(r)] = s;
            }
            if (within(w)) {
                nv.push_back(vectors[i]);
                ni.push_back(std::move(w));
            }
        }
        vectors.swap(nv);
        iterates.swap(ni);
        ++n;
    }
};

inline std::uint64_t greedy_net_lattice(const LatticeDiffBall& ball, size_t cells) {
    int dim = ball.dim;
    int g = ball.g;
    std::vector<std::uint64_t> strides(static_cast<size_t>(dim), 1);
    for (int c = 1; c < dim; ++c)
        strides[static_cast<size_t>(c)] =
            strides[static_cast<size_t>(c - 1)] * static_cast<std::uint64_t>(g);
    std::vector<std::uint8_t> blocked(cells, 0);
    std::uint64_t count = 0;
    std::vector<std::int64_t> coord(static_cast<size_t>(dim));
    for (std::uint64_t idx = 0; idx < cells; ++idx) {
        if (blocked[idx]) continue;
        ++count;
        std::uint64_t rem = idx;
        for (int c = 0; c < dim; ++c) {
            coord[static_cast<size_t>(c)] = static_cast<std::int64_t>(rem % g);
            rem /= static_cast<std::uint64_t>(g);
        }
        for (const auto& v : ball.vectors) {
            std::uint64_t target = 0;
            for (int c = 0; c < dim; ++c) {
                std::int64_t cc = coord[static_cast<size_t>(c)] + v[static_cast<size_t>(c)];
                if (cc >= g) cc -= g;
                target += static_cast<std::uint64_t>(cc) * strides[static_cast<size_t>(c)];
            }
            blocked[target] = 1;
        }
    }
    return count;
}

}  // namespace detail

/// Net counts for n = n_lo..n_hi at fixed eps. Cheaper than repeated single
/// counts: the orbit table (or lattice difference ball) is shared across n.
inline CountCurve count_curve(const MapSpec& m, const PointCloud& k, double eps, int n_lo,
                              int n_hi, CurveKind kind, const NetOptions& opts = {}) {
    if (k.size() == 0) throw std::invalid_argument("count_curve: empty cloud");
    if (eps <= 0.0) throw std::invalid_argument("count_curve: eps must be positive");
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("count_curve: bad n range");

    NetEngine engine = opts.engine;
    if (engine == NetEngine::automatic)
        engine = detail::lattice_exact(m, k) ? NetEngine::lattice : NetEngine::hashed;
    if (engine == NetEngine::lattice && !detail::lattice_exact(m, k))
        throw std::invalid_argument("lattice engine requires an exact lattice map/grid pair");

    CountCurve curve;
    curve.kind = kind;
    if (engine == NetEngine::lattice) {
        detail::LatticeDiffBall ball(m, k, eps);
        for (int n = 1; n <= n_hi; ++n) {
            if (n > 1) ball.refine();
            if (n >= n_lo)
                curve.entries.emplace_back(n, detail::greedy_net_lattice(ball, k.size()));
        }
        return curve;
    }

    detail::OrbitTable table = detail::build_orbit_table(m, k, n_hi - 1, opts.workers);
    for (int n = n_lo; n <= n_hi; ++n) {
        std::uint64_t c = (engine == NetEngine::naive)
                              ? detail::greedy_net_naive(m, table, n, eps)
                              : detail::greedy_net_hashed(m, table, n, eps);
        curve.entries.emplace_back(n, c);
    }
    return curve;
}

inline CountCurve count_curve(const MapSpec& m, const PointCloud& k, double eps, int n_max,
                              CurveKind kind, const NetOptions& opts = {}) {
    return count_curve(m, k, eps, 1, n_max, kind, opts);
}

/// Size of the greedy (n,eps)-net built in cloud index order; an UPPER bound
/// on the minimal spanning count restricted to the cloud.
inline std::uint64_t spanning_count(const MapSpec& m, const PointCloud& k, int n, double eps,
                                    const NetOptions& opts = {}) {
    return count_curve(m, k, eps, n, n, CurveKind::spanning_upper, opts).entries.back().second;
}

/// The same greedy net reported as a LOWER bound on the maximal separated
/// count (the net is a maximal separated subset in index order).
inline std::uint64_t separated_count(const MapSpec& m, const PointCloud& k, int n, double eps,
                                     const NetOptions& opts = {}) {
    return count_curve(m, k, eps, n, n, CurveKind::separated_lower, opts).entries.back().second;
}

}  // namespace entrolab
