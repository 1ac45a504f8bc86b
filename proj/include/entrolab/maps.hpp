#pragma once

// Phase spaces and the map zoo. Everything downstream evaluates maps,
// Jacobians, and distances only through this header.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entrolab/common.hpp"
#include "entrolab/linalg.hpp"

namespace entrolab {

/// A phase-space point. Toral maps keep every coordinate in [0,1); planar
/// maps flag points that left the domain box as escaped, and escaped points
/// admit no further iteration.
struct Point {
    std::vector<double> coords;
    bool escaped = false;

    Point() = default;
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}
    Point(double x, double y) : coords{x, y} {}

    int dim() const { return static_cast<int>(coords.size()); }
    double operator[](int i) const { return coords[static_cast<size_t>(i)]; }
    double& operator[](int i) { return coords[static_cast<size_t>(i)]; }

    bool operator==(const Point& o) const {
        return coords == o.coords && escaped == o.escaped;
    }
};

/// Axis-aligned planar domain box.
struct Box {
    double xlo = -1.8, xhi = 1.8, ylo = -1.8, yhi = 1.8;

    bool contains(const Point& p) const {
        return p[0] >= xlo && p[0] <= xhi && p[1] >= ylo && p[1] <= yhi;
    }
};

/// Sup quotient metric on the torus T^d. With this metric dynamical balls are
/// boxes, so grid membership tests are exact.
inline double torus_distance(const Point& x, const Point& y) {
    if (x.dim() != y.dim())
        throw std::invalid_argument("torus_distance: dimension mismatch");
    double m = 0.0;
    for (int i = 0; i < x.dim(); ++i) m = std::max(m, circle_dist(x[i], y[i]));
    return m;
}

/// Sup metric on the plane, used by the Henon family.
inline double planar_distance(const Point& x, const Point& y) {
    if (x.dim() != y.dim())
        throw std::invalid_argument("planar_distance: dimension mismatch");
    double m = 0.0;
    for (int i = 0; i < x.dim(); ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

enum class MapKind {
    toral_automorphism,
    rotation,
    standard_map,
    henon,
    perturbed_toral,
};

/// One concrete smooth invertible map: evaluator, analytic Jacobian, inverse
/// where it exists, and the integer lift for toral kinds.
class MapSpec {
public:
    static MapSpec toral_automorphism(IntMat a) {
        if (a.rows() != a.cols()) throw std::invalid_argument("toral matrix must be square");
        std::int64_t d = int_det(a);
        if (d != 1 && d != -1)
            throw std::invalid_argument("toral automorphism requires |det| = 1, got det = " +
                                        std::to_string(d));
        MapSpec m(MapKind::toral_automorphism, a.rows());
        m.lift_ = std::move(a);
        m.lift_inv_ = int_inverse_unimodular(m.lift_);
        return m;
    }

    static MapSpec rotation(std::vector<double> angles) {
        if (angles.empty()) throw std::invalid_argument("rotation needs at least one angle");
        MapSpec m(MapKind::rotation, static_cast<int>(angles.size()));
        m.angles_ = std::move(angles);
        for (double& a : m.angles_) a = wrap01(a);
        m.lift_ = IntMat::identity(m.dim_);
        m.lift_inv_ = m.lift_;
        return m;
    }

    static MapSpec identity(int dim) { return rotation(std::vector<double>(dim, 0.0)); }

    /// Standard map taken on T^2 so the phase space stays compact:
    ///   x' = x + y + (K/2pi) sin(2pi x),  y' = y + (K/2pi) sin(2pi x).
    static MapSpec standard_map(double k) {
        MapSpec m(MapKind::standard_map, 2);
        m.k_ = k;
        return m;
    }

    static MapSpec henon(double a, double b, Box box = Box{}) {
        MapSpec m(MapKind::henon, 2);
        m.a_ = a;
        m.b_ = b;
        m.box_ = box;
        return m;
    }

    /// Toral automorphism with the additive perturbation
    /// eta * (sin 2pi x2, sin 2pi x1) applied before reduction mod 1.
    static MapSpec perturbed_toral(IntMat a, double eta) {
        if (a.rows() != 2 || a.cols() != 2)
            throw std::invalid_argument("perturbed_toral is a 2d family");
        std::int64_t d = int_det(a);
        if (d != 1 && d != -1)
            throw std::invalid_argument("perturbed_toral base requires |det| = 1");
        MapSpec m(MapKind::perturbed_toral, 2);
        m.lift_ = std::move(a);
        m.lift_inv_ = int_inverse_unimodular(m.lift_);
        m.eta_ = eta;
        return m;
    }

    MapKind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_toral() const { return kind_ != MapKind::henon; }
    bool invertible() const { return kind_ != MapKind::henon || b_ != 0.0; }
    const Box& domain_box() const { return box_; }
    double henon_a() const { return a_; }
    double henon_b() const { return b_; }
    double standard_k() const { return k_; }
    double perturbation_eta() const { return eta_; }
    const std::vector<double>& angles() const { return angles_; }

    double distance(const Point& x, const Point& y) const {
        return is_toral() ? torus_distance(x, y) : planar_distance(x, y);
    }

    Point eval(const Point& x) const {
        check_input(x);
        switch (kind_) {
            case MapKind::toral_automorphism:
                return eval_toral(x, 0.0);
            case MapKind::perturbed_toral:
                return eval_toral(x, eta_);
            case MapKind::rotation: {
                Point y = x;
                for (int i = 0; i < dim_; ++i) y[i] = wrap01(x[i] + angles_[i]);
                return y;
            }
            case MapKind::standard_map: {
                double g = (k_ / (2.0 * std::numbers::pi)) * std::sin(2.0 * std::numbers::pi * x[0]);
                return Point{wrap01(x[0] + x[1] + g), wrap01(x[1] + g)};
            }
            case MapKind::henon: {
                Point y{1.0 - a_ * x[0] * x[0] + x[1], b_ * x[0]};
                y.escaped = !box_.contains(y);
                return y;
            }
        }
        throw std::logic_error("unreachable");
    }

    Point inverse(const Point& x) const {
        if (!invertible()) throw unavailable_error("map has no inverse (Henon with b = 0)");
        check_input(x);
        switch (kind_) {
            case MapKind::toral_automorphism: {
                Point y(std::vector<double>(dim_, 0.0));
                for (int i = 0; i < dim_; ++i) {
                    double s = 0.0;
                    for (int j = 0; j < dim_; ++j)
                        s += static_cast<double>(lift_inv_(i, j)) * x[j];
                    y[i] = wrap01(s);
                }
                return y;
            }
            case MapKind::rotation: {
                Point y = x;
                for (int i = 0; i < dim_; ++i) y[i] = wrap01(x[i] - angles_[i]);
                return y;
            }
            case MapKind::standard_map: {
                // x' - y' = x, then y = y' - g(x); exact closed form
                double x0 = wrap01(x[0] - x[1]);
                double g = (k_ / (2.0 * std::numbers::pi)) * std::sin(2.0 * std::numbers::pi * x0);
                return Point{x0, wrap01(x[1] - g)};
            }
            case MapKind::henon: {
                double px = x[1] / b_;
                Point y{px, x[0] - 1.0 + a_ * px * px};
                y.escaped = !box_.contains(y);
                return y;
            }
            case MapKind::perturbed_toral:
                return perturbed_inverse(x);
        }
        throw std::logic_error("unreachable");
    }

    Mat jacobian(const Point& x) const {
        check_input(x);
        switch (kind_) {
            case MapKind::toral_automorphism:
                return lift_.to_double();
            case MapKind::rotation:
                return Mat::identity(dim_);
            case MapKind::standard_map: {
                double c = k_ * std::cos(2.0 * std::numbers::pi * x[0]);
                return Mat{{1.0 + c, 1.0}, {c, 1.0}};
            }
            case MapKind::henon:
                return Mat{{-2.0 * a_ * x[0], 1.0}, {b_, 0.0}};
            case MapKind::perturbed_toral: {
                Mat j = lift_.to_double();
                double tp = 2.0 * std::numbers::pi;
                j(0, 1) += eta_ * tp * std::cos(tp * x[1]);
                j(1, 0) += eta_ * tp * std::cos(tp * x[0]);
                return j;
            }
        }
        throw std::logic_error("unreachable");
    }

    // Jacobian of the inverse map at x, i.e. (Df at f^{-1}(x))^{-1}.
    Mat inverse_jacobian(const Point& x) const {
        Point pre = inverse(x);
        Mat j = jacobian(pre);
        if (dim_ == 2) {
            double det = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
            if (det == 0.0) throw std::runtime_error("singular Jacobian");
            return Mat{{j(1, 1) / det, -j(0, 1) / det}, {-j(1, 0) / det, j(0, 0) / det}};
        }
        // general small inverse through Gauss-Jordan
        int n = dim_;
        Mat aug = j;
        Mat inv = Mat::identity(n);
        for (int c = 0; c < n; ++c) {
            int piv = c;
            for (int r = c + 1; r < n; ++r)
                if (std::fabs(aug(r, c)) > std::fabs(aug(piv, c))) piv = r;
            if (aug(piv, c) == 0.0) throw std::runtime_error("singular Jacobian");
            if (piv != c)
                for (int k = 0; k < n; ++k) {
                    std::swap(aug(piv, k), aug(c, k));
                    std::swap(inv(piv, k), inv(c, k));
                }
            double p = aug(c, c);
            for (int k = 0; k < n; ++k) {
                aug(c, k) /= p;
                inv(c, k) /= p;
            }
            for (int r = 0; r < n; ++r) {
                if (r == c) continue;
                double f = aug(r, c);
                if (f == 0.0) continue;
                for (int k = 0; k < n; ++k) {
                    aug(r, k) -= f * aug(c, k);
                    inv(r, k) -= f * inv(c, k);
                }
            }
        }
        return inv;
    }

    /// Action on first homology: the integer lift matrix. Rotations are
    /// isotopic to the identity; a perturbed toral map is homotopic to its
    /// base. Kinds without toral structure have no lift.
    IntMat lift_matrix() const {
        switch (kind_) {
            case MapKind::toral_automorphism:
            case MapKind::rotation:
            case MapKind::perturbed_toral:
                return lift_;
            case MapKind::standard_map:
                throw unavailable_error("lift matrix unavailable: standard map (cylinder conventions)");
            case MapKind::henon:
                throw unavailable_error("lift matrix unavailable: no compact toral phase space");
        }
        throw std::logic_error("unreachable");
    }

    bool has_lift() const {
        return kind_ == MapKind::toral_automorphism || kind_ == MapKind::rotation ||
               kind_ == MapKind::perturbed_toral;
    }

    std::string kind_name() const {
        switch (kind_) {
            case MapKind::toral_automorphism: return "toral_automorphism";
            case MapKind::rotation: return "rotation";
            case MapKind::standard_map: return "standard_map";
            case MapKind::henon: return "henon";
            case MapKind::perturbed_toral: return "perturbed_toral";
        }
        return "?";
    }

private:
    MapSpec(MapKind k, int dim) : kind_(k), dim_(dim) {}

    void check_input(const Point& x) const {
        if (x.dim() != dim_) throw std::invalid_argument("point dimension mismatch");
        if (x.escaped) throw escape_error("escaped point admits no further iteration");
    }

    Point eval_toral(const Point& x, double eta) const {
        Point y(std::vector<double>(dim_, 0.0));
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim_; ++j) s += static_cast<double>(lift_(i, j)) * x[j];
            y[i] = s;
        }
        if (eta != 0.0) {
            double tp = 2.0 * std::numbers::pi;
            y[0] += eta * std::sin(tp * x[1]);
            y[1] += eta * std::sin(tp * x[0]);
        }
        for (int i = 0; i < dim_; ++i) y[i] = wrap01(y[i]);
        return y;
    }

    // Newton iteration on the lift; the perturbation is small and smooth so
    // this converges to machine precision in a few steps.
    Point perturbed_inverse(const Point& target) const {
        Point x(std::vector<double>{0.0, 0.0});
        {  // unperturbed preimage as the starting guess
            for (int i = 0; i < 2; ++i) {
                double s = 0.0;
                for (int j = 0; j < 2; ++j)
                    s += static_cast<double>(lift_inv_(i, j)) * target[j];
                x[i] = wrap01(s);
            }
        }
        for (int it = 0; it < 60; ++it) {
            Point fx = eval(x);
            double r0 = signed_circle_diff(fx[0], target[0]);
            double r1 = signed_circle_diff(fx[1], target[1]);
            double res = std::max(std::fabs(r0), std::fabs(r1));
            if (res < 1e-14) return x;
            Mat j = jacobian(x);
            double det = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
            if (det == 0.0) throw std::runtime_error("perturbed_toral: singular Jacobian");
            double dx0 = (j(1, 1) * r0 - j(0, 1) * r1) / det;
            double dx1 = (-j(1, 0) * r0 + j(0, 0) * r1) / det;
            x[0] = wrap01(x[0] - dx0);
            x[1] = wrap01(x[1] - dx1);
        }
        Point fx = eval(x);
        if (torus_distance(fx, target) < 1e-11) return x;
        throw std::runtime_error("perturbed_toral inverse: Newton did not converge");
    }

    // signed representative of a-b in [-1/2, 1/2)
    static double signed_circle_diff(double a, double b) {
        double d = a - b;
        d -= std::floor(d + 0.5);
        return d;
    }

    MapKind kind_;
    int dim_;
    IntMat lift_, lift_inv_;
    std::vector<double> angles_;
    double k_ = 0.0, a_ = 0.0, b_ = 0.0, eta_ = 0.0;
    Box box_;
};

/// Iterate n >= 0 steps; returns the escaped point as soon as the orbit
/// leaves a planar domain (callers treat escape as non-membership rather
/// than an error).
inline Point iterate(const MapSpec& m, Point x, int n) {
    for (int i = 0; i < n; ++i) {
        if (x.escaped) return x;
        x = m.eval(x);
    }
    return x;
}

inline Point iterate_back(const MapSpec& m, Point x, int n) {
    for (int i = 0; i < n; ++i) {
        if (x.escaped) return x;
        x = m.inverse(x);
    }
    return x;
}

}  // namespace entrolab
