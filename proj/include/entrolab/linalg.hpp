#pragma once

// Small dense linear algebra used throughout: the matrices here are d x d with
// d rarely above 6, so everything is written for clarity and determinism, not
// BLAS-level speed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "entrolab/common.hpp"

namespace entrolab {

class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}
    Mat(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
        data_.reserve(static_cast<size_t>(rows_) * cols_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_)
                throw std::invalid_argument("Mat: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Mat: size mismatch in product");
        Mat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                double a = (*this)(i, k);
                if (a == 0.0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

    std::vector<double> operator*(const std::vector<double>& v) const {
        if (cols_ != static_cast<int>(v.size()))
            throw std::invalid_argument("Mat: size mismatch in mat-vec");
        std::vector<double> r(rows_, 0.0);
        for (int i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    Mat& operator*=(double s) {
        for (double& x : data_) x *= s;
        return *this;
    }

    Mat transposed() const {
        Mat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    // column j as a vector
    std::vector<double> col(int j) const {
        std::vector<double> c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    // first k columns
    Mat cols_prefix(int k) const {
        Mat r(rows_, k);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < k; ++j) r(i, j) = (*this)(i, j);
        return r;
    }

    Mat cols_range(int j0, int j1) const {
        Mat r(rows_, j1 - j0);
        for (int i = 0; i < rows_; ++i)
            for (int j = j0; j < j1; ++j) r(i, j - j0) = (*this)(i, j);
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : data_) m = std::max(m, std::fabs(x));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double x : data_) s += x * x;
        return std::sqrt(s);
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline void normalize(std::vector<double>& a) {
    double n = norm2(a);
    if (n > 0.0)
        for (double& x : a) x /= n;
}

// Unsigned angle between two nonzero vectors, in radians, range [0, pi/2]
// (directions, not orientations).
inline double direction_angle(const std::vector<double>& a, const std::vector<double>& b) {
    double c = std::fabs(dot(a, b)) / (norm2(a) * norm2(b));
    if (c > 1.0) c = 1.0;
    return std::acos(c);
}

struct QrResult {
    Mat q;  // orthonormal columns
    Mat r;  // upper triangular, nonnegative diagonal
};

// Modified Gram-Schmidt QR of a square full-rank matrix.
inline QrResult qr_mgs(const Mat& a) {
    int n = a.rows();
    Mat q = a;
    Mat r(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += q(k, i) * q(k, j);
            r(i, j) = s;
            for (int k = 0; k < n; ++k) q(k, j) -= s * q(k, i);
        }
        double nrm = 0.0;
        for (int k = 0; k < n; ++k) nrm += q(k, j) * q(k, j);
        nrm = std::sqrt(nrm);
        r(j, j) = nrm;
        if (nrm > 0.0)
            for (int k = 0; k < n; ++k) q(k, j) /= nrm;
        else
            q(j, j) = 1.0;  // degenerate column; keep Q well defined
    }
    return {q, r};
}

// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi rotations.
// Returns eigenvalues sorted descending with matching eigenvector columns.
struct SymEig {
    std::vector<double> values;
    Mat vectors;
};

inline SymEig sym_eig(Mat a) {
    int n = a.rows();
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30 * (1.0 + a.max_abs() * a.max_abs())) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = a(i, i);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] > d[j]; });
    SymEig out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[idx[j]];
        for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, idx[j]);
    }
    return out;
}

// Operator 2-norm of a (possibly rectangular) matrix via the Gram matrix;
// fine at these sizes and conditioning.
inline double operator_norm(const Mat& m) {
    Mat g(m.cols(), m.cols());
    for (int i = 0; i < m.cols(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            double s = 0.0;
            for (int k = 0; k < m.rows(); ++k) s += m(k, i) * m(k, j);
            g(i, j) = s;
        }
    SymEig e = sym_eig(g);
    double top = e.values.empty() ? 0.0 : std::max(0.0, e.values.front());
    return std::sqrt(top);
}

// Characteristic polynomial coefficients by Faddeev-LeVerrier:
// p(t) = t^n + c[n-1] t^(n-1) + ... + c[0].  Exact for integer matrices as
// long as the coefficients fit a double.
inline std::vector<double> characteristic_polynomial(const Mat& a) {
    int n = a.rows();
    std::vector<double> c(n);
    Mat m = Mat::identity(n);
    double ck = 1.0;
    for (int k = 1; k <= n; ++k) {
        Mat am(n, n);
        // am = a * (m + c_{k-1} I) folded in two steps to reuse the buffer
        Mat tmp = m;
        if (k > 1)
            for (int i = 0; i < n; ++i) tmp(i, i) += ck;
        am = a * tmp;
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += am(i, i);
        ck = -tr / k;
        c[n - k] = ck;
        m = am;
    }
    return c;
}

// All complex roots of a monic polynomial t^n + c[n-1] t^(n-1) + ... + c[0]
// by Durand-Kerner iteration with a fixed deterministic start.
inline std::vector<std::complex<double>> monic_roots(const std::vector<double>& c) {
    int n = static_cast<int>(c.size());
    if (n == 0) return {};
    if (n == 1) return {std::complex<double>(-c[0], 0.0)};
    if (n == 2) {
        // quadratic: solve exactly
        std::complex<double> b(c[1], 0.0), c0(c[0], 0.0);
        std::complex<double> disc = std::sqrt(b * b - 4.0 * c0);
        return {(-b + disc) / 2.0, (-b - disc) / 2.0};
    }
    double scale = 1.0;
    for (int i = 0; i < n; ++i)
        scale = std::max(scale, std::pow(std::fabs(c[i]), 1.0 / (n - i)));
    std::vector<std::complex<double>> z(n);
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (int i = 0; i < n; ++i) {
        acc *= seed;
        z[i] = scale * acc;
    }
    auto eval = [&](std::complex<double> t) {
        std::complex<double> v(1.0, 0.0);
        for (int i = n - 1; i >= 0; --i) v = v * t + c[i];
        return v;
    };
    for (int iter = 0; iter < 1000; ++iter) {
        double moved = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> num = eval(z[i]);
            std::complex<double> den(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) den *= (z[i] - z[j]);
            if (std::abs(den) == 0.0) continue;
            std::complex<double> step = num / den;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14 * scale) break;
    }
    // canonical order: descending modulus, then descending real, then imag
    std::stable_sort(z.begin(), z.end(), [](const auto& a, const auto& b) {
        double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return z;
}

inline std::vector<std::complex<double>> eigenvalues_small(const Mat& a) {
    return monic_roots(characteristic_polynomial(a));
}

// ---------------------------------------------------------------------------
// Integer matrices (homology lifts and their exterior powers).

class IntMat {
public:
    IntMat() = default;
    IntMat(int rows, int cols, std::int64_t fill = 0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}
    IntMat(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
        data_.reserve(static_cast<size_t>(rows_) * cols_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_)
                throw std::invalid_argument("IntMat: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    std::int64_t operator()(int i, int j) const {
        return data_[static_cast<size_t>(i) * cols_ + j];
    }

    bool operator==(const IntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    IntMat operator*(const IntMat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("IntMat: size mismatch");
        IntMat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                std::int64_t a = (*this)(i, k);
                if (!a) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

    Mat to_double() const {
        Mat m(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(i, j) = static_cast<double>((*this)(i, j));
        return m;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::int64_t> data_;
};

// Determinant by cofactor expansion; sizes here never exceed 6.
inline std::int64_t int_det(const IntMat& a) {
    int n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("int_det: not square");
    if (n == 0) return 1;
    if (n == 1) return a(0, 0);
    if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    std::int64_t det = 0;
    for (int j = 0; j < n; ++j) {
        if (!a(0, j)) continue;
        IntMat minor(n - 1, n - 1);
        for (int i = 1; i < n; ++i) {
            int jj = 0;
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                minor(i - 1, jj++) = a(i, k);
            }
        }
        std::int64_t cof = a(0, j) * int_det(minor);
        det += (j % 2 == 0) ? cof : -cof;
    }
    return det;
}

// Inverse of an integer matrix with det = +-1 (unimodular), exact.
inline IntMat int_inverse_unimodular(const IntMat& a) {
    int n = a.rows();
    std::int64_t d = int_det(a);
    if (d != 1 && d != -1)
        throw std::invalid_argument("int_inverse_unimodular: |det| != 1");
    IntMat adj(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMat minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(rr, cc++) = a(r, c);
                }
                ++rr;
            }
            std::int64_t cof = int_det(minor);
            if ((i + j) % 2) cof = -cof;
            adj(j, i) = cof * d;  // d = 1/d for unimodular
        }
    return adj;
}

}  // namespace entrolab
