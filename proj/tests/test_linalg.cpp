#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "entrolab/linalg.hpp"

using namespace entrolab;

TEST(Mat, ProductAndTranspose) {
    Mat a{{1, 2}, {3, 4}};
    Mat b{{0, 1}, {1, 0}};
    Mat c = a * b;
    EXPECT_EQ(c(0, 0), 2.0);
    EXPECT_EQ(c(0, 1), 1.0);
    EXPECT_EQ(c(1, 0), 4.0);
    EXPECT_EQ(c(1, 1), 3.0);
    Mat at = a.transposed();
    EXPECT_EQ(at(0, 1), 3.0);
}

TEST(Qr, ReconstructsAndOrthonormal) {
    Mat a{{2, 1}, {1, 1}};
    QrResult qr = qr_mgs(a);
    // Q orthonormal
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double s = 0;
            for (int k = 0; k < 2; ++k) s += qr.q(k, i) * qr.q(k, j);
            EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-14);
        }
    // QR = A
    Mat back = qr.q * qr.r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(back(i, j), a(i, j), 1e-14);
    EXPECT_GE(qr.r(0, 0), 0.0);
    EXPECT_GE(qr.r(1, 1), 0.0);
}

TEST(SymEig, DiagonalizesCatMatrix) {
    Mat a{{2, 1}, {1, 1}};
    SymEig e = sym_eig(a);
    double lam = (3.0 + std::sqrt(5.0)) / 2.0;
    EXPECT_NEAR(e.values[0], lam, 1e-12);
    EXPECT_NEAR(e.values[1], (3.0 - std::sqrt(5.0)) / 2.0, 1e-12);
    // eigenvector residual
    for (int k = 0; k < 2; ++k) {
        std::vector<double> v = e.vectors.col(k);
        std::vector<double> av = a * v;
        for (int i = 0; i < 2; ++i) EXPECT_NEAR(av[i], e.values[k] * v[i], 1e-12);
    }
}

TEST(OperatorNorm, MatchesTopSingularValue) {
    Mat a{{3, 0}, {0, 2}};
    EXPECT_NEAR(operator_norm(a), 3.0, 1e-12);
    Mat r{{0, -5}, {5, 0}};
    EXPECT_NEAR(operator_norm(r), 5.0, 1e-12);
}

TEST(CharPoly, CatMatrix) {
    auto c = characteristic_polynomial(Mat{{2, 1}, {1, 1}});
    // t^2 - 3t + 1
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(c[1], -3.0, 1e-12);
    EXPECT_NEAR(c[0], 1.0, 1e-12);
}

TEST(MonicRoots, QuadraticAndRotation) {
    auto r1 = monic_roots({1.0, -3.0});  // t^2 - 3t + 1
    EXPECT_NEAR(r1[0].real(), (3.0 + std::sqrt(5.0)) / 2.0, 1e-12);
    EXPECT_NEAR(r1[1].real(), (3.0 - std::sqrt(5.0)) / 2.0, 1e-12);

    auto r2 = eigenvalues_small(Mat{{0, -1}, {1, 0}});  // eigenvalues +- i
    EXPECT_NEAR(std::abs(r2[0]), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(r2[1]), 1.0, 1e-12);
    EXPECT_NEAR(std::fabs(r2[0].imag()), 1.0, 1e-12);
}

TEST(MonicRoots, CubicCompanion) {
    // t^3 - t - 1: plastic-number root 1.3247179572447...
    Mat comp{{0, 1, 0}, {0, 0, 1}, {1, 1, 0}};
    auto roots = eigenvalues_small(comp);
    EXPECT_NEAR(roots[0].real(), 1.3247179572447460, 1e-10);
    EXPECT_NEAR(roots[0].imag(), 0.0, 1e-10);
}

TEST(IntMat, DetAndUnimodularInverse) {
    EXPECT_EQ(int_det(IntMat{{2, 1}, {1, 1}}), 1);
    EXPECT_EQ(int_det(IntMat{{0, 1}, {1, 0}}), -1);
    EXPECT_EQ(int_det(IntMat{{3, 1}, {1, 1}}), 2);

    IntMat a{{0, 1}, {1, 0}};  // det -1
    IntMat inv = int_inverse_unimodular(a);
    EXPECT_EQ(a * inv, IntMat::identity(2));

    IntMat b{{2, 1}, {1, 1}};
    EXPECT_EQ(b * int_inverse_unimodular(b), IntMat::identity(2));

    IntMat c{{1, 2, 3}, {0, 1, 4}, {0, 0, 1}};  // unit upper triangular
    EXPECT_EQ(c * int_inverse_unimodular(c), IntMat::identity(3));
}
