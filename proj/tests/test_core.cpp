#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <utility>

#include "entrolab/maps.hpp"
#include "entrolab/point_cloud.hpp"

using namespace entrolab;

namespace {

MapSpec cat_map() { return MapSpec::toral_automorphism(IntMat{{2, 1}, {1, 1}}); }

Point rand_torus_point(SeededUniform& rng, int dim = 2) {
    std::vector<double> c(static_cast<size_t>(dim));
    for (double& v : c) v = rng.next();
    return Point{c};
}

}  // namespace

TEST(TorusDistance, Examples) {
    EXPECT_EQ(torus_distance(Point{0.0, 0.0}, Point{0.0, 0.0}), 0.0);
    EXPECT_NEAR(torus_distance(Point{0.1, 0.0}, Point{0.9, 0.0}), 0.2, 1e-15);
    EXPECT_NEAR(torus_distance(Point{0.25, 0.5}, Point{0.75, 0.9}), 0.5, 1e-15);
}

TEST(TorusDistance, DimensionMismatchThrows) {
    EXPECT_THROW(torus_distance(Point(std::vector<double>{0.1}), Point{0.1, 0.2}),
                 std::invalid_argument);
}

TEST(TorusDistance, MetricAxiomsOnRandomTriples) {
    SeededUniform rng(41);
    for (int i = 0; i < 10000; ++i) {
        Point x = rand_torus_point(rng), y = rand_torus_point(rng), z = rand_torus_point(rng);
        double dxy = torus_distance(x, y);
        double dyx = torus_distance(y, x);
        double dxz = torus_distance(x, z);
        double dzy = torus_distance(z, y);
        EXPECT_GE(dxy, 0.0);
        EXPECT_EQ(dxy, dyx);
        EXPECT_LE(dxy, 0.5 + 1e-15);
        EXPECT_LE(dxy, dxz + dzy + 1e-12);
    }
}

TEST(MapEval, CatMapExamples) {
    MapSpec cat = cat_map();
    EXPECT_EQ(cat.eval(Point{0.0, 0.0}), (Point{0.0, 0.0}));
    Point y = cat.eval(Point{0.2, 0.1});
    EXPECT_NEAR(y[0], 0.5, 1e-15);
    EXPECT_NEAR(y[1], 0.3, 1e-15);
}

TEST(MapEval, RotationExample) {
    MapSpec rot = MapSpec::rotation({0.25, 0.0});
    Point y = rot.eval(Point{0.5, 0.5});
    EXPECT_EQ(y[0], 0.75);
    EXPECT_EQ(y[1], 0.5);
}

TEST(MapEval, CoordinatesStayInUnitBox) {
    SeededUniform rng(7);
    for (MapSpec m : {cat_map(), MapSpec::standard_map(1.3),
                      MapSpec::perturbed_toral(IntMat{{2, 1}, {1, 1}}, 0.05)}) {
        for (int i = 0; i < 2000; ++i) {
            Point p = rand_torus_point(rng);
            p = m.eval(p);
            for (int c = 0; c < 2; ++c) {
                EXPECT_GE(p[c], 0.0);
                EXPECT_LT(p[c], 1.0);
            }
        }
    }
}

TEST(MapJacobian, Examples) {
    Mat jc = cat_map().jacobian(Point{0.37, 0.91});
    EXPECT_EQ(jc(0, 0), 2.0);
    EXPECT_EQ(jc(0, 1), 1.0);
    EXPECT_EQ(jc(1, 0), 1.0);
    EXPECT_EQ(jc(1, 1), 1.0);

    Mat js = MapSpec::standard_map(0.0).jacobian(Point{0.3, 0.4});
    EXPECT_EQ(js(0, 0), 1.0);
    EXPECT_EQ(js(0, 1), 1.0);
    EXPECT_EQ(js(1, 0), 0.0);
    EXPECT_EQ(js(1, 1), 1.0);

    Mat jh = MapSpec::henon(1.4, 0.3).jacobian(Point{0.0, 0.0});
    EXPECT_EQ(jh(0, 0), 0.0);
    EXPECT_EQ(jh(0, 1), 1.0);
    EXPECT_EQ(jh(1, 0), 0.3);
    EXPECT_EQ(jh(1, 1), 0.0);
}

namespace {

// signed representative of a-b in [-1/2, 1/2)
double circ_diff(double a, double b) {
    double d = a - b;
    d -= std::floor(d + 0.5);
    return d;
}

void check_jacobian_fd(const MapSpec& m, const Point& x) {
    const double h = 1e-6;
    Mat an = m.jacobian(x);
    for (int j = 0; j < m.dim(); ++j) {
        Point xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        if (m.is_toral()) {
            xp[j] = wrap01(xp[j]);
            xm[j] = wrap01(xm[j]);
        }
        Point fp = m.eval(xp), fm = m.eval(xm);
        if (fp.escaped || fm.escaped) return;
        for (int i = 0; i < m.dim(); ++i) {
            double fd = m.is_toral() ? circ_diff(fp[i], fm[i]) / (2 * h)
                                     : (fp[i] - fm[i]) / (2 * h);
            EXPECT_NEAR(fd, an(i, j), 1e-5 * std::max(1.0, std::fabs(an(i, j))))
                << "entry (" << i << "," << j << ")";
        }
    }
}

}  // namespace

TEST(MapJacobian, MatchesCentralFiniteDifferences) {
    SeededUniform rng(11);
    std::vector<MapSpec> zoo = {cat_map(), MapSpec::rotation({0.618034, 0.3}),
                                MapSpec::standard_map(1.1),
                                MapSpec::perturbed_toral(IntMat{{2, 1}, {1, 1}}, 0.01)};
    for (const MapSpec& m : zoo)
        for (int i = 0; i < 1000; ++i) check_jacobian_fd(m, rand_torus_point(rng));

    MapSpec hen = MapSpec::henon(1.4, 0.3);
    for (int i = 0; i < 1000; ++i) {
        Point p{rng.next() * 2.0 - 1.0, rng.next() * 0.6 - 0.3};
        check_jacobian_fd(hen, p);
    }
}

TEST(MapInverse, Examples) {
    MapSpec cat = cat_map();
    EXPECT_EQ(cat.inverse(Point{0.0, 0.0}), (Point{0.0, 0.0}));

    MapSpec rot = MapSpec::rotation({0.25, 0.0});
    Point r = rot.inverse(Point{0.75, 0.5});
    EXPECT_EQ(r[0], 0.5);
    EXPECT_EQ(r[1], 0.5);

    // derived by solving the inverse formulas, then checked forward
    MapSpec hen = MapSpec::henon(1.4, 0.3);
    Point pre = hen.inverse(Point{1.0, 0.3});
    EXPECT_NEAR(pre[0], 1.0, 1e-12);
    EXPECT_NEAR(pre[1], 1.4, 1e-12);
    Point fwd = hen.eval(pre);
    EXPECT_NEAR(fwd[0], 1.0, 1e-12);
    EXPECT_NEAR(fwd[1], 0.3, 1e-12);
}

TEST(MapInverse, CatInverseLiftMatchesAdjugate) {
    IntMat inv = int_inverse_unimodular(IntMat{{2, 1}, {1, 1}});
    EXPECT_EQ(inv(0, 0), 1);
    EXPECT_EQ(inv(0, 1), -1);
    EXPECT_EQ(inv(1, 0), -1);
    EXPECT_EQ(inv(1, 1), 2);
}

TEST(MapInverse, RoundTripOnRandomPoints) {
    SeededUniform rng(17);
    std::vector<MapSpec> zoo = {cat_map(), MapSpec::rotation({0.618034, 0.22}),
                                MapSpec::standard_map(0.9),
                                MapSpec::perturbed_toral(IntMat{{2, 1}, {1, 1}}, 0.01)};
    for (const MapSpec& m : zoo) {
        for (int i = 0; i < 10000; ++i) {
            Point x = rand_torus_point(rng);
            Point y = m.inverse(m.eval(x));
            EXPECT_LE(torus_distance(x, y), 1e-10);
            Point z = m.eval(m.inverse(x));
            EXPECT_LE(torus_distance(x, z), 1e-10);
        }
    }
    MapSpec hen = MapSpec::henon(1.4, 0.3);
    int tried = 0;
    for (int i = 0; i < 30000 && tried < 10000; ++i) {
        Point x{rng.next() * 2.4 - 1.2, rng.next() * 0.6 - 0.3};
        Point fx = hen.eval(x);
        if (fx.escaped) continue;
        ++tried;
        Point back = hen.inverse(fx);
        EXPECT_LE(planar_distance(x, back), 1e-10);
    }
    EXPECT_GE(tried, 1000);
}

TEST(MapInverse, NonInvertibleHenonThrows) {
    MapSpec flat = MapSpec::henon(1.4, 0.0);
    EXPECT_FALSE(flat.invertible());
    EXPECT_THROW(flat.inverse(Point{0.1, 0.0}), unavailable_error);
}

TEST(LiftMatrix, Examples) {
    EXPECT_EQ(cat_map().lift_matrix(), (IntMat{{2, 1}, {1, 1}}));
    EXPECT_EQ(MapSpec::rotation({0.1, 0.2}).lift_matrix(), IntMat::identity(2));
    EXPECT_EQ(MapSpec::perturbed_toral(IntMat{{2, 1}, {1, 1}}, 0.25).lift_matrix(),
              (IntMat{{2, 1}, {1, 1}}));
    EXPECT_THROW(MapSpec::henon(1.4, 0.3).lift_matrix(), unavailable_error);
    EXPECT_THROW(MapSpec::standard_map(1.0).lift_matrix(), unavailable_error);
}

TEST(MapSpec, RejectsNonUnimodularMatrix) {
    EXPECT_THROW(MapSpec::toral_automorphism(IntMat{{3, 1}, {1, 1}}), std::invalid_argument);
    EXPECT_THROW(MapSpec::perturbed_toral(IntMat{{2, 0}, {0, 2}}, 0.1), std::invalid_argument);
}

TEST(MapSpec, PerturbedWithZeroEtaIsBitwiseToral) {
    MapSpec base = cat_map();
    MapSpec pert = MapSpec::perturbed_toral(IntMat{{2, 1}, {1, 1}}, 0.0);
    SeededUniform rng(23);
    for (int i = 0; i < 5000; ++i) {
        Point x = rand_torus_point(rng);
        Point a = base.eval(x);
        Point b = pert.eval(x);
        EXPECT_EQ(a.coords, b.coords);  // bit-for-bit
    }
}

TEST(Escape, EscapedPointsAdmitNoFurtherIteration) {
    MapSpec hen = MapSpec::henon(1.4, 0.3, Box{-1.0, 1.0, -1.0, 1.0});
    Point far{0.1, 0.9};  // image (1.886, 0.03) leaves the box
    Point out = hen.eval(far);
    EXPECT_TRUE(out.escaped);
    EXPECT_THROW(hen.eval(out), escape_error);
    // orbit helpers flag instead of throwing
    Point it = iterate(hen, far, 5);
    EXPECT_TRUE(it.escaped);
}

TEST(PointCloud, GridIsDeterministicAndDistinct) {
    PointCloud g1 = PointCloud::torus_grid(2, 16);
    PointCloud g2 = PointCloud::torus_grid(2, 16);
    EXPECT_EQ(g1.size(), 256u);
    EXPECT_EQ(g1.flat(), g2.flat());
    EXPECT_TRUE(g1.is_pow2_torus_grid());
    EXPECT_FALSE(PointCloud::torus_grid(2, 12).is_pow2_torus_grid());
    // coordinate 0 varies fastest
    EXPECT_EQ(g1.point(1)[0], 1.0 / 16);
    EXPECT_EQ(g1.point(1)[1], 0.0);
    EXPECT_EQ(g1.point(16)[1], 1.0 / 16);
}

TEST(PointCloud, RandomIsSeededAndReproducible) {
    PointCloud a = PointCloud::torus_random(2, 1000, 99);
    PointCloud b = PointCloud::torus_random(2, 1000, 99);
    PointCloud c = PointCloud::torus_random(2, 1000, 100);
    EXPECT_EQ(a.flat(), b.flat());
    EXPECT_NE(a.flat(), c.flat());
    for (size_t i = 0; i < a.size(); ++i)
        for (int k = 0; k < 2; ++k) {
            EXPECT_GE(a.point(i)[k], 0.0);
            EXPECT_LT(a.point(i)[k], 1.0);
        }
}

TEST(ThreeDimensional, ToralAutomorphismRoundTripAndJacobian) {
    // companion matrix of t^3 - t - 1, det = 1
    MapSpec m3 = MapSpec::toral_automorphism(IntMat{{0, 1, 0}, {0, 0, 1}, {1, 1, 0}});
    EXPECT_EQ(m3.dim(), 3);
    SeededUniform rng(53);
    for (int i = 0; i < 3000; ++i) {
        Point x = rand_torus_point(rng, 3);
        EXPECT_LE(torus_distance(m3.inverse(m3.eval(x)), x), 1e-10);
        EXPECT_LE(torus_distance(m3.eval(m3.inverse(x)), x), 1e-10);
    }
    // inverse Jacobian through the Gauss-Jordan path
    Point p{std::vector<double>{0.2, 0.5, 0.8}};
    Mat j = m3.jacobian(m3.inverse(p));
    Mat jinv = m3.inverse_jacobian(p);
    Mat prod = j * jinv;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(prod(r, c), r == c ? 1.0 : 0.0, 1e-12);
}

TEST(PointCloud, RandomPointsArePairwiseDistinct) {
    PointCloud c = PointCloud::torus_random(2, 20000, 77);
    std::set<std::pair<double, double>> seen;
    for (size_t i = 0; i < c.size(); ++i) {
        Point p = c.point(i);
        EXPECT_TRUE(seen.insert({p[0], p[1]}).second) << "duplicate at " << i;
    }
}
