#include <gtest/gtest.h>

#include <cmath>

#include "entrolab/cocycle.hpp"
#include "entrolab/periodic.hpp"
#include "entrolab/pliss.hpp"
#include "entrolab/splitting.hpp"

using namespace entrolab;

namespace {

MapSpec cat_map() { return MapSpec::toral_automorphism(IntMat{{2, 1}, {1, 1}}); }

const double kCatLogLambda = std::log((3.0 + std::sqrt(5.0)) / 2.0);  // 0.9624236...

// unit eigenvectors of [[2,1],[1,1]]: unstable for lambda, stable for 1/lambda
Mat cat_unstable_frame() {
    double lam = (3.0 + std::sqrt(5.0)) / 2.0;
    std::vector<double> v{1.0, lam - 2.0};  // (A - lam I) kernel direction
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1]);
    Mat f(2, 1);
    f(0, 0) = v[0] / n;
    f(1, 0) = v[1] / n;
    return f;
}

Mat cat_stable_frame() {
    double mu = (3.0 - std::sqrt(5.0)) / 2.0;
    std::vector<double> v{1.0, mu - 2.0};
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1]);
    Mat f(2, 1);
    f(0, 0) = v[0] / n;
    f(1, 0) = v[1] / n;
    return f;
}

// direct double-indexed Pliss oracle
std::vector<int> pliss_oracle(const std::vector<double>& a, double c1) {
    int n_total = static_cast<int>(a.size());
    std::vector<int> times;
    for (int nj = 1; nj <= n_total; ++nj) {
        bool ok = true;
        for (int n = 0; n < nj && ok; ++n) {
            double sum = 0.0;
            for (int i = n + 1; i <= nj; ++i) sum += a[static_cast<size_t>(i - 1)];
            ok = sum <= c1 * (nj - n);
        }
        if (ok) times.push_back(nj);
    }
    return times;
}

}  // namespace

TEST(PlissTheta, FormulaAndValidation) {
    EXPECT_NEAR(pliss_theta(-2.0, -0.5, -1.0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(pliss_theta(-1.0, 1.0, 0.0), 0.5, 1e-15);
    EXPECT_EQ(pliss_theta(0.0, 1.0, 0.0), 1.0);
    EXPECT_THROW(pliss_theta(0.0, 0.5, 0.7), std::invalid_argument);   // c2 >= c1
    EXPECT_THROW(pliss_theta(0.5, 1.0, 0.25), std::invalid_argument);  // a* > c2
}

TEST(PlissTimes, DocumentedExamples) {
    // every value exactly at c2: all indices qualify
    {
        PlissParams p{-2.0, -0.5, -1.0};
        std::vector<double> a(8, -1.0);
        PlissResult r = pliss_times(a, p);
        EXPECT_EQ(r.count_l, 8);
        EXPECT_TRUE(r.hypothesis_ok);
    }
    {
        PlissParams p{-2.0, -0.5, -1.0};
        PlissResult r = pliss_times({-2.0, 0.0, -2.0, 0.0}, p);
        EXPECT_EQ(r.times, (std::vector<int>{1, 3}));
        EXPECT_TRUE(r.hypothesis_ok);  // sum -4 <= c2 N = -4
        EXPECT_GT(r.count_l, r.theta * r.n_total);
    }
    {
        PlissParams p{-2.0, -0.5, -1.0};
        PlissResult r = pliss_times({0.0, 0.0, 0.0, 0.0}, p);
        EXPECT_FALSE(r.hypothesis_ok);
        EXPECT_TRUE(r.times.empty());
    }
    EXPECT_THROW(pliss_times({-3.0, 0.0}, PlissParams{-2.0, -0.5, -1.0}),
                 std::invalid_argument);
}

TEST(PlissTimes, ExactMatchAgainstOracleOnDyadicInstances) {
    // dyadic values make every comparison exact, so the scan and the
    // double-indexed oracle must agree with zero tolerance
    SeededUniform rng(2024);
    int lemma_checked = 0;
    for (int inst = 0; inst < 1000; ++inst) {
        int n = 2 + static_cast<int>(rng.next_below(15));  // 2..16
        double a_star = -4.0 + 0.5 * static_cast<double>(rng.next_below(6));
        double c2 = a_star + 0.5 * static_cast<double>(rng.next_below(4));
        double c1 = c2 + 0.5 * (1.0 + static_cast<double>(rng.next_below(3)));
        PlissParams p{a_star, c1, c2};
        std::vector<double> a(static_cast<size_t>(n));
        bool bias_low = inst % 2 == 0;
        for (double& ai : a) {
            double hi = bias_low ? c2 + 0.25 : a_star + 4.0;
            int ticks = static_cast<int>(std::floor((hi - a_star) * 8.0));
            ai = a_star + static_cast<double>(rng.next_below(ticks + 1)) / 8.0;
        }
        PlissResult r = pliss_times(a, p);
        EXPECT_EQ(r.times, pliss_oracle(a, c1)) << "instance " << inst;
        for (int t : r.times) {
            EXPECT_GE(t, 1);
            EXPECT_LE(t, n);
        }
        if (r.hypothesis_ok) {
            // count > theta N via exact cross-multiplication of dyadics
            EXPECT_GT(r.count_l * (c1 - a_star), n * (c1 - c2)) << "instance " << inst;
            ++lemma_checked;
        }
    }
    EXPECT_GE(lemma_checked, 200);
}

TEST(Cocycle, ConstantJacobianProducts) {
    MapSpec cat = cat_map();
    CocycleProduct p = cocycle_product(cat, Point{0.2, 0.7}, 5);
    // A^5 = [[89,55],[55,34]]
    EXPECT_FALSE(p.factored);
    EXPECT_EQ(p.matrix(0, 0), 89.0);
    EXPECT_EQ(p.matrix(0, 1), 55.0);
    EXPECT_EQ(p.matrix(1, 0), 55.0);
    EXPECT_EQ(p.matrix(1, 1), 34.0);

    CocycleProduct id = cocycle_product(MapSpec::identity(2), Point{0.1, 0.1}, 7);
    EXPECT_EQ(id.matrix(0, 0), 1.0);
    EXPECT_EQ(id.matrix(0, 1), 0.0);

    CocycleProduct sh = cocycle_product(MapSpec::standard_map(0.0), Point{0.3, 0.9}, 2);
    EXPECT_EQ(sh.matrix(0, 0), 1.0);
    EXPECT_EQ(sh.matrix(0, 1), 2.0);
    EXPECT_EQ(sh.matrix(1, 0), 0.0);
    EXPECT_EQ(sh.matrix(1, 1), 1.0);
}

TEST(Cocycle, LongProductsReturnFactoredForm) {
    CocycleProduct p = cocycle_product(cat_map(), Point{0.0, 0.0}, 300);
    EXPECT_TRUE(p.factored);
    double log_norm = std::log(operator_norm(p.matrix)) + p.log_scale;
    EXPECT_NEAR(log_norm / 300.0, kCatLogLambda, 1e-10);
}

TEST(Cocycle, BackwardNeedsInverseAndEscapeThrows) {
    EXPECT_THROW(cocycle_product(MapSpec::henon(1.4, 0.0), Point{0.1, 0.0}, 2,
                                 OrbitDirection::backward),
                 unavailable_error);
    MapSpec hen = MapSpec::henon(1.4, 0.3, Box{-1.0, 1.0, -1.0, 1.0});
    EXPECT_THROW(cocycle_product(hen, Point{0.1, 0.9}, 5), escape_error);
}

TEST(Exponents, CatMapToMachinePrecisionAtN50) {
    ExponentEstimate e = finite_time_exponents(cat_map(), Point{0.2, 0.3}, 50);
    ASSERT_EQ(e.exponents.size(), 2u);
    EXPECT_NEAR(e.exponents[0], kCatLogLambda, 1e-6);
    EXPECT_NEAR(e.exponents[1], -kCatLogLambda, 1e-6);
}

TEST(Exponents, IsometriesAreZero) {
    for (MapSpec m : {MapSpec::identity(2), MapSpec::rotation({0.618034, 0.27})}) {
        ExponentEstimate e = finite_time_exponents(m, Point{0.4, 0.9}, 20);
        EXPECT_NEAR(e.exponents[0], 0.0, 1e-12);
        EXPECT_NEAR(e.exponents[1], 0.0, 1e-12);
    }
}

TEST(Exponents, CatConvergenceMonotoneUpToNoise) {
    double prev = 1e9;
    for (int n : {10, 20, 40}) {
        ExponentEstimate e = finite_time_exponents(cat_map(), Point{0.11, 0.77}, n);
        double err = std::fabs(e.exponents[0] - kCatLogLambda);
        EXPECT_LE(err, prev + 1e-8);
        prev = err;
    }
}

TEST(Exponents, SumMatchesVolumeBookkeeping) {
    std::vector<std::pair<MapSpec, Point>> zoo = {
        {cat_map(), Point{0.2, 0.3}},
        {MapSpec::identity(2), Point{0.5, 0.5}},
        {MapSpec::rotation({0.618034, 0.1}), Point{0.3, 0.3}},
        {MapSpec::standard_map(1.0), Point{0.21, 0.43}},
        {MapSpec::perturbed_toral(IntMat{{2, 1}, {1, 1}}, 0.01), Point{0.6, 0.1}},
        {MapSpec::henon(1.4, 0.3), Point{0.0, 0.0}},  // attractor orbit
    };
    for (const auto& [m, x] : zoo) {
        ExponentEstimate e = finite_time_exponents(m, x, 20);
        double sum = 0.0;
        for (double v : e.exponents) sum += v;
        EXPECT_NEAR(sum, e.logdet_per_step, 1e-6) << m.kind_name();
        if (m.kind() == MapKind::henon)
            EXPECT_NEAR(sum, std::log(0.3), 1e-6);  // |det| = |-b| everywhere
    }
}

TEST(DominationMargin, CatEigenframesGiveLambdaMinusTwo) {
    MapSpec cat = cat_map();
    std::vector<Point> orbit = {Point{0.1, 0.2}, Point{0.5, 0.8}};
    std::vector<Mat> low(2, cat_stable_frame()), high(2, cat_unstable_frame());
    MarginResult r = domination_margin(cat, orbit, 1, low, high);
    double lam = (3.0 + std::sqrt(5.0)) / 2.0;
    EXPECT_NEAR(r.sampled, 1.0 / (lam * lam), 1e-6);  // 0.1459
    EXPECT_NEAR(r.frame_aligned, 1.0 / (lam * lam), 1e-6);
    EXPECT_LT(r.sampled, 0.5);
}

TEST(DominationMargin, IsometriesGiveOne) {
    std::vector<Point> orbit = {Point{0.3, 0.4}};
    Mat ex(2, 1), ey(2, 1);
    ex(0, 0) = 1.0;
    ey(1, 0) = 1.0;
    for (MapSpec m : {MapSpec::identity(2), MapSpec::rotation({0.37, 0.11})}) {
        MarginResult r = domination_margin(m, orbit, 1, {ex}, {ey});
        EXPECT_NEAR(r.sampled, 1.0, 1e-12);
    }
}

TEST(DominationMargin, ScaleCoherentForLinearMaps) {
    MapSpec cat = cat_map();
    std::vector<Point> orbit = {Point{0.25, 0.75}};
    std::vector<Mat> low = {cat_stable_frame()}, high = {cat_unstable_frame()};
    double m1 = domination_margin(cat, orbit, 1, low, high).sampled;
    double m2 = domination_margin(cat, orbit, 2, low, high).sampled;
    EXPECT_NEAR(m2, m1 * m1, 1e-9);
}

TEST(DominationMargin, DegenerateFramesRejected) {
    Mat bad(2, 1);
    bad(0, 0) = 2.0;  // not unit
    std::vector<Point> orbit = {Point{0.1, 0.1}};
    EXPECT_THROW(domination_margin(cat_map(), orbit, 1, {bad}, {cat_unstable_frame()}),
                 std::invalid_argument);
}

TEST(AveragedContraction, CatStableAndUnstableBundles) {
    MapSpec cat = cat_map();
    // frames at g^{-i}(x) for E1 forward, at g^{+i}(x) for E3 backward; the
    // eigenframes are position independent
    std::vector<Mat> stable(6, cat_stable_frame()), unstable(6, cat_unstable_frame());
    Point x{0.4, 0.1};
    EXPECT_TRUE(averaged_contraction(cat, x, stable, 1, 0.9, 6,
                                     ContractionDirection::forward_on_e1));
    EXPECT_TRUE(averaged_contraction(cat, x, unstable, 1, 0.9, 6,
                                     ContractionDirection::backward_on_e3));
    EXPECT_FALSE(averaged_contraction(cat, x, unstable, 1, 0.9, 6,
                                      ContractionDirection::forward_on_e1));

    std::vector<Mat> axis(4, Mat{{1}, {0}});
    EXPECT_FALSE(averaged_contraction(MapSpec::identity(2), x, axis, 1, 0.1, 4,
                                      ContractionDirection::forward_on_e1));
    EXPECT_THROW(averaged_contraction(cat, x, {cat_stable_frame()}, 1, 0.9, 3,
                                      ContractionDirection::forward_on_e1),
                 std::invalid_argument);  // missing frames
}

TEST(EstimateSplitting, CatMapRecoversEigensplitting) {
    MapSpec cat = cat_map();
    SplittingEstimate est = estimate_splitting(cat, Point{0.3, 0.55}, 50, 1);
    EXPECT_EQ(est.d1, 1);
    EXPECT_EQ(est.d2, 0);
    EXPECT_EQ(est.d3, 1);
    EXPECT_TRUE(est.classify_ok);
    EXPECT_TRUE(est.center_at_most_line);
    EXPECT_TRUE(est.dominated);
    EXPECT_LT(est.margin_low_pair, 0.5);
    EXPECT_LT(est.margin_high_pair, 0.5);
    EXPECT_LT(est.margin, 1.0);
    EXPECT_TRUE(est.contraction_e1);
    EXPECT_TRUE(est.contraction_e3);

    Mat s = cat_stable_frame(), u = cat_unstable_frame();
    for (size_t t = 0; t < est.orbit.size(); ++t) {
        EXPECT_LE(direction_angle(est.e1[t].col(0), s.col(0)), 1e-3);
        EXPECT_LE(direction_angle(est.e3[t].col(0), u.col(0)), 1e-3);
    }
}

TEST(EstimateSplitting, BundlesAreInvariantAlongTheOrbit) {
    for (MapSpec m : {cat_map(), MapSpec::perturbed_toral(IntMat{{2, 1}, {1, 1}}, 0.01)}) {
        SplittingEstimate est = estimate_splitting(m, Point{0.37, 0.21}, 40, 1);
        ASSERT_EQ(est.d1, 1);
        ASSERT_EQ(est.d3, 1);
        for (size_t t = 0; t + 1 < est.orbit.size(); ++t) {
            Mat j = m.jacobian(est.orbit[t]);
            std::vector<double> pushed = j * est.e3[t].col(0);
            EXPECT_LE(direction_angle(pushed, est.e3[t + 1].col(0)), 1e-3) << m.kind_name();
            Mat jinv = m.inverse_jacobian(est.orbit[t + 1]);
            std::vector<double> pulled = jinv * est.e1[t + 1].col(0);
            EXPECT_LE(direction_angle(pulled, est.e1[t].col(0)), 1e-3) << m.kind_name();
        }
    }
}

TEST(EstimateSplitting, IdentityIsAllCenter) {
    SplittingEstimate est = estimate_splitting(MapSpec::identity(2), Point{0.5, 0.25}, 20, 1);
    EXPECT_EQ(est.d1, 0);
    EXPECT_EQ(est.d2, 2);
    EXPECT_EQ(est.d3, 0);
    EXPECT_FALSE(est.center_at_most_line);  // dim E2 = 2 > 1
    EXPECT_FALSE(est.dominated);
}

TEST(EstimateSplitting, PerturbedCatKeepsHyperbolicSplitting) {
    MapSpec pert = MapSpec::perturbed_toral(IntMat{{2, 1}, {1, 1}}, 0.01);
    SplittingEstimate est = estimate_splitting(pert, Point{0.123, 0.456}, 50, 1);
    EXPECT_EQ(est.d1, 1);
    EXPECT_EQ(est.d2, 0);
    EXPECT_EQ(est.d3, 1);
    EXPECT_LT(est.margin_low_pair, 0.5);
    EXPECT_LT(est.margin_high_pair, 0.5);
}

TEST(EstimateSplitting, ConeCriterionOracleForPerturbedCat) {
    // a fixed cone of half-angle 0.2 rad about the unperturbed unstable
    // direction is mapped strictly inside itself along sampled orbits
    MapSpec pert = MapSpec::perturbed_toral(IntMat{{2, 1}, {1, 1}}, 0.01);
    Mat u = cat_unstable_frame();
    std::vector<double> udir = u.col(0);
    double half_angle = 0.2;
    SeededUniform rng(31);
    for (int s = 0; s < 1000; ++s) {
        Point p{rng.next(), rng.next()};
        for (int step = 0; step < 3; ++step) {
            // boundary rays of the cone
            for (double sign : {-1.0, 1.0}) {
                double c = std::cos(half_angle), sn = sign * std::sin(half_angle);
                std::vector<double> ray{c * udir[0] - sn * udir[1],
                                        sn * udir[0] + c * udir[1]};
                std::vector<double> img = pert.jacobian(p) * ray;
                EXPECT_LT(direction_angle(img, udir), half_angle);
            }
            p = pert.eval(p);
        }
    }
}

TEST(PeriodicAnalysis, CatFixedPointAndPeriodTwo) {
    MapSpec cat = cat_map();
    PeriodicAnalysis a = periodic_orbit_analysis(cat, Point{0.0, 0.0}, 1, 0.5);
    ASSERT_EQ(a.exponents.size(), 2u);
    EXPECT_NEAR(a.exponents[0], kCatLogLambda, 1e-9);
    EXPECT_NEAR(a.exponents[1], -kCatLogLambda, 1e-9);
    EXPECT_TRUE(a.passes_gap);
    EXPECT_EQ(a.dims_below, 1);
    EXPECT_EQ(a.dims_center, 0);
    EXPECT_EQ(a.dims_above, 1);

    // (1/5, 2/5) has period 2 under the cat map
    PeriodicAnalysis b = periodic_orbit_analysis(cat, Point{0.2, 0.4}, 2, 0.5);
    EXPECT_NEAR(b.exponents[0], kCatLogLambda, 1e-9);
    EXPECT_TRUE(b.passes_gap);
}

TEST(PeriodicAnalysis, IdentityFailsMultiplicityClause) {
    PeriodicAnalysis a =
        periodic_orbit_analysis(MapSpec::identity(2), Point{0.3, 0.9}, 1, 0.5);
    EXPECT_EQ(a.center_count, 2);
    EXPECT_FALSE(a.passes_gap);
}

TEST(PeriodicAnalysis, RotationsPeriodicityHandling) {
    EXPECT_THROW(
        periodic_orbit_analysis(MapSpec::rotation({0.618034, 0.0}), Point{0.1, 0.1}, 5, 0.5),
        std::invalid_argument);
    PeriodicAnalysis a =
        periodic_orbit_analysis(MapSpec::rotation({0.25, 0.0}), Point{0.1, 0.1}, 4, 0.5);
    EXPECT_EQ(a.center_count, 2);
    EXPECT_FALSE(a.passes_gap);
}

TEST(PeriodicAnalysis, NonlinearFixedPoints) {
    // standard map fixed point (0,0) at K = 1: trace 3, cat-map spectrum
    PeriodicAnalysis s =
        periodic_orbit_analysis(MapSpec::standard_map(1.0), Point{0.0, 0.0}, 1, 0.5);
    EXPECT_NEAR(s.exponents[0], kCatLogLambda, 1e-9);
    EXPECT_TRUE(s.passes_gap);

    // Henon fixed point from the quadratic formula
    double a = 1.4, b = 0.3;
    double xf = (-(1.0 - b) + std::sqrt((1.0 - b) * (1.0 - b) + 4.0 * a)) / (2.0 * a);
    PeriodicAnalysis h =
        periodic_orbit_analysis(MapSpec::henon(a, b), Point{xf, b * xf}, 1, 0.5);
    EXPECT_TRUE(h.passes_gap);
    EXPECT_EQ(h.dims_below, 1);
    EXPECT_EQ(h.dims_above, 1);
    EXPECT_NEAR(h.exponents[0] + h.exponents[1], std::log(b), 1e-9);
}

TEST(ThreeDimensional, PlasticCompanionSplitting) {
    // t^3 - t - 1: one real expanding eigenvalue rho = 1.3247..., a complex
    // contracting pair of modulus rho^(-1/2); exponents (log rho, -log(rho)/2
    // twice) and a (2,0,1) splitting that is dominated at scale 3
    MapSpec m3 = MapSpec::toral_automorphism(IntMat{{0, 1, 0}, {0, 0, 1}, {1, 1, 0}});
    Point x{std::vector<double>{0.3, 0.7, 0.21}};
    double log_rho = std::log(1.3247179572447460);

    ExponentEstimate e = finite_time_exponents(m3, x, 60);
    ASSERT_EQ(e.exponents.size(), 3u);
    EXPECT_NEAR(e.exponents[0], log_rho, 1e-3);
    EXPECT_NEAR(e.exponents[1], -log_rho / 2, 2e-3);
    EXPECT_NEAR(e.exponents[2], -log_rho / 2, 2e-3);
    EXPECT_NEAR(e.exponents[0] + e.exponents[1] + e.exponents[2], 0.0, 1e-9);  // det 1

    SplittingEstimate est = estimate_splitting(m3, x, 40, 3);
    EXPECT_EQ(est.d1, 2);
    EXPECT_EQ(est.d2, 0);
    EXPECT_EQ(est.d3, 1);
    EXPECT_TRUE(est.center_at_most_line);
    EXPECT_LT(est.margin_high_pair, 0.5);
    EXPECT_TRUE(est.dominated);
}

TEST(EstimateSplitting, MarginFieldIsRatioAgainstHalf) {
    SplittingEstimate est = estimate_splitting(cat_map(), Point{0.3, 0.55}, 50, 1);
    double worst_raw = std::max(est.margin_low_pair, est.margin_high_pair);
    EXPECT_NEAR(est.margin, worst_raw / 0.5, 1e-12);
    EXPECT_EQ(est.dominated, est.margin < 1.0);
}
