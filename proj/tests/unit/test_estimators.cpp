#include "ssc/adaptive.hpp"
#include "ssc/errors.hpp"
#include "ssc/estimators.hpp"
#include "ssc/stats.hpp"
#include "ssc/testbed.hpp"

#include <doctest.h>

#include <cmath>

using namespace ssc;

namespace {

// g(x) = x on [0,1] written in the scaled basis y = (x - 0.5) / 0.5.
LocalSurrogate identity_1d()
{
    LocalSurrogate s;
    s.sides.push_back({Polynomial(1, {0.5}, {0.5}, {0.5, 0.5}), {}, 0.0});
    return s;
}

} // namespace

TEST_CASE("last-point estimate is volume times squared hierarchical error")
{
    CHECK(estimate_last_point(0.25, 0.1) == doctest::Approx(0.0025).epsilon(1e-15));
    CHECK(estimate_last_point(0.7, 0.0) == 0.0);
}

TEST_CASE("global aggregates")
{
    const std::vector<double> parts{0.04, 0.09};
    CHECK(global_aggregate(EstimatorPolicy::last_point, parts) == doctest::Approx(std::sqrt(0.13)).epsilon(1e-15));
    CHECK(global_aggregate(EstimatorPolicy::mc_l1, parts) == doctest::Approx(0.13).epsilon(1e-15));
    CHECK(global_aggregate(EstimatorPolicy::volume_order, parts) == doctest::Approx(0.13).epsilon(1e-15));

    EstimatorState st(EstimatorPolicy::last_point);
    st.set(3, 0.04);
    CHECK(st.aggregate() == doctest::Approx(0.2));
    st.set(7, 0.09);
    st.set(9, 1.0);
    st.erase(9);
    CHECK(st.size() == 2);
    CHECK(st.aggregate() == doctest::Approx(std::sqrt(0.13)));
    CHECK_FALSE(st.contains(9));
}

TEST_CASE("volume-order estimate")
{
    CHECK(estimate_volume_order(1.0, 3, 2) == doctest::Approx(1.0));
    CHECK(estimate_volume_order(0.25, 1, 2) == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(estimate_volume_order(0.5, 3, 4) == doctest::Approx(0.25).epsilon(1e-15));

    // Four quarter triangles of the square, p = 1.
    const std::vector<double> quarters(4, estimate_volume_order(0.25, 1, 2));
    CHECK(global_aggregate(EstimatorPolicy::volume_order, quarters) == doctest::Approx(0.25));

    // Splitting strictly lowers each child's estimate.
    for (int p = 1; p <= 5; ++p)
        for (int d = 1; d <= 4; ++d)
            CHECK(estimate_volume_order(0.3, p, d) < estimate_volume_order(0.6, p, d));
}

TEST_CASE("Monte Carlo estimate of a linear function against zero")
{
    const LocalSurrogate g = identity_1d();
    LowerComparator zero{{Polynomial::constant(1, 0.0)}};
    Rng rng = derive_rng(11, {1});
    const std::vector<Point> unit{{0.0}, {1.0}};
    // vol * E[x^2] = 1/3; the draw standard deviation of x^2 is sqrt(4/45).
    const int n = 10000;
    const double est = estimate_mc_l1(unit, 1.0, g, zero, n, rng);
    CHECK(std::abs(est - 1.0 / 3.0) < 4.0 * std::sqrt(4.0 / 45.0 / n));

    // Additivity across a split of the interval: 1/24 + 7/24.
    const std::vector<Point> left{{0.0}, {0.5}};
    const std::vector<Point> right{{0.5}, {1.0}};
    const double a = estimate_mc_l1(left, 0.5, g, zero, n, rng);
    const double b = estimate_mc_l1(right, 0.5, g, zero, n, rng);
    CHECK(std::abs(a - 1.0 / 24.0) < 0.002);
    CHECK(std::abs(b - 7.0 / 24.0) < 0.006);
    CHECK(std::abs(a + b - 1.0 / 3.0) < 0.008);

    LowerComparator same{{g.sides[0].poly}};
    CHECK(estimate_mc_l1(unit, 1.0, g, same, 100, rng) == 0.0);
    CHECK_THROWS_AS(estimate_mc_l1(unit, 0.0, g, zero, 10, rng), DegenerateSimplex);
}

TEST_CASE("degree-1 comparator is the minimum vertex value")
{
    auto tri = Triangulation::unit_cube(2);
    tri.insert(Point{0.5, 0.5});
    SampleSet samples(2);
    auto f = [](PointView x) { return 1.0 + x[0] + 2.0 * x[1]; };
    for (std::size_t i = 0; i < tri.point_count(); ++i)
        samples.add(tri.point(static_cast<int>(i)), f(tri.point(static_cast<int>(i))), 0);
    for (int id : tri.alive_simplices()) {
        const auto local = build_local_surrogate(id, tri, samples, {1, Mode::improved, LecMode::off});
        const auto lower = lower_degree_comparator(local, tri.simplex(id), samples);
        REQUIRE(lower.sides.size() == 1);
        double lo = 1e300;
        for (int v : tri.simplex(id).vertices)
            lo = std::min(lo, samples.value(v));
        CHECK(lower.sides[0](Point{0.3, 0.6}) == doctest::Approx(lo));
    }
}

TEST_CASE("estimators never call the oracle")
{
    for (auto policy : {EstimatorPolicy::last_point, EstimatorPolicy::mc_l1, EstimatorPolicy::volume_order}) {
        TestOracle f(TestFunction::clipped_sine, 2);
        BuildConfig c;
        c.p_max = 3;
        c.estimator = policy;
        c.budget = 120;
        const auto model = build(f, c);
        CHECK(f.calls() == model.samples().size());
    }
}

TEST_CASE("every aggregate falls at least fourfold on the smooth function")
{
    for (auto policy : {EstimatorPolicy::last_point, EstimatorPolicy::mc_l1, EstimatorPolicy::volume_order}) {
        TestOracle f(TestFunction::smooth_sine, 2);
        BuildConfig c;
        c.p_max = 2;
        c.estimator = policy;
        c.budget = 800;
        c.seed = 3;
        double at50 = -1.0;
        const auto model = build(f, c, [&](const SurrogateModel& m) {
            if (at50 < 0.0 && m.samples().size() >= 50)
                at50 = m.aggregate();
        });
        INFO(to_string(policy));
        CHECK(model.aggregate() * 4.0 <= at50);
    }
}

TEST_CASE("estimator names")
{
    CHECK(parse_estimator("last-point") == EstimatorPolicy::last_point);
    CHECK(parse_estimator("mc-l1") == EstimatorPolicy::mc_l1);
    CHECK(parse_estimator("vol-order") == EstimatorPolicy::volume_order);
    CHECK(to_string(EstimatorPolicy::mc_l1) == "mc-l1");
    CHECK_THROWS_AS(parse_estimator("l2"), ConfigError);
}
