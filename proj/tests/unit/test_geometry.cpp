#include "ssc/errors.hpp"
#include "ssc/geometry.hpp"

#include "checks.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ssc;
using namespace ssc::testing;

TEST_CASE("simplex volume of reference simplices")
{
    CHECK(simplex_volume(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}}) == doctest::Approx(0.5));
    CHECK(simplex_volume(std::vector<Point>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == doctest::Approx(1.0 / 6.0));
    // shoelace: 0.5 * |2*2 - 0*0|
    CHECK(simplex_volume(std::vector<Point>{{0, 0}, {2, 0}, {0, 2}}) == doctest::Approx(2.0));
    CHECK(simplex_volume(std::vector<Point>{{0, 0}, {1, 1}, {2, 2}}) == 0.0);
    CHECK(signed_simplex_volume(std::vector<Point>{{0, 0}, {0, 1}, {1, 0}}) == doctest::Approx(-0.5));
}

TEST_CASE("unit simplex sampler in one dimension is uniform (KS test)")
{
    Rng rng(1);
    const int n = 100000;
    std::vector<double> xs(n);
    for (auto& x : xs) {
        const auto p = sample_unit_simplex(1, rng);
        REQUIRE(p.size() == 1);
        x = p[0];
    }
    std::sort(xs.begin(), xs.end());
    double dmax = 0.0;
    for (int i = 0; i < n; ++i) {
        dmax = std::max(dmax, std::abs(xs[i] - static_cast<double>(i) / n));
        dmax = std::max(dmax, std::abs(xs[i] - static_cast<double>(i + 1) / n));
    }
    // Kolmogorov critical value at alpha = 0.01
    CHECK(dmax < ks_critical_001(n));
}

TEST_CASE("unit simplex sampler moments")
{
    Rng rng(2);
    const int n = 100000;
    double mean2 = 0.0;
    int below_half = 0;
    for (int i = 0; i < n; ++i) {
        const auto p2 = sample_unit_simplex(2, rng);
        CHECK_FALSE((p2[0] < 0.0 || p2[1] < 0.0 || p2[0] + p2[1] > 1.0));
        mean2 += p2[0];
        const auto p3 = sample_unit_simplex(3, rng);
        if (p3[0] + p3[1] + p3[2] <= 0.5)
            ++below_half;
    }
    CHECK(std::abs(mean2 / n - 1.0 / 3.0) < 0.01);
    CHECK(std::abs(static_cast<double>(below_half) / n - 0.125) < 0.01);
}

TEST_CASE("unit simplex sampler passes a chi-square uniformity test")
{
    for (int d : {2, 3}) {
        CAPTURE(d);
        Rng rng(100 + d);
        const int n = 100000;
        const int bins = 10;
        const double cells = std::pow(bins, d);
        CHECK(simplex_sampler_chi2(d, n, bins, rng) < chi2_critical_001(cells - 1));
    }
}

TEST_CASE("sampling inside a simplex stays strictly inside")
{
    Rng rng(3);
    const std::vector<Point> unit{{0, 0}, {1, 0}, {0, 1}};
    Point mean{0, 0};
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const auto x = sample_in_simplex(unit, rng);
        const auto lam = barycentric_coordinates(unit, x);
        for (double l : lam) {
            CHECK(l > 0.0);
            CHECK(l < 1.0);
        }
        mean[0] += x[0] / n;
        mean[1] += x[1] / n;
    }
    CHECK(std::abs(mean[0] - 1.0 / 3.0) < 0.01);
    CHECK(std::abs(mean[1] - 1.0 / 3.0) < 0.01);

    const std::vector<Point> skew{{0.2, 0.1, 0.3}, {0.9, 0.2, 0.1}, {0.4, 0.8, 0.2}, {0.3, 0.3, 0.95}};
    for (int i = 0; i < 1000; ++i)
        CHECK(point_in_simplex(skew, sample_in_simplex(skew, rng)));

    const std::vector<Point> flat{{0, 0}, {1, 1}, {2, 2}};
    CHECK_THROWS_AS(sample_in_simplex(flat, rng), DegenerateSimplex);
}

TEST_CASE("subsimplex vertices are facet centres")
{
    const std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}};
    const auto sub = subsimplex(tri);
    REQUIRE(sub.size() == 3);
    CHECK(sub[0] == Point{0.5, 0.5});
    CHECK(sub[1] == Point{0.0, 0.5});
    CHECK(sub[2] == Point{0.5, 0.0});
    CHECK(simplex_volume(sub) / simplex_volume(tri) == doctest::Approx(0.25));

    const std::vector<Point> tet{{0.1, 0, 0}, {1, 0.2, 0}, {0, 1, 0.3}, {0.2, 0.1, 1}};
    CHECK(simplex_volume(subsimplex(tet)) / simplex_volume(tet) == doctest::Approx(1.0 / 27.0));

    const std::vector<Point> flat{{0, 0}, {1, 1}, {2, 2}};
    CHECK_THROWS_AS(subsimplex(flat), DegenerateSimplex);
}

TEST_CASE("derived random streams are reproducible and distinct")
{
    auto a = derive_rng(7, {1, 2});
    auto b = derive_rng(7, {1, 2});
    auto c = derive_rng(7, {1, 3});
    const auto va = a();
    CHECK(va == b());
    CHECK(va != c());
}
