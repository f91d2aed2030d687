#include "ssc/polynomial.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ssc;

TEST_CASE("monomial basis counts and ordering")
{
    const auto b21 = monomial_basis(2, 1);
    REQUIRE(b21.size() == 3);
    CHECK(b21[0] == Exponent{0, 0});
    CHECK(b21[1] == Exponent{1, 0});
    CHECK(b21[2] == Exponent{0, 1});
    CHECK(monomial_basis(2, 2).size() == 6);
    CHECK(monomial_basis(3, 2).size() == 10);
    CHECK(basis_size(4, 5) == 126);
    for (int d = 1; d <= 4; ++d)
        for (int p = 0; p <= 5; ++p)
            CHECK(monomial_basis(d, p).size() == basis_size(d, p));

    const auto b22 = monomial_basis(2, 2);
    CHECK(b22[3] == Exponent{2, 0});
    CHECK(b22[4] == Exponent{1, 1});
    CHECK(b22[5] == Exponent{0, 2});
}

TEST_CASE("line through two points in 1D")
{
    const Point a{0.0}, b{1.0};
    const std::vector<PointView> pts{a, b};
    const std::vector<double> vals{0.0, 1.0};
    const Point origin{0.0};
    auto g = fit_interpolant(pts, vals, 1, origin);
    REQUIRE(g);
    // With center 0 and half-width scale 0.5 the coefficients are [0, 0.5]
    // in scaled coordinates; the represented function is x.
    CHECK(g->coefficients()[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g->coefficients()[1] * 1.0 / g->scale()[0] == doctest::Approx(1.0));
    for (double x : {0.0, 0.3, 0.75, 1.0}) {
        const Point p{x};
        CHECK((*g)(p) == doctest::Approx(x).epsilon(1e-14));
    }
}

TEST_CASE("plane through three vertices in 2D")
{
    const Point a{0, 0}, b{1, 0}, c{0, 1};
    const std::vector<PointView> pts{a, b, c};
    const std::vector<double> vals{1, 2, 3};
    const Point center{1.0 / 3, 1.0 / 3};
    auto g = fit_interpolant(pts, vals, 1, center);
    REQUIRE(g);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 20; ++i) {
        const Point x{u(rng), u(rng)};
        CHECK((*g)(x) == doctest::Approx(1 + x[0] + 2 * x[1]).epsilon(1e-13));
    }
}

TEST_CASE("collinear points give a singular quadratic system")
{
    std::vector<Point> store;
    for (int i = 0; i < 6; ++i)
        store.push_back({0.1 * i, 0.2 * i});
    std::vector<PointView> pts(store.begin(), store.end());
    const std::vector<double> vals{1, 2, 0, 4, 5, 3};
    const Point center{0.25, 0.5};
    CHECK_FALSE(fit_interpolant(pts, vals, 2, center).has_value());
}

TEST_CASE("random polynomials are reproduced")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    std::normal_distribution<double> n01;
    for (int d : {2, 3}) {
        for (int p = 1; p <= 4; ++p) {
            const auto basis = monomial_basis(d, p);
            std::vector<double> coef(basis.size());
            for (auto& c : coef)
                c = n01(rng);
            auto f = [&](PointView x) {
                double s = 0;
                for (std::size_t k = 0; k < basis.size(); ++k) {
                    double m = coef[k];
                    for (int i = 0; i < d; ++i)
                        m *= std::pow(x[i], basis[k][i]);
                    s += m;
                }
                return s;
            };
            std::vector<Point> store(basis.size(), Point(d));
            std::vector<double> vals;
            for (auto& x : store) {
                for (auto& c : x)
                    c = u(rng);
                vals.push_back(f(x));
            }
            std::vector<PointView> pts(store.begin(), store.end());
            const Point center(d, 0.5);
            auto g = fit_interpolant(pts, vals, p, center);
            REQUIRE(g);
            for (int t = 0; t < 50; ++t) {
                Point x(d);
                for (auto& c : x)
                    c = u(rng);
                CHECK(std::abs((*g)(x) - f(x)) <= 1e-7 * (1 + std::abs(f(x))));
            }
        }
    }
}

TEST_CASE("least squares recovers a lower-degree polynomial exactly")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Point> store(10, Point(2));
    std::vector<double> vals;
    for (auto& x : store) {
        x = {u(rng), u(rng)};
        vals.push_back(2 - x[0] + 3 * x[1]);
    }
    std::vector<PointView> pts(store.begin(), store.end());
    const Point center{0.5, 0.5};
    const auto g = fit_least_squares(pts, vals, 1, center);
    const Point x{0.2, 0.9};
    CHECK(g(x) == doctest::Approx(2 - 0.2 + 2.7).epsilon(1e-12));
}
