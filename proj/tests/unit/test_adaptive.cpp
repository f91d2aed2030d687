#include "ssc/adaptive.hpp"
#include "ssc/errors.hpp"
#include "ssc/testbed.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace ssc;

namespace {

BuildConfig config(int p, std::size_t budget, std::uint64_t seed = 0)
{
    BuildConfig c;
    c.p_max = p;
    c.budget = budget;
    c.seed = seed;
    return c;
}

bool same_samples(const SampleSet& a, const SampleSet& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int id = static_cast<int>(i);
        const auto pa = a.point(id);
        const auto pb = b.point(id);
        if (!std::equal(pa.begin(), pa.end(), pb.begin()) || a.value(id) != b.value(id))
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("initial model holds the corners and the centre")
{
    for (int d : {2, 3, 4}) {
        TestOracle f(TestFunction::smooth_sine, d);
        const auto m = initialize(f, config(1, 100));
        CHECK(m.samples().size() == (std::size_t{1} << d) + 1);
        CHECK(f.calls() == m.samples().size());
        CHECK(m.log().size() == 1);
        const auto c = m.samples().point(1 << d);
        for (double v : c)
            CHECK(v == 0.5);
    }
    TestOracle f(TestFunction::smooth_sine, 2);
    CHECK(initialize(f, config(1, 5)).triangulation().simplex_count() == 4);
}

TEST_CASE("configuration validation")
{
    TestOracle f(TestFunction::smooth_sine, 2);
    CHECK_THROWS_AS(initialize(f, config(1, 4)), ConfigError);
    CHECK_THROWS_AS(initialize(f, config(0, 100)), ConfigError);
    auto c = config(1, 100);
    c.tolerance = -1.0;
    CHECK_THROWS_AS(initialize(f, c), ConfigError);
}

TEST_CASE("batch sizes")
{
    CHECK(parse_batch_size("4").resolve(100) == 4);
    CHECK(parse_batch_size("0.3n").resolve(10) == 3);
    CHECK(parse_batch_size("0.9n").resolve(100) == 90);
    CHECK(parse_batch_size("0.01n").resolve(5) == 1);
    CHECK(to_string(parse_batch_size("0.3n")) == "0.29999999999999999n");
    CHECK_THROWS_AS(parse_batch_size("0"), ConfigError);
    CHECK_THROWS_AS(parse_batch_size("1.5"), ConfigError);
    CHECK_THROWS_AS(parse_batch_size("n"), ConfigError);
    CHECK_THROWS_AS(parse_batch_size("-2"), ConfigError);
}

TEST_CASE("budget equal to the initial design returns the initial model")
{
    TestOracle f(TestFunction::clipped_sine, 2);
    const auto m = build(f, config(2, 5));
    CHECK(m.samples().size() == 5);
    CHECK(m.log().size() == 1);
    auto copy = m;
    CHECK_THROWS_AS(copy.refine_step(f), BudgetExhausted);
}

TEST_CASE("boundary simplices use the middle third of the longest edge")
{
    TestOracle f(TestFunction::smooth_sine, 2);
    const auto m = initialize(f, config(1, 100));
    for (int id : m.triangulation().alive_simplices()) {
        REQUIRE(m.is_boundary_simplex(id));
        auto verts = m.triangulation().simplex(id).vertices;
        std::sort(verts.begin(), verts.end());
        // The longest edge of each quarter triangle joins its two corners.
        const auto x0 = m.samples().point(verts[0]);
        const auto x1 = m.samples().point(verts[1]);
        Rng rng = derive_rng(5, {static_cast<std::uint64_t>(id)});
        Rng copy = rng;
        const double u = uniform_open01(copy);
        const Point x = m.place_new_point(id, rng);
        for (int k = 0; k < 2; ++k)
            CHECK(x[k] == doctest::Approx(x0[k] + (1.0 + u) / 3.0 * (x1[k] - x0[k])).epsilon(1e-15));
    }
    // The bottom triangle (corners 0, 1 and the centre) samples its bottom
    // edge between 1/3 and 2/3.
    const int bottom = m.triangulation().locate(Point{0.5, 0.1});
    Rng rng = derive_rng(6, {0});
    for (int r = 0; r < 20; ++r) {
        const Point x = m.place_new_point(bottom, rng);
        CHECK(x[1] == 0.0);
        CHECK(x[0] >= 1.0 / 3.0);
        CHECK(x[0] <= 2.0 / 3.0);
    }
}

TEST_CASE("interior simplices sample inside the subsimplex")
{
    TestOracle f(TestFunction::smooth_sine, 2);
    const auto m = build(f, config(1, 60, 2));
    int interior = 0;
    Rng rng = derive_rng(9, {0});
    for (int id : m.triangulation().alive_simplices()) {
        if (m.is_boundary_simplex(id))
            continue;
        ++interior;
        const auto sub = subsimplex(m.triangulation().vertex_points(id));
        for (int r = 0; r < 5; ++r) {
            const Point x = m.place_new_point(id, rng);
            CHECK(point_in_simplex(sub, x, 1e-12));
            for (double c : x) {
                CHECK(c > 0.0);
                CHECK(c < 1.0);
            }
        }
    }
    CHECK(interior > 0);
}

TEST_CASE("single refinement adds one point")
{
    TestOracle f(TestFunction::clipped_sine, 2);
    auto m = initialize(f, config(2, 100));
    CHECK(m.refine_step(f) == 1);
    CHECK(m.samples().size() == 6);
    CHECK(m.log().back().n_samples == 6);
    CHECK(f.calls() == 6);
    CHECK(m.triangulation().point_count() == 6);
}

TEST_CASE("batched refinement")
{
    TestOracle f(TestFunction::clipped_sine, 2);
    auto c = config(3, 400);
    c.m_ref = parse_batch_size("0.3n");
    auto m = initialize(f, c);
    std::size_t n = m.samples().size();
    while (n < c.budget) {
        const std::size_t want = std::min(c.m_ref.resolve(n), c.budget - n);
        CHECK(m.refine_step(f) == want);
        n += want;
        CHECK(m.samples().size() == n);
    }
    CHECK(f.calls() == c.budget);
}

TEST_CASE("builds are deterministic")
{
    TestOracle f(TestFunction::clipped_sine, 2);
    auto c = config(3, 200, 42);
    c.m_ref = parse_batch_size("0.2n");
    const auto a = build(f, c);
    const auto b = build(f, c);
    CHECK(same_samples(a.samples(), b.samples()));
    REQUIRE(a.log().size() == b.log().size());
    for (std::size_t i = 0; i < a.log().size(); ++i) {
        CHECK(a.log()[i].n_samples == b.log()[i].n_samples);
        CHECK(a.log()[i].n_simplices == b.log()[i].n_simplices);
        CHECK(a.log()[i].aggregate == b.log()[i].aggregate);
    }
    c.seed = 43;
    CHECK_FALSE(same_samples(a.samples(), build(f, c).samples()));
}

TEST_CASE("simplices spanning three regions are refined first")
{
    // Labels by quadrant around (0.4, 0.4); the centre is in the upper one.
    FunctionOracle f(2, [](PointView x) {
        return Evaluation{x[0] + x[1], (x[0] > 0.4 ? 1 : 0) + (x[1] > 0.4 ? 2 : 0)};
    });
    auto m = initialize(f, config(1, 100));
    std::set<int> pending;
    for (int id : m.triangulation().alive_simplices())
        if (m.surrogate(id).pending_refinement)
            pending.insert(id);
    REQUIRE_FALSE(pending.empty());
    const auto before = m;
    m.refine_step(f);
    CHECK(pending.count(before.locate(m.samples().point(5))) == 1);
    // Refinement continues until no simplex is left pending or the budget ends.
    while (m.samples().size() < 100)
        m.refine_step(f);
    for (int id : m.triangulation().alive_simplices())
        if (m.surrogate(id).pending_refinement)
            CHECK(m.triangulation().simplex(id).volume < 0.01);
}

TEST_CASE("invariants hold throughout builds")
{
    for (auto mode : {Mode::improved, Mode::original}) {
        TestOracle f(TestFunction::clipped_sine, 2);
        auto c = config(3, 300, 1);
        c.mode = mode;
        c.lec = mode == Mode::original ? LecMode::strict : LecMode::off;
        build(f, c, [&](const SurrogateModel& m) {
            CHECK(m.triangulation().total_volume() == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(m.triangulation().point_count() == m.samples().size());
            CHECK(m.estimates().size() == m.triangulation().simplex_count());
            for (const auto& [id, e] : m.estimates().parts())
                CHECK(e >= 0.0);
        });
    }
}

TEST_CASE("the model interpolates its samples")
{
    TestOracle f(TestFunction::smooth_sine, 3);
    const auto m = build(f, config(2, 150, 4));
    for (std::size_t i = 0; i < m.samples().size(); ++i) {
        const int id = static_cast<int>(i);
        const double v = m.samples().value(id);
        CHECK(std::abs(m(m.samples().point(id)) - v) <= 1e-8 * (1.0 + std::abs(v)));
    }
}

TEST_CASE("tolerance stops the build early")
{
    TestOracle f(TestFunction::smooth_sine, 2);
    auto c = config(2, 2000);
    c.tolerance = 1e-3;
    const auto m = build(f, c);
    CHECK(m.aggregate() <= 1e-3);
    CHECK(m.samples().size() < 2000);
}

TEST_CASE("evaluation on shared facets is deterministic")
{
    TestOracle f(TestFunction::clipped_sine, 2);
    const auto m = build(f, config(3, 80));
    const Point on_diagonal{0.25, 0.25};
    const int id = m.locate(on_diagonal);
    CHECK(m.locate(on_diagonal) == id);
    CHECK(evaluate_model(m, on_diagonal) == m(on_diagonal));
}

TEST_CASE("build log CSV")
{
    TestOracle f(TestFunction::smooth_sine, 2);
    const auto m = build(f, config(1, 8));
    const auto csv = build_log_csv(m.log());
    CHECK(csv.rfind("step,n_samples,n_simplices,aggregate_estimate,wall_time_s\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(m.log().size() + 1));
}
