#include "ssc/errors.hpp"
#include "ssc/testbed.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ssc;

namespace {

GasNetwork parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_gas_network(in);
}

// supply -- pipe (c = 2) -- valve (p_set 8) -- pipe (c = 2) -- demand 1
const char* chain = R"(
node name=S kind=supply pressure=10
node name=A kind=junction
node name=B kind=junction
node name=D kind=demand demand=1
pipe name=P1 from=S to=A length=2 friction=1
valve name=V from=A to=B p_set=8
pipe name=P2 from=B to=D length=2 friction=1
bind index=0 target=S.pressure low=5 high=15
qoi node=D
)";

double chain_qoi(double supply)
{
    // Unclamped: p_D^2 = p_S^2 - 4. Clamped: p_D^2 = 64 - 2.
    return supply * supply - 2.0 > 64.0 ? std::sqrt(62.0) : std::sqrt(supply * supply - 4.0);
}

} // namespace

TEST_CASE("test function values and labels")
{
    TestOracle smooth(TestFunction::smooth_sine, 2);
    TestOracle clipped(TestFunction::clipped_sine, 2);
    TestOracle fake(TestFunction::smooth_sine_fake_kink, 2);
    CHECK(smooth.evaluate(Point{0.5, 0.5}).value == doctest::Approx(1.0));
    CHECK(smooth.evaluate(Point{0.5, 0.5}).label == smooth.evaluate(Point{0.1, 0.2}).label);
    const auto c = clipped.evaluate(Point{0.5, 0.5});
    CHECK(c.value == 0.7);
    CHECK(c.label == 2);
    const auto q = clipped.evaluate(Point{0.25, 0.25});
    CHECK(q.value == doctest::Approx(0.5));
    CHECK(q.label == 1);
    const auto k = fake.evaluate(Point{0.5, 0.5});
    CHECK(k.value == doctest::Approx(1.0));
    CHECK(k.label == 2);

    // Clipped and smooth agree wherever the label is 1.
    Rng rng = derive_rng(1, {0});
    for (int i = 0; i < 1000; ++i) {
        const Point x{uniform_open01(rng), uniform_open01(rng)};
        const auto e = clipped.evaluate(x);
        if (e.label == 1)
            CHECK(e.value == smooth.evaluate(x).value);
        else
            CHECK(e.value == 0.7);
    }
    CHECK_THROWS_AS(TestOracle(TestFunction::clipped_sine, 2, 1.5), ConfigError);
    CHECK(parse_test_function("fake-kink") == TestFunction::smooth_sine_fake_kink);
    CHECK_THROWS_AS(parse_test_function("cosine"), ConfigError);
}

TEST_CASE("single pipe without demand keeps the supply pressure")
{
    const auto net = parse(R"(
node name=S kind=supply pressure=10
node name=D kind=demand demand=0
pipe name=P from=S to=D length=3 friction=0.1
qoi node=D
)");
    const auto sol = solve_gas_network(net, Point{});
    CHECK(sol.qoi == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(sol.flow[0] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("valve chain against the closed form")
{
    const auto net = parse(chain);
    for (int i = 0; i <= 40; ++i) {
        const double x = i / 40.0;
        const double supply = 5.0 + 10.0 * x;
        const auto sol = solve_gas_network(net, Point{x});
        CHECK(sol.qoi == doctest::Approx(chain_qoi(supply)).epsilon(1e-9));
        CHECK(sol.active_valves == (supply * supply - 2.0 > 64.0 ? 1u : 0u));
        CHECK(sol.flow[0] == doctest::Approx(1.0).epsilon(1e-9));
    }
    // Above activation the QoI does not depend on the supply pressure.
    const double h = 1e-4;
    const double a = solve_gas_network(net, Point{0.8 - h}).qoi;
    const double b = solve_gas_network(net, Point{0.8 + h}).qoi;
    CHECK(std::abs(b - a) / (2 * h) < 1e-6);
}

TEST_CASE("bundled network: mass balance, determinism and a single kink")
{
    const auto net = load_gas_network(SSC_DATA_DIR "/toy_network.txt");
    CHECK(net.dimension() == 2);
    CHECK(net.valve_count() == 2);
    GasNetworkOracle oracle(net);

    Rng rng = derive_rng(2, {0});
    for (int i = 0; i < 200; ++i) {
        const Point x{uniform_open01(rng), uniform_open01(rng)};
        const auto sol = solve_gas_network(net, x);
        // Mass balance at every non-supply node with the bound demand.
        const double d1 = 2.0 + 6.0 * x[1];
        for (std::size_t k = 0; k < net.nodes.size(); ++k) {
            const auto& node = net.nodes[k];
            if (node.kind == GasNetwork::NodeKind::supply)
                continue;
            double balance = -(node.name == "D1" ? d1 : node.demand);
            for (std::size_t e = 0; e < net.edges.size(); ++e) {
                if (net.edges[e].to == static_cast<int>(k))
                    balance += sol.flow[e];
                if (net.edges[e].from == static_cast<int>(k))
                    balance -= sol.flow[e];
            }
            CHECK(std::abs(balance) <= 1e-9);
        }
        const auto e1 = oracle.evaluate(x);
        const auto e2 = oracle.evaluate(x);
        CHECK(e1.value == e2.value);
        CHECK(e1.label == e2.label);
    }

    // Supply sweep: the label of the downstream valve flips once, the QoI
    // increases strictly before and stays constant after.
    int flips = 0;
    auto prev = oracle.evaluate(Point{0.0, 0.5});
    for (int i = 1; i <= 400; ++i) {
        const auto e = oracle.evaluate(Point{i / 400.0, 0.5});
        const bool was = prev.label & 2;
        const bool is = e.label & 2;
        if (was != is)
            ++flips;
        if (!was && !is)
            CHECK(e.value > prev.value);
        if (was && is)
            CHECK(e.value == doctest::Approx(prev.value).epsilon(1e-12));
        prev = e;
    }
    CHECK(flips == 1);
}

TEST_CASE("network file errors")
{
    const std::string base = "node name=S kind=supply pressure=10\nnode name=D kind=demand demand=1\n";
    const std::string pipe = "pipe name=P from=S to=D length=1 friction=1\n";
    const std::string qoi = "qoi node=D\n";
    CHECK_NOTHROW(parse(base + pipe + qoi));
    CHECK_THROWS_AS(parse(base + "pipe name=P from=S to=D length=1 friction=1 colour=red\n" + qoi), ParseError);
    CHECK_THROWS_AS(parse(base + "pipe name=P from=S to=D length=1\n" + qoi), ParseError);
    CHECK_THROWS_AS(parse(base + "pipe name=P from=S to=D length=1e friction=1\n" + qoi), ParseError);
    CHECK_THROWS_AS(parse(base + "compressor name=C from=S to=D\n" + qoi), ParseError);
    CHECK_THROWS_AS(parse(base + pipe), ParseError);
    CHECK_THROWS_AS(parse(base + pipe + qoi + qoi), ParseError);
    CHECK_THROWS_AS(parse(base + "pipe name=P from=S to=X length=1 friction=1\n" + qoi), ParseError);
    CHECK_THROWS_AS(parse(base + "node name=T kind=supply pressure=5\n" + pipe +
                          "pipe name=Q from=T to=D length=1 friction=1\n" + qoi),
                    ConfigError);
    CHECK_THROWS_AS(parse(base + "node name=E kind=demand demand=1\n" + pipe + qoi), ConfigError);
    CHECK_THROWS_AS(parse(base + pipe + qoi + "bind index=1 target=S.pressure low=1 high=2\n"), ConfigError);
    CHECK_THROWS_AS(parse(base + pipe + qoi + "bind index=0 target=P.p_set low=1 high=2\n"), ConfigError);
    CHECK_THROWS_AS(load_gas_network("/nonexistent/network.txt"), ConfigError);
}
