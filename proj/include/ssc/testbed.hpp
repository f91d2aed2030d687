#pragma once

#include "ssc/oracle.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ssc {

enum class TestFunction { smooth_sine, smooth_sine_fake_kink, clipped_sine };

std::string_view to_string(TestFunction f);
/// Accepts "smooth-sine", "fake-kink" and "clipped-sine".
TestFunction parse_test_function(std::string_view s);

/// prod sin(pi x_i), optionally clipped at or labelled by a threshold.
/// Labels: 1 where the product is below the threshold, 2 otherwise; the
/// plain smooth function has the single label 1.
class TestOracle : public Oracle {
public:
    TestOracle(TestFunction kind, int d, double threshold = 0.7);

    TestFunction kind() const { return kind_; }
    double threshold() const { return threshold_; }

protected:
    Evaluation do_evaluate(PointView x) const override;

private:
    TestFunction kind_;
    double threshold_;
};

/// Steady isothermal gas network with pressure control valves.
///
/// Unknowns are squared pressures at non-supply nodes and edge flows. Pipes
/// obey pi_in - pi_out = c q |q| with c = friction * length; a valve sets
/// p_out = min(p_in, p_set) and is active iff p_in > p_set. Mass is
/// conserved at every node except the supply.
struct GasNetwork {
    enum class NodeKind { supply, demand, junction };
    enum class EdgeKind { pipe, valve };

    struct Node {
        std::string name;
        NodeKind kind = NodeKind::junction;
        double pressure = 0.0; ///< supply pressure
        double demand = 0.0;   ///< withdrawn flow (demand nodes)
    };
    struct Edge {
        std::string name;
        EdgeKind kind = EdgeKind::pipe;
        int from = -1;
        int to = -1;
        double length = 0.0;
        double friction = 0.0;
        double p_set = 0.0;
    };
    /// Coordinate `index` of x sets parameter `target` to low + x (high - low).
    /// Targets are "node.pressure", "node.demand", "edge.length",
    /// "edge.friction" or "edge.p_set" with the element's name.
    struct Binding {
        int index = 0;
        std::string target;
        double low = 0.0;
        double high = 0.0;
    };

    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<Binding> bindings;
    std::string qoi_node;

    int dimension() const { return static_cast<int>(bindings.size()); }
    int node_index(std::string_view name) const;
    int edge_index(std::string_view name) const;
    int valve_count() const;

    /// Throws ConfigError on structural problems (supply count, unknown
    /// names, disconnected graph, binding indices).
    void validate() const;
};

/// Reads the line-based network description. Throws ParseError with the
/// line number on malformed input and ConfigError on structural problems.
GasNetwork parse_gas_network(std::istream& in);
GasNetwork load_gas_network(const std::string& path);

struct GasSolution {
    std::vector<double> pressure; ///< per node
    std::vector<double> flow;     ///< per edge, positive from -> to
    std::uint64_t active_valves = 0;
    int iterations = 0;
    double qoi = 0.0;
};

/// Damped Newton solve with parameters applied from x in [0,1]^d.
/// Throws SolveFailure or InfeasibleNetwork.
GasSolution solve_gas_network(const GasNetwork& net, PointView x);

/// Oracle returning the QoI pressure and the valve-activity bit mask.
class GasNetworkOracle : public Oracle {
public:
    explicit GasNetworkOracle(GasNetwork net);
    const GasNetwork& network() const { return net_; }

protected:
    Evaluation do_evaluate(PointView x) const override;

private:
    GasNetwork net_;
};

} // namespace ssc
