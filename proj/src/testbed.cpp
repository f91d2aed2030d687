#include "ssc/testbed.hpp"

#include "ssc/errors.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace ssc {

std::string_view to_string(TestFunction f)
{
    switch (f) {
    case TestFunction::smooth_sine:
        return "smooth-sine";
    case TestFunction::smooth_sine_fake_kink:
        return "fake-kink";
    case TestFunction::clipped_sine:
        return "clipped-sine";
    }
    return "smooth-sine";
}

TestFunction parse_test_function(std::string_view s)
{
    if (s == "smooth-sine")
        return TestFunction::smooth_sine;
    if (s == "fake-kink")
        return TestFunction::smooth_sine_fake_kink;
    if (s == "clipped-sine")
        return TestFunction::clipped_sine;
    throw ConfigError("unknown oracle '" + std::string(s) + "'");
}

TestOracle::TestOracle(TestFunction kind, int d, double threshold)
    : Oracle(d)
    , kind_(kind)
    , threshold_(threshold)
{
    if (d < 1)
        throw ConfigError("oracle dimension must be at least 1");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ConfigError("threshold must lie in (0,1)");
}

Evaluation TestOracle::do_evaluate(PointView x) const
{
    double v = 1.0;
    for (double c : x)
        v *= std::sin(M_PI * c);
    switch (kind_) {
    case TestFunction::smooth_sine:
        return {v, 1};
    case TestFunction::smooth_sine_fake_kink:
        return {v, v < threshold_ ? 1 : 2};
    case TestFunction::clipped_sine:
        return {std::min(v, threshold_), v < threshold_ ? 1 : 2};
    }
    return {v, 1};
}

// Gas network ---------------------------------------------------------------

int GasNetwork::node_index(std::string_view name) const
{
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].name == name)
            return static_cast<int>(i);
    return -1;
}

int GasNetwork::edge_index(std::string_view name) const
{
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].name == name)
            return static_cast<int>(i);
    return -1;
}

int GasNetwork::valve_count() const
{
    int n = 0;
    for (const auto& e : edges)
        n += e.kind == EdgeKind::valve;
    return n;
}

namespace {

// Splits "element.field" and resolves it to a parameter reference.
double& binding_target(GasNetwork& net, const std::string& target)
{
    const auto dot = target.rfind('.');
    if (dot == std::string::npos)
        throw ConfigError("binding target '" + target + "' must be element.field");
    const std::string name = target.substr(0, dot);
    const std::string field = target.substr(dot + 1);
    if (const int n = net.node_index(name); n >= 0) {
        auto& node = net.nodes[n];
        if (field == "pressure" && node.kind == GasNetwork::NodeKind::supply)
            return node.pressure;
        if (field == "demand" && node.kind == GasNetwork::NodeKind::demand)
            return node.demand;
    }
    if (const int e = net.edge_index(name); e >= 0) {
        auto& edge = net.edges[e];
        if (edge.kind == GasNetwork::EdgeKind::pipe && field == "length")
            return edge.length;
        if (edge.kind == GasNetwork::EdgeKind::pipe && field == "friction")
            return edge.friction;
        if (edge.kind == GasNetwork::EdgeKind::valve && field == "p_set")
            return edge.p_set;
    }
    throw ConfigError("binding target '" + target + "' does not name a bindable parameter");
}

} // namespace

void GasNetwork::validate() const
{
    int supplies = 0;
    std::set<std::string> names;
    for (const auto& n : nodes) {
        if (!names.insert(n.name).second)
            throw ConfigError("duplicate element name '" + n.name + "'");
        supplies += n.kind == NodeKind::supply;
        if (n.kind == NodeKind::supply && !(n.pressure > 0.0))
            throw ConfigError("supply '" + n.name + "' needs a positive pressure");
    }
    if (supplies != 1)
        throw ConfigError("network needs exactly one supply node");
    for (const auto& e : edges) {
        if (!names.insert(e.name).second)
            throw ConfigError("duplicate element name '" + e.name + "'");
        if (e.from < 0 || e.to < 0 || e.from == e.to)
            throw ConfigError("edge '" + e.name + "' has invalid end nodes");
        if (e.kind == EdgeKind::pipe && !(e.length > 0.0 && e.friction > 0.0))
            throw ConfigError("pipe '" + e.name + "' needs positive length and friction");
        if (e.kind == EdgeKind::valve && !(e.p_set > 0.0))
            throw ConfigError("valve '" + e.name + "' needs a positive p_set");
    }
    if (valve_count() > 63)
        throw ConfigError("at most 63 valves are supported");

    // Connectivity by union-find.
    std::vector<int> parent(nodes.size());
    for (std::size_t i = 0; i < parent.size(); ++i)
        parent[i] = static_cast<int>(i);
    std::function<int(int)> root = [&](int i) { return parent[i] == i ? i : parent[i] = root(parent[i]); };
    for (const auto& e : edges)
        parent[root(e.from)] = root(e.to);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (root(static_cast<int>(i)) != root(0))
            throw ConfigError("network graph is not connected");

    if (node_index(qoi_node) < 0)
        throw ConfigError("QoI node '" + qoi_node + "' is not defined");
    std::set<int> indices;
    GasNetwork copy = *this;
    for (const auto& b : bindings) {
        if (!indices.insert(b.index).second)
            throw ConfigError("coordinate " + std::to_string(b.index) + " is bound twice");
        if (!(b.low <= b.high))
            throw ConfigError("binding '" + b.target + "' has low > high");
        binding_target(copy, b.target);
    }
    for (int i = 0; i < static_cast<int>(bindings.size()); ++i)
        if (!indices.count(i))
            throw ConfigError("binding indices must be 0..d-1 without gaps");
}

namespace {

double parse_real(std::string_view s, int line)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ParseError("line " + std::to_string(line) + ": '" + std::string(s) + "' is not a decimal number");
    return v;
}

int parse_int(std::string_view s, int line)
{
    int v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end)
        throw ParseError("line " + std::to_string(line) + ": '" + std::string(s) + "' is not an integer");
    return v;
}

} // namespace

GasNetwork parse_gas_network(std::istream& in)
{
    GasNetwork net;
    struct PendingEdge {
        GasNetwork::Edge edge;
        std::string from, to;
        int line;
    };
    std::vector<PendingEdge> pending;
    bool have_qoi = false;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream ls(raw);
        std::string kind;
        if (!(ls >> kind))
            continue;

        std::map<std::string, std::string> kv;
        std::string tok;
        while (ls >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ParseError("line " + std::to_string(line) + ": expected key=value, got '" + tok + "'");
            if (!kv.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second)
                throw ParseError("line " + std::to_string(line) + ": repeated key '" + tok.substr(0, eq) + "'");
        }
        auto require = [&](const std::set<std::string>& required, const std::set<std::string>& optional) {
            for (const auto& [k, v] : kv)
                if (!required.count(k) && !optional.count(k))
                    throw ParseError("line " + std::to_string(line) + ": unknown key '" + k + "' for " + kind);
            for (const auto& k : required)
                if (!kv.count(k))
                    throw ParseError("line " + std::to_string(line) + ": missing key '" + k + "' for " + kind);
        };

        if (kind == "node") {
            GasNetwork::Node n;
            const auto it = kv.find("kind");
            const std::string nk = it == kv.end() ? "" : it->second;
            if (nk == "supply") {
                require({"name", "kind", "pressure"}, {});
                n.kind = GasNetwork::NodeKind::supply;
                n.pressure = parse_real(kv["pressure"], line);
            } else if (nk == "demand") {
                require({"name", "kind", "demand"}, {});
                n.kind = GasNetwork::NodeKind::demand;
                n.demand = parse_real(kv["demand"], line);
            } else if (nk == "junction") {
                require({"name", "kind"}, {});
            } else {
                throw ParseError("line " + std::to_string(line) + ": node kind must be supply, demand or junction");
            }
            n.name = kv["name"];
            net.nodes.push_back(std::move(n));
        } else if (kind == "pipe") {
            require({"name", "from", "to", "length", "friction"}, {});
            GasNetwork::Edge e;
            e.name = kv["name"];
            e.kind = GasNetwork::EdgeKind::pipe;
            e.length = parse_real(kv["length"], line);
            e.friction = parse_real(kv["friction"], line);
            pending.push_back({std::move(e), kv["from"], kv["to"], line});
        } else if (kind == "valve") {
            require({"name", "from", "to", "p_set"}, {});
            GasNetwork::Edge e;
            e.name = kv["name"];
            e.kind = GasNetwork::EdgeKind::valve;
            e.p_set = parse_real(kv["p_set"], line);
            pending.push_back({std::move(e), kv["from"], kv["to"], line});
        } else if (kind == "bind") {
            require({"index", "target", "low", "high"}, {});
            net.bindings.push_back({parse_int(kv["index"], line), kv["target"], parse_real(kv["low"], line),
                                    parse_real(kv["high"], line)});
        } else if (kind == "qoi") {
            require({"node"}, {});
            if (have_qoi)
                throw ParseError("line " + std::to_string(line) + ": QoI defined twice");
            net.qoi_node = kv["node"];
            have_qoi = true;
        } else {
            throw ParseError("line " + std::to_string(line) + ": unknown record '" + kind + "'");
        }
    }
    for (auto& p : pending) {
        p.edge.from = net.node_index(p.from);
        p.edge.to = net.node_index(p.to);
        if (p.edge.from < 0 || p.edge.to < 0)
            throw ParseError("line " + std::to_string(p.line) + ": edge refers to an undefined node");
        net.edges.push_back(std::move(p.edge));
    }
    if (!have_qoi)
        throw ParseError("network file has no qoi record");
    net.validate();
    return net;
}

GasNetwork load_gas_network(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open network file '" + path + "'");
    return parse_gas_network(in);
}

namespace {

constexpr int newton_max_iterations = 200;
constexpr int newton_max_halvings = 30;
constexpr double newton_tol = 1e-10;
// Lower bound on |q| in the pipe Jacobian so that zero-flow states stay
// solvable.
constexpr double flow_regularization = 1e-8;

struct System {
    const GasNetwork& net;
    int supply = -1;
    std::vector<int> unknown_of_node; // -1 for the supply
    int n_nodes = 0;
    double supply_pi = 0.0;

    int size() const { return n_nodes + static_cast<int>(net.edges.size()); }

    double pi(const Eigen::VectorXd& u, int node) const
    {
        return node == supply ? supply_pi : u(unknown_of_node[node]);
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& u) const
    {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(size());
        for (std::size_t k = 0; k < net.nodes.size(); ++k)
            if (static_cast<int>(k) != supply)
                r(unknown_of_node[k]) = -net.nodes[k].demand;
        for (std::size_t e = 0; e < net.edges.size(); ++e) {
            const auto& edge = net.edges[e];
            const double q = u(n_nodes + static_cast<int>(e));
            if (edge.from != supply)
                r(unknown_of_node[edge.from]) -= q;
            if (edge.to != supply)
                r(unknown_of_node[edge.to]) += q;
            const double pin = pi(u, edge.from);
            const double pout = pi(u, edge.to);
            double& re = r(n_nodes + static_cast<int>(e));
            if (edge.kind == GasNetwork::EdgeKind::pipe)
                re = pin - pout - edge.friction * edge.length * q * std::abs(q);
            else
                re = pout - std::min(pin, edge.p_set * edge.p_set);
        }
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const
    {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(size(), size());
        for (std::size_t e = 0; e < net.edges.size(); ++e) {
            const auto& edge = net.edges[e];
            const int qc = n_nodes + static_cast<int>(e);
            if (edge.from != supply)
                j(unknown_of_node[edge.from], qc) -= 1.0;
            if (edge.to != supply)
                j(unknown_of_node[edge.to], qc) += 1.0;
            const int row = qc;
            if (edge.kind == GasNetwork::EdgeKind::pipe) {
                const double q = u(qc);
                j(row, qc) = -2.0 * edge.friction * edge.length * std::max(std::abs(q), flow_regularization);
                if (edge.from != supply)
                    j(row, unknown_of_node[edge.from]) += 1.0;
                if (edge.to != supply)
                    j(row, unknown_of_node[edge.to]) -= 1.0;
            } else {
                if (edge.to != supply)
                    j(row, unknown_of_node[edge.to]) += 1.0;
                const bool active = pi(u, edge.from) > edge.p_set * edge.p_set;
                if (!active && edge.from != supply)
                    j(row, unknown_of_node[edge.from]) -= 1.0;
            }
        }
        return j;
    }
};

void apply_bindings(GasNetwork& net, PointView x)
{
    if (static_cast<int>(x.size()) != net.dimension())
        throw std::invalid_argument("parameter dimension does not match the network bindings");
    for (const auto& b : net.bindings)
        binding_target(net, b.target) = b.low + x[b.index] * (b.high - b.low);
}

} // namespace

GasSolution solve_gas_network(const GasNetwork& base, PointView x)
{
    GasNetwork net = base;
    apply_bindings(net, x);

    System sys{net, -1, {}, 0, 0.0};
    sys.unknown_of_node.assign(net.nodes.size(), -1);
    for (std::size_t k = 0; k < net.nodes.size(); ++k) {
        if (net.nodes[k].kind == GasNetwork::NodeKind::supply) {
            sys.supply = static_cast<int>(k);
            sys.supply_pi = net.nodes[k].pressure * net.nodes[k].pressure;
        } else {
            sys.unknown_of_node[k] = sys.n_nodes++;
        }
    }
    if (sys.supply < 0)
        throw ConfigError("network has no supply node");

    Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.size());
    u.head(sys.n_nodes).setConstant(sys.supply_pi);

    Eigen::VectorXd r = sys.residual(u);
    double norm = r.lpNorm<Eigen::Infinity>();
    int it = 0;
    while (norm > newton_tol) {
        if (++it > newton_max_iterations)
            throw SolveFailure("gas network Newton iteration did not converge");
        const Eigen::VectorXd step = sys.jacobian(u).fullPivLu().solve(-r);
        if (!step.allFinite())
            throw SolveFailure("singular gas network Jacobian");
        double t = 1.0;
        Eigen::VectorXd trial;
        Eigen::VectorXd rt;
        double nt = 0.0;
        int halvings = 0;
        for (;;) {
            trial = u + t * step;
            rt = sys.residual(trial);
            nt = rt.lpNorm<Eigen::Infinity>();
            if (nt < norm || halvings == newton_max_halvings)
                break;
            t *= 0.5;
            ++halvings;
        }
        u = std::move(trial);
        r = std::move(rt);
        norm = nt;
    }

    GasSolution sol;
    sol.iterations = it;
    sol.pressure.resize(net.nodes.size());
    for (std::size_t k = 0; k < net.nodes.size(); ++k) {
        const double p2 = sys.pi(u, static_cast<int>(k));
        if (!(p2 > 0.0))
            throw InfeasibleNetwork("non-positive squared pressure at node '" + net.nodes[k].name + "'");
        sol.pressure[k] = std::sqrt(p2);
    }
    sol.flow.assign(u.data() + sys.n_nodes, u.data() + sys.size());
    int bit = 0;
    for (const auto& e : net.edges) {
        if (e.kind != GasNetwork::EdgeKind::valve)
            continue;
        if (sys.pi(u, e.from) > e.p_set * e.p_set)
            sol.active_valves |= std::uint64_t{1} << bit;
        ++bit;
    }
    sol.qoi = sol.pressure[net.node_index(net.qoi_node)];
    return sol;
}

GasNetworkOracle::GasNetworkOracle(GasNetwork net)
    : Oracle(net.dimension())
    , net_(std::move(net))
{
    net_.validate();
    if (net_.dimension() < 1)
        throw ConfigError("network has no parameter bindings");
}

Evaluation GasNetworkOracle::do_evaluate(PointView x) const
{
    const auto sol = solve_gas_network(net_, x);
    return {sol.qoi, static_cast<RegionLabel>(sol.active_valves)};
}

} // namespace ssc
