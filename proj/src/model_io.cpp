#include "ssc/model_io.hpp"

#include "ssc/csv.hpp"
#include "ssc/errors.hpp"
#include "ssc/testbed.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace ssc {

namespace {

constexpr const char* magic = "SSCMODEL1";

double to_real(const std::string& s, const std::string& what)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end)
        throw ParseError("invalid number '" + s + "' for " + what);
    return v;
}

long long to_integer(const std::string& s, const std::string& what)
{
    long long v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end)
        throw ParseError("invalid integer '" + s + "' for " + what);
    return v;
}

} // namespace

std::unique_ptr<Oracle> make_oracle(const OracleSpec& spec)
{
    if (spec.name == "gas-network") {
        if (spec.network.empty())
            throw ConfigError("the gas-network oracle needs a network file");
        return std::make_unique<GasNetworkOracle>(load_gas_network(spec.network));
    }
    if (!spec.network.empty())
        throw ConfigError("a network file is only valid with the gas-network oracle");
    return std::make_unique<TestOracle>(parse_test_function(spec.name), spec.d, spec.threshold);
}

void save_model(std::ostream& out, const OracleSpec& oracle, const SurrogateModel& model)
{
    const auto& c = model.config();
    const auto& s = model.samples();
    const int d = model.dimension();
    out << magic << '\n';
    out << "oracle " << oracle.name << '\n';
    if (!oracle.network.empty())
        out << "network " << oracle.network << '\n';
    out << "threshold " << format_real(oracle.threshold) << '\n';
    out << "d " << d << '\n';
    out << "p_max " << c.p_max << '\n';
    out << "mode " << to_string(c.mode) << '\n';
    out << "lec " << to_string(c.lec) << '\n';
    out << "estimator " << to_string(c.estimator) << '\n';
    out << "mref " << to_string(c.m_ref) << '\n';
    out << "budget " << c.budget << '\n';
    out << "tolerance " << format_real(c.tolerance) << '\n';
    out << "seed " << c.seed << '\n';
    out << "n_mc_local " << c.n_mc_local << '\n';
    out << "samples " << s.size() << '\n';
    for (std::size_t i = 0; i < s.size(); ++i) {
        const int id = static_cast<int>(i);
        for (double x : s.point(id))
            out << format_real(x) << ' ';
        out << format_real(s.value(id)) << ' ' << s.label(id) << ' ' << format_real(model.parent_prediction(id))
            << '\n';
    }
    if (!out)
        throw Error("failed to write model");
}

void save_model(const std::string& path, const OracleSpec& oracle, const SurrogateModel& model)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    save_model(out, oracle, model);
}

StoredModel load_model(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != magic)
        throw ParseError("not a model file (missing " + std::string(magic) + " header)");

    std::map<std::string, std::string> header;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        std::string value;
        if (!(ls >> key))
            continue;
        std::getline(ls >> std::ws, value);
        if (!header.emplace(key, value).second)
            throw ParseError("repeated header key '" + key + "'");
        if (key == "samples")
            break;
    }
    static const char* known[] = {"oracle", "network", "threshold", "d", "p_max", "mode", "lec", "estimator",
                                  "mref", "budget", "tolerance", "seed", "n_mc_local", "samples"};
    for (const auto& [k, v] : header)
        if (std::find(std::begin(known), std::end(known), k) == std::end(known))
            throw ParseError("unknown header key '" + k + "'");
    auto get = [&](const std::string& k) -> const std::string& {
        const auto it = header.find(k);
        if (it == header.end())
            throw ParseError("missing header key '" + k + "'");
        return it->second;
    };

    OracleSpec spec;
    spec.name = get("oracle");
    if (header.count("network"))
        spec.network = header["network"];
    spec.threshold = to_real(get("threshold"), "threshold");
    spec.d = static_cast<int>(to_integer(get("d"), "d"));

    BuildConfig c;
    c.p_max = static_cast<int>(to_integer(get("p_max"), "p_max"));
    c.mode = parse_mode(get("mode"));
    c.lec = parse_lec(get("lec"));
    c.estimator = parse_estimator(get("estimator"));
    c.m_ref = parse_batch_size(get("mref"));
    c.budget = static_cast<std::size_t>(to_integer(get("budget"), "budget"));
    c.tolerance = to_real(get("tolerance"), "tolerance");
    c.seed = static_cast<std::uint64_t>(to_integer(get("seed"), "seed"));
    c.n_mc_local = static_cast<int>(to_integer(get("n_mc_local"), "n_mc_local"));

    const auto n = to_integer(get("samples"), "samples");
    if (n < 0 || spec.d < 1 || spec.d > Triangulation::max_dimension)
        throw ParseError("invalid sample count or dimension");
    SampleSet samples(spec.d);
    std::vector<double> predictions;
    Point x(spec.d);
    for (long long i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw ParseError("model file ends after " + std::to_string(i) + " samples");
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> toks;
        while (ls >> tok)
            toks.push_back(tok);
        if (static_cast<int>(toks.size()) != spec.d + 3)
            throw ParseError("sample line " + std::to_string(i) + " has the wrong number of fields");
        for (int k = 0; k < spec.d; ++k)
            x[k] = to_real(toks[k], "coordinate");
        const double value = to_real(toks[spec.d], "value");
        const auto label = static_cast<RegionLabel>(to_integer(toks[spec.d + 1], "label"));
        predictions.push_back(to_real(toks[spec.d + 2], "prediction"));
        samples.add(x, value, label);
    }
    return {spec, SurrogateModel::from_samples(c, samples, predictions)};
}

StoredModel load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open model file '" + path + "'");
    return load_model(in);
}

} // namespace ssc
