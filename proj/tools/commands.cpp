#include "commands.hpp"

#include "ssc/csv.hpp"
#include "ssc/errors.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace ssc::cli {

namespace {

// Error checkpoints during converge grow by this factor.
constexpr double checkpoint_growth = 1.25;
// Stream tags for direct-oracle reference and comparison draws.
constexpr std::uint64_t reference_stream = 0x726566;
constexpr std::uint64_t compare_stream = 0x636d70;

BuildConfig make_config(const BuildFlags& f, int p, const std::string& mode, std::uint64_t seed)
{
    BuildConfig c;
    c.p_max = p;
    c.mode = parse_mode(mode);
    c.lec = parse_lec(f.lec);
    c.estimator = parse_estimator(f.estimator);
    c.m_ref = parse_batch_size(f.mref);
    c.budget = f.budget;
    c.tolerance = f.tolerance;
    c.seed = seed;
    c.n_mc_local = f.n_mc_local;
    return c;
}

void warn_volume_stop(const BuildConfig& c)
{
    if (c.tolerance > 0.0 && c.estimator == EstimatorPolicy::volume_order)
        std::cerr << "warning: vol-order estimates do not track the error; "
                     "stopping on --tol with this estimator is unreliable\n";
}

std::filesystem::path prepare_out(const std::string& dir)
{
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path);
    out << content;
    if (!out)
        throw Error("failed to write '" + path.string() + "'");
}

} // namespace

int cmd_build(const BuildFlags& f)
{
    if (f.p.size() != 1 || f.mode.size() != 1)
        throw ConfigError("build takes a single --p and --mode");
    const BuildConfig config = make_config(f, f.p.front(), f.mode.front(), f.seed);
    const auto oracle = make_oracle(f.oracle);
    config.validate(oracle->dimension());
    warn_volume_stop(config);

    const SurrogateModel model = build(*oracle, config);

    const auto dir = prepare_out(f.out);
    write_file(dir / "build_log.csv", build_log_csv(model.log()));
    save_model((dir / "model.ssc").string(), f.oracle, model);
    std::cout << "n=" << model.samples().size() << " simplices=" << model.triangulation().simplex_count()
              << " aggregate=" << format_real(model.aggregate()) << '\n';
    return exit_ok;
}

int cmd_converge(const BuildFlags& f)
{
    if (f.repeat < 1)
        throw ConfigError("--repeat must be at least 1");
    if (f.n_mc_error < 1)
        throw ConfigError("--nmc-error must be positive");
    const auto oracle = make_oracle(f.oracle);
    std::vector<BuildConfig> configs;
    for (int p : f.p)
        for (const auto& mode : f.mode)
            for (int r = 0; r < f.repeat; ++r) {
                configs.push_back(make_config(f, p, mode, f.seed + static_cast<std::uint64_t>(r)));
                configs.back().validate(oracle->dimension());
            }
    if (!configs.empty())
        warn_volume_stop(configs.front());

    std::string rows = "n,l1_error,aggregate_estimate,p,mode,estimator,seed\n";
    std::string slopes = "p,mode,estimator,seed,slope\n";
    for (const auto& config : configs) {
        std::vector<double> ns;
        std::vector<double> errors;
        double next = 0.0;
        auto record = [&](const SurrogateModel& m) {
            const double n = static_cast<double>(m.samples().size());
            const bool last = m.samples().size() >= config.budget ||
                              (config.tolerance > 0.0 && m.aggregate() <= config.tolerance);
            if (n < next && !last)
                return;
            const double err = l1_error(m, *oracle, f.n_mc_error, config.seed);
            ns.push_back(n);
            errors.push_back(err);
            rows += std::to_string(m.samples().size()) + ',' + format_real(err) + ',' +
                    format_real(m.aggregate()) + ',' + std::to_string(config.p_max) + ',' +
                    std::string(to_string(config.mode)) + ',' + std::string(to_string(config.estimator)) + ',' +
                    std::to_string(config.seed) + '\n';
            next = n * checkpoint_growth;
        };
        const SurrogateModel model = build(*oracle, config, record);
        if (ns.empty() || ns.back() != static_cast<double>(model.samples().size())) {
            next = 0.0;
            record(model);
        }
        std::string slope = "nan";
        try {
            slope = format_real(fitted_slope(ns, errors));
        } catch (const std::invalid_argument&) {
            std::cerr << "warning: too few checkpoints for a slope (p=" << config.p_max
                      << ", seed=" << config.seed << ")\n";
        }
        slopes += std::to_string(config.p_max) + ',' + std::string(to_string(config.mode)) + ',' +
                  std::string(to_string(config.estimator)) + ',' + std::to_string(config.seed) + ',' + slope + '\n';
        std::cout << "p=" << config.p_max << " mode=" << to_string(config.mode) << " seed=" << config.seed
                  << " n=" << model.samples().size() << " error=" << format_real(errors.back())
                  << " slope=" << slope << '\n';
    }

    const auto dir = prepare_out(f.out);
    write_file(dir / "converge.csv", rows);
    write_file(dir / "slopes.csv", slopes);
    return exit_ok;
}

int cmd_stats(const StatsFlags& f)
{
    QuadratureSpec q;
    if (f.quad == "mc")
        q.kind = QuadratureSpec::Kind::monte_carlo;
    else if (f.quad == "qmc")
        q.kind = QuadratureSpec::Kind::halton;
    else
        throw ConfigError("--quad must be mc or qmc");
    q.n = f.quad_n;
    q.seed = f.quad_seed;
    if (q.n < 1 || f.cdf_mc < 1 || f.cdf_nodes < 2 || f.ref_n < 1)
        throw ConfigError("quadrature and CDF sizes must be positive (at least two CDF nodes)");
    for (const auto& c : f.compare)
        if (c != "mc" && c != "qmc")
            throw ConfigError("--compare accepts mc and qmc");

    const StoredModel stored = load_model(f.model);
    const SurrogateModel& model = stored.model;
    const auto model_n = std::to_string(model.samples().size());
    std::unique_ptr<Oracle> oracle;
    if (!f.compare.empty())
        oracle = make_oracle(stored.oracle);

    const int d = model.dimension();
    const Moments m = moments(d, [&](PointView x) { return model(x); }, q);
    const std::string tail = ',' + to_string(q.kind) + ',' + std::to_string(q.n) + ',' + model_n + '\n';
    std::string stats = "statistic,value,quad_kind,quad_n,model_n\n";
    stats += "expectation," + format_real(m.mean) + tail;
    stats += "variance," + format_real(m.variance) + tail;
    stats += "standard_error," + format_real(m.standard_error) + tail;

    Rng rng = derive_rng(f.quad_seed, {0x636466});
    const CdfCurve curve = cdf(model, f.cdf_nodes, f.cdf_mc, rng);
    std::string cdf_rows = "y,probability\n";
    for (std::size_t i = 0; i < curve.nodes.size(); ++i)
        cdf_rows += format_real(curve.nodes[i]) + ',' + format_real(curve.probabilities[i]) + '\n';

    std::string compare;
    if (oracle) {
        auto direct = [&](PointView x) { return oracle->evaluate(x).value; };
        const double reference =
            moments(d, direct, {QuadratureSpec::Kind::monte_carlo, f.ref_n, f.quad_seed ^ reference_stream}).mean;
        const std::size_t calls = model.samples().size();
        compare = "method,oracle_calls,expectation,reference,abs_error\n";
        auto row = [&](const std::string& name, double e) {
            compare += name + ',' + std::to_string(calls) + ',' + format_real(e) + ',' + format_real(reference) +
                       ',' + format_real(std::abs(e - reference)) + '\n';
        };
        row("ssc", m.mean);
        for (const auto& c : f.compare) {
            QuadratureSpec qc{c == "mc" ? QuadratureSpec::Kind::monte_carlo : QuadratureSpec::Kind::halton, calls,
                              model.config().seed ^ compare_stream};
            row(c, moments(d, direct, qc).mean);
        }
    }

    const auto dir = prepare_out(f.out);
    write_file(dir / "stats.csv", stats);
    write_file(dir / "cdf.csv", cdf_rows);
    if (!compare.empty())
        write_file(dir / "compare.csv", compare);
    std::cout << stats << compare;
    return exit_ok;
}

} // namespace ssc::cli
