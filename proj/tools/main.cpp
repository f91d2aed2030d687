#include "commands.hpp"

#include "ssc/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_build_flags(CLI::App& cmd, ssc::cli::BuildFlags& f, bool multi)
{
    cmd.add_option("--oracle", f.oracle.name, "clipped-sine, smooth-sine, fake-kink or gas-network")
        ->capture_default_str();
    cmd.add_option("--network", f.oracle.network, "gas network file (with --oracle gas-network)")
        ->check(CLI::ExistingFile);
    cmd.add_option("--threshold", f.oracle.threshold, "clip/label threshold of the test functions")
        ->capture_default_str();
    cmd.add_option("--d", f.oracle.d, "dimension of the test functions")->capture_default_str();
    if (multi) {
        cmd.add_option("--p", f.p, "maximal polynomial degrees")->capture_default_str();
        cmd.add_option("--mode", f.mode, "original and/or improved")->capture_default_str();
    } else {
        cmd.add_option("--p", f.p, "maximal polynomial degree")->expected(1)->capture_default_str();
        cmd.add_option("--mode", f.mode, "original or improved")->expected(1)->capture_default_str();
    }
    cmd.add_option("--lec", f.lec, "off, strict or delta")->capture_default_str();
    cmd.add_option("--estimator", f.estimator, "last-point, mc-l1 or vol-order")->capture_default_str();
    cmd.add_option("--mref", f.mref, "simplices refined per step: a count or a fraction such as 0.3n")
        ->capture_default_str();
    cmd.add_option("--budget", f.budget, "maximal number of oracle calls")->capture_default_str();
    cmd.add_option("--tol", f.tolerance, "stop when the global estimate reaches this value (0: off)")
        ->capture_default_str();
    cmd.add_option("--seed", f.seed, "random seed")->capture_default_str();
    cmd.add_option("--nmc-local", f.n_mc_local, "draws per simplex for mc-l1")->capture_default_str();
    cmd.add_option("--out", f.out, "output directory")->capture_default_str();
    if (multi) {
        cmd.add_option("--nmc-error", f.n_mc_error, "points for the l1 error evaluation")->capture_default_str();
        cmd.add_option("--repeat", f.repeat, "runs per configuration with seeds seed, seed+1, ...")
            ->capture_default_str();
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Adaptive simplex stochastic collocation"};
    app.set_config("--config", "", "TOML/INI file with flag defaults; command-line flags win");
    app.require_subcommand(1);

    ssc::cli::BuildFlags build_flags;
    ssc::cli::BuildFlags converge_flags;
    ssc::cli::StatsFlags stats_flags;

    auto* build = app.add_subcommand("build", "build a surrogate and write the build log and model file");
    add_build_flags(*build, build_flags, false);

    auto* converge = app.add_subcommand("converge", "l1 error against sample count for one or more builds");
    add_build_flags(*converge, converge_flags, true);

    auto* stats = app.add_subcommand("stats", "expectation, variance and CDF of a stored model");
    stats->add_option("--model", stats_flags.model, "model file written by build")->required();
    stats->add_option("--quad", stats_flags.quad, "mc or qmc")->capture_default_str();
    stats->add_option("--quad-n", stats_flags.quad_n, "quadrature nodes")->capture_default_str();
    stats->add_option("--seed", stats_flags.quad_seed, "seed of the Monte Carlo quadrature")->capture_default_str();
    stats->add_option("--cdf-nodes", stats_flags.cdf_nodes, "CDF nodes")->capture_default_str();
    stats->add_option("--cdf-mc", stats_flags.cdf_mc, "draws for the CDF")->capture_default_str();
    stats->add_option("--compare", stats_flags.compare, "direct-oracle estimators at the model's budget: mc, qmc")
        ->delimiter(',');
    stats->add_option("--ref-n", stats_flags.ref_n, "direct-oracle draws for the reference expectation")
        ->capture_default_str();
    stats->add_option("--out", stats_flags.out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ssc::cli::exit_config;
    }

    try {
        if (*build)
            return ssc::cli::cmd_build(build_flags);
        if (*converge)
            return ssc::cli::cmd_converge(converge_flags);
        return ssc::cli::cmd_stats(stats_flags);
    } catch (const ssc::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ssc::cli::exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ssc::cli::exit_numerical;
    }
}
