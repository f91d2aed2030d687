#pragma once

#include "ssc/adaptive.hpp"
#include "ssc/model_io.hpp"
#include "ssc/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ssc::cli {

/// Exit codes of the command-line tool.
enum ExitCode { exit_ok = 0, exit_config = 1, exit_numerical = 2 };

/// Flags shared by build and converge. Strings are parsed when the command
/// runs so that config-file values go through the same validation.
struct BuildFlags {
    OracleSpec oracle;
    std::vector<int> p{1};
    std::vector<std::string> mode{"improved"};
    std::string lec = "off";
    std::string estimator = "mc-l1";
    std::string mref = "1";
    std::size_t budget = 100;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    int n_mc_local = 200;
    std::size_t n_mc_error = 1000000;
    int repeat = 1;
    std::string out = ".";
};

struct StatsFlags {
    std::string model;
    std::string quad = "mc";
    std::size_t quad_n = 1000000;
    std::uint64_t quad_seed = 0;
    std::size_t cdf_nodes = 101;
    std::size_t cdf_mc = 100000;
    std::vector<std::string> compare;
    std::size_t ref_n = 1000000;
    std::string out = ".";
};

/// Builds one model; writes build_log.csv and model.ssc.
int cmd_build(const BuildFlags& flags);

/// Runs one adaptive build per (p, mode, seed) and records the l1 error at
/// geometrically spaced sample counts; writes converge.csv and slopes.csv.
int cmd_converge(const BuildFlags& flags);

/// Expectation, variance and CDF of a stored model; writes stats.csv,
/// cdf.csv and, with comparisons requested, compare.csv.
int cmd_stats(const StatsFlags& flags);

} // namespace ssc::cli
