#pragma once

#include "ssc/estimators.hpp"
#include "ssc/oracle.hpp"
#include "ssc/surrogate.hpp"
#include "ssc/triangulation.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ssc {

/// Number of simplices refined per step: an absolute count or a fraction of
/// the current sample count.
struct BatchSize {
    double value = 1.0;
    bool fraction = false;

    /// Count for a model with n samples; at least 1.
    std::size_t resolve(std::size_t n) const;
};

/// Parses "4" (absolute) or "0.3n" (fraction of n).
BatchSize parse_batch_size(std::string_view s);
std::string to_string(const BatchSize& b);

struct BuildConfig {
    int p_max = 1;
    Mode mode = Mode::improved;
    LecMode lec = LecMode::off;
    EstimatorPolicy estimator = EstimatorPolicy::mc_l1;
    BatchSize m_ref;
    std::size_t budget = 100;
    /// Stop once the global aggregate is at or below this value (0: never).
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    int n_mc_local = 200;

    /// Throws ConfigError when inconsistent with dimension d.
    void validate(int d) const;
};

struct BuildLogEntry {
    int step = 0;
    std::size_t n_samples = 0;
    std::size_t n_simplices = 0;
    double aggregate = 0.0;
    double wall_time_s = 0.0;
};

/// Piecewise surrogate over a Delaunay triangulation of the samples.
///
/// Sample i is triangulation vertex i. Evaluation is not thread-safe: it
/// maintains a lazily rebuilt point-location grid.
class SurrogateModel {
public:
    /// Evaluates the 2^d corners and the centre and fits all simplices.
    static SurrogateModel initialize(const Oracle& oracle, const BuildConfig& config);

    /// Rebuilds a model from stored samples (corners and centre first) and
    /// the parent predictions recorded when they were added.
    static SurrogateModel from_samples(const BuildConfig& config, const SampleSet& samples,
                                       std::span<const double> parent_predictions);

    int dimension() const { return samples_.dimension(); }
    const BuildConfig& config() const { return config_; }
    const SampleSet& samples() const { return samples_; }
    const Triangulation& triangulation() const { return tri_; }
    const EstimatorState& estimates() const { return estimates_; }
    const std::vector<BuildLogEntry>& log() const { return log_; }
    const LocalSurrogate& surrogate(int simplex) const;
    double aggregate() const { return estimates_.aggregate(); }
    /// Surrogate prediction at sample i just before it was added.
    double parent_prediction(int i) const { return predictions_[i]; }
    std::span<const double> parent_predictions() const { return predictions_; }
    double hierarchical_error(int i) const;
    int step() const { return step_; }

    /// New point for refining `simplex`: middle third of the longest edge
    /// for boundary simplices, a uniform draw in the subsimplex otherwise.
    /// Avoids the existing samples and `reserved`. Throws PlacementFailure
    /// after 100 coincident draws.
    Point place_new_point(int simplex, Rng& rng, std::span<const Point> reserved = {}) const;

    /// True if some facet of the simplex lies on the cube boundary.
    bool is_boundary_simplex(int simplex) const;

    /// One refinement step. Returns the number of samples added.
    /// Throws BudgetExhausted if no budget is left.
    std::size_t refine_step(const Oracle& oracle);

    double operator()(PointView x) const;
    /// Containing simplex (ties to the smallest id).
    int locate(PointView x) const;

private:
    SurrogateModel(const BuildConfig& config, int d);

    void append_sample(PointView x, const Evaluation& e, double prediction);
    void refit(const std::vector<int>& ids);
    double estimate(int id, const LocalSurrogate& local) const;
    void record_log();
    void build_locator() const;

    BuildConfig config_;
    SampleSet samples_;
    Triangulation tri_;
    std::vector<std::optional<LocalSurrogate>> surrogates_;
    EstimatorState estimates_;
    std::vector<double> predictions_;
    std::set<int> unrefinable_;
    std::vector<BuildLogEntry> log_;
    int step_ = 0;
    std::chrono::steady_clock::time_point start_;

    struct Locator {
        std::uint64_t generation = ~std::uint64_t{0};
        int cells = 0;
        std::vector<int> hints;
    };
    mutable Locator locator_;
};

using BuildObserver = std::function<void(const SurrogateModel&)>;

SurrogateModel initialize(const Oracle& oracle, const BuildConfig& config);
std::size_t refine_step(SurrogateModel& model, const Oracle& oracle);

/// Refines until the budget is spent or the aggregate reaches the tolerance.
/// The observer runs after every step.
SurrogateModel build(const Oracle& oracle, const BuildConfig& config, const BuildObserver& observer = {});

double evaluate_model(const SurrogateModel& model, PointView x);

/// Build log as CSV (step, n_samples, n_simplices, aggregate_estimate, wall_time_s).
std::string build_log_csv(const std::vector<BuildLogEntry>& log);

} // namespace ssc
