#pragma once

#include "ssc/adaptive.hpp"
#include "ssc/oracle.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ssc {

/// Quadrature over the uniform density on [0,1]^d.
struct QuadratureSpec {
    enum class Kind { monte_carlo, halton };
    Kind kind = Kind::monte_carlo;
    std::size_t n = 100000;
    std::uint64_t seed = 0;
};

std::string to_string(QuadratureSpec::Kind k);

/// First n Halton points in d <= 6 dimensions (bases: first d primes,
/// indices from 1).
std::vector<Point> halton_sequence(int d, std::size_t n);

/// Radical inverse of i in the given base.
double radical_inverse(std::uint64_t i, unsigned base);

/// Calls f at every quadrature node.
void for_each_node(int d, const QuadratureSpec& q, const std::function<void(PointView)>& f);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    /// Standard error of the mean (meaningful for Monte Carlo only).
    double standard_error = 0.0;
};

/// Mean and variance of g over one shared node set. Variance is clamped to 0
/// if it is negative within 1e-12 slack.
Moments moments(int d, const std::function<double(PointView)>& g, const QuadratureSpec& q);

double expectation(const SurrogateModel& model, const QuadratureSpec& q);
double variance(const SurrogateModel& model, const QuadratureSpec& q);

/// Piecewise-linear CDF on equidistant nodes over [min g, max g] of the draws.
struct CdfCurve {
    std::vector<double> nodes;
    std::vector<double> probabilities;

    /// Interpolated probability, clamped to [0,1].
    double operator()(double y) const;
};

/// Fractions of n_mc uniform draws with g <= y_i. A value range below 1e-12
/// yields a step at the constant value.
CdfCurve cdf(int d, const std::function<double(PointView)>& g, std::size_t n_nodes, std::size_t n_mc, Rng& rng);
CdfCurve cdf(const SurrogateModel& model, std::size_t n_nodes, std::size_t n_mc, Rng& rng);

/// Mean |f - g| over n uniform points drawn from `seed`.
double l1_error(const SurrogateModel& model, const Oracle& oracle, std::size_t n, std::uint64_t seed);

/// Least-squares slope of log(error) against log(n) over the points with
/// n >= n_max / 10. Non-positive errors are skipped.
double fitted_slope(const std::vector<double>& n, const std::vector<double>& error);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

} // namespace ssc
