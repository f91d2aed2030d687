#pragma once

#include "ssc/geometry.hpp"
#include "ssc/surrogate.hpp"

#include <map>
#include <string_view>
#include <vector>

namespace ssc {

enum class EstimatorPolicy { last_point, mc_l1, volume_order };

std::string_view to_string(EstimatorPolicy p);
/// Accepts "last-point", "mc-l1" and "vol-order".
EstimatorPolicy parse_estimator(std::string_view s);

/// vol * eps^2, where eps is the hierarchical error of the simplex's newest
/// vertex.
double estimate_last_point(double volume, double hierarchical_error);

/// Lower-degree comparator for the Monte Carlo estimator, one polynomial per
/// side of the local surrogate.
struct LowerComparator {
    std::vector<Polynomial> sides;
};

/// Least-squares fit of degree p-1 on each side's stencil; for p = 1 the
/// constant minimum of the side's in-region vertex values.
LowerComparator lower_degree_comparator(const LocalSurrogate& local, const SimplexRecord& simplex,
                                        const SampleSet& samples);

/// vol * mean |g - gbar|^((p+1)/p) over n uniform draws in the simplex. At
/// each draw the side selected by the combiner supplies g, gbar and p.
double estimate_mc_l1(std::span<const Point> vertices, double volume, const LocalSurrogate& local,
                      const LowerComparator& lower, int n, Rng& rng);

/// vol^((p+1)/d + 1).
double estimate_volume_order(double volume, int p, int d);

/// Per-simplex estimates and their global aggregate.
class EstimatorState {
public:
    explicit EstimatorState(EstimatorPolicy policy = EstimatorPolicy::mc_l1)
        : policy_(policy)
    {
    }

    EstimatorPolicy policy() const { return policy_; }
    void set(int simplex, double estimate);
    void erase(int simplex);
    double get(int simplex) const;
    bool contains(int simplex) const { return parts_.count(simplex) != 0; }
    std::size_t size() const { return parts_.size(); }
    const std::map<int, double>& parts() const { return parts_; }

    /// sqrt of the sum for last-point, the plain sum otherwise.
    double aggregate() const;

private:
    EstimatorPolicy policy_;
    std::map<int, double> parts_;
};

/// Aggregate of a list of per-simplex estimates.
double global_aggregate(EstimatorPolicy policy, std::span<const double> parts);

} // namespace ssc
