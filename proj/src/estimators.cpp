#include "ssc/estimators.hpp"

#include "ssc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ssc {

std::string_view to_string(EstimatorPolicy p)
{
    switch (p) {
    case EstimatorPolicy::last_point:
        return "last-point";
    case EstimatorPolicy::mc_l1:
        return "mc-l1";
    case EstimatorPolicy::volume_order:
        return "vol-order";
    }
    return "mc-l1";
}

EstimatorPolicy parse_estimator(std::string_view s)
{
    if (s == "last-point")
        return EstimatorPolicy::last_point;
    if (s == "mc-l1")
        return EstimatorPolicy::mc_l1;
    if (s == "vol-order")
        return EstimatorPolicy::volume_order;
    throw ConfigError("unknown estimator '" + std::string(s) + "'");
}

double estimate_last_point(double volume, double hierarchical_error)
{
    return volume * hierarchical_error * hierarchical_error;
}

LowerComparator lower_degree_comparator(const LocalSurrogate& local, const SimplexRecord& simplex,
                                        const SampleSet& samples)
{
    LowerComparator out;
    const int d = samples.dimension();
    for (const auto& side : local.sides) {
        const int p = side.poly.degree();
        if (p <= 1) {
            double lo = std::numeric_limits<double>::infinity();
            for (int v : simplex.vertices)
                if (!side.stencil.region || samples.label(v) == *side.stencil.region)
                    lo = std::min(lo, samples.value(v));
            out.sides.push_back(Polynomial::constant(d, lo));
            continue;
        }
        std::vector<PointView> pts;
        std::vector<double> vals;
        for (int i : side.stencil.point_ids) {
            pts.push_back(samples.point(i));
            vals.push_back(samples.value(i));
        }
        out.sides.push_back(fit_least_squares(pts, vals, p - 1, simplex.centroid));
    }
    return out;
}

double estimate_mc_l1(std::span<const Point> vertices, double volume, const LocalSurrogate& local,
                      const LowerComparator& lower, int n, Rng& rng)
{
    if (n <= 0)
        return 0.0;
    if (!(volume > 0.0))
        throw DegenerateSimplex("Monte Carlo estimate on a degenerate simplex");
    const int d = static_cast<int>(vertices.size()) - 1;
    Point x(vertices[0].size());
    std::vector<double> w(d + 1);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sample_barycentric(d, rng, w.data());
        for (std::size_t c = 0; c < x.size(); ++c) {
            double acc = 0.0;
            for (int i = 0; i <= d; ++i)
                acc += w[i] * vertices[i][c];
            x[c] = acc;
        }
        const std::size_t side = local.active_side(x);
        const auto& g = local.sides[side].poly;
        const double p = std::max(g.degree(), 1);
        sum += std::pow(std::abs(g(x) - lower.sides[side](x)), (p + 1.0) / p);
    }
    return volume * sum / n;
}

double estimate_volume_order(double volume, int p, int d)
{
    return std::pow(volume, static_cast<double>(p + 1) / d + 1.0);
}

void EstimatorState::set(int simplex, double estimate)
{
    parts_[simplex] = estimate;
}

void EstimatorState::erase(int simplex)
{
    parts_.erase(simplex);
}

double EstimatorState::get(int simplex) const
{
    const auto it = parts_.find(simplex);
    return it == parts_.end() ? 0.0 : it->second;
}

double EstimatorState::aggregate() const
{
    std::vector<double> v;
    v.reserve(parts_.size());
    for (const auto& [id, e] : parts_)
        v.push_back(e);
    return global_aggregate(policy_, v);
}

double global_aggregate(EstimatorPolicy policy, std::span<const double> parts)
{
    double sum = 0.0;
    for (double e : parts)
        sum += e;
    return policy == EstimatorPolicy::last_point ? std::sqrt(sum) : sum;
}

} // namespace ssc
