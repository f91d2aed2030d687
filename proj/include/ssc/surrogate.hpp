#pragma once

#include "ssc/geometry.hpp"
#include "ssc/polynomial.hpp"
#include "ssc/triangulation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ssc {

/// Opaque identifier of the smooth subdomain a sample belongs to.
using RegionLabel = std::int64_t;

enum class Mode { original, improved };
enum class LecMode { off, strict, delta };
enum class Combiner { max, min };

std::string_view to_string(Mode m);
std::string_view to_string(LecMode m);
Mode parse_mode(std::string_view s);
LecMode parse_lec(std::string_view s);

/// Evaluated samples in insertion order.
class SampleSet {
public:
    explicit SampleSet(int d)
        : dim_(d)
    {
    }

    int add(PointView x, double value, RegionLabel label);

    int dimension() const { return dim_; }
    std::size_t size() const { return values_.size(); }
    PointView point(int i) const { return {coords_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)}; }
    double value(int i) const { return values_[i]; }
    RegionLabel label(int i) const { return labels_[i]; }
    std::span<const double> values() const { return values_; }

private:
    int dim_;
    std::vector<double> coords_;
    std::vector<double> values_;
    std::vector<RegionLabel> labels_;
};

/// Sample indices used to fit one polynomial.
struct Stencil {
    std::vector<int> point_ids;
    int degree = 1;
    std::optional<RegionLabel> region;
};

/// Candidate ordering for a simplex: the simplex vertices (restricted to
/// `region` if given) come first, followed by the remaining candidates by
/// distance to the centroid, ties broken by lower sample index. At most
/// `count` entries are returned.
std::vector<int> stencil_order(const SimplexRecord& simplex, const SampleSet& samples,
                               std::optional<RegionLabel> region, std::size_t count);

/// Nearest-neighbour stencil of degree p. Throws InsufficientPoints if the
/// candidate set holds fewer than basis_size(d, p) points.
Stencil build_stencil(const SimplexRecord& simplex, const SampleSet& samples, int p,
                      std::optional<RegionLabel> region);

/// Fits the interpolant on a stencil; std::nullopt signals a singular system.
std::optional<Polynomial> fit_interpolant(const Stencil& stencil, const SampleSet& samples, PointView center);

/// Extremum-conservation test of g over the simplex. The extrema of g are
/// taken over the barycentric lattice of order 2p+2. Strict: g may not leave
/// [min f, max f] of the vertex values (1e-9 slack). Delta: the range may be
/// exceeded by half of the vertex-value spread.
bool lec_check(const Polynomial& g, std::span<const Point> vertices, std::span<const double> vertex_values,
               LecMode mode);

/// One polynomial with the stencil it interpolates.
struct Side {
    Polynomial poly;
    Stencil stencil;
    /// Distance from the centroid beyond which a new candidate cannot enter
    /// any stencil tried for this side (+inf when the candidate set was
    /// exhausted).
    double radius = 0.0;
};

/// Per-simplex approximation: one side, or two sides combined by max/min.
struct LocalSurrogate {
    int simplex = -1;
    std::vector<Side> sides;
    Combiner combiner = Combiner::max;
    bool lec_reduced = false;
    /// Neither combiner reproduced every stencil sample within 1e-6.
    bool combiner_mismatch = false;
    /// Region-restricted fitting was impossible; linear vertex interpolant.
    bool fallback_linear = false;
    /// Vertices span more than two regions; the simplex must be refined.
    bool pending_refinement = false;

    bool two_sided() const { return sides.size() == 2; }
    double operator()(PointView x) const;
    /// Index of the side whose value the combiner selects at x.
    std::size_t active_side(PointView x) const;
    /// Lowest side degree.
    int degree() const;
};

struct SurrogateOptions {
    int p_max = 1;
    Mode mode = Mode::improved;
    LecMode lec = LecMode::off;
};

/// Whether extremum limiting is active for these options in dimension d:
/// strict limiting only in original mode, delta limiting only for d >= 4.
LecMode effective_lec(const SurrogateOptions& options, int d);

/// Builds the approximation on one simplex.
///
/// Original mode fits one interpolant on an unrestricted stencil, dropping
/// the degree on singular systems or failed extremum checks. Improved mode
/// restricts stencils to the vertex regions: one region gives a one-sided
/// fit, two regions give two one-sided fits combined by max or min.
///
/// Throws MoreThanTwoRegions, or InsufficientPoints when a restricted side
/// cannot be fitted even at degree 1.
LocalSurrogate build_local_surrogate(int simplex_id, const Triangulation& tri, const SampleSet& samples,
                                     const SurrogateOptions& options);

/// Linear interpolant through the simplex vertices.
LocalSurrogate linear_vertex_surrogate(int simplex_id, const Triangulation& tri, const SampleSet& samples);

} // namespace ssc
