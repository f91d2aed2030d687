#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ssc {

/// A point in the parameter domain [0,1]^d.
using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Random stream used throughout the library. Fixed engine so that runs are
/// reproducible across platforms.
using Rng = std::mt19937_64;

/// Uniform draw in the open interval (0,1) with 53 random bits.
inline double uniform_open01(Rng& rng)
{
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Derives an independent, reproducible stream from a seed and a list of keys.
Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

double squared_distance(PointView a, PointView b);

/// Signed volume det(x_1-x_0, ..., x_d-x_0)/d!.
double signed_simplex_volume(std::span<const Point> vertices);

/// |det(x_1-x_0, ..., x_d-x_0)| / d!; zero for a degenerate simplex.
double simplex_volume(std::span<const Point> vertices);

Point centroid(std::span<const Point> vertices);

/// Barycentric coordinates of x with respect to the simplex.
/// Throws DegenerateSimplex if the simplex has zero volume.
std::vector<double> barycentric_coordinates(std::span<const Point> vertices, PointView x);

/// True if every barycentric coordinate is >= -tol.
bool point_in_simplex(std::span<const Point> vertices, PointView x, double tol = 1e-12);

/// Writes d+1 barycentric weights of a uniform draw in a d-simplex.
void sample_barycentric(int d, Rng& rng, double* weights);

/// Uniform draw from the standard simplex {s_i >= 0, sum s_i <= 1} via
/// normalised exponential spacings (Dirichlet(1,...,1)).
Point sample_unit_simplex(int d, Rng& rng);

/// Uniform draw strictly inside the given simplex.
Point sample_in_simplex(std::span<const Point> vertices, Rng& rng);

/// Vertices of the subsimplex spanned by the facet centres: vertex l is the
/// mean of all vertices except vertex l.
std::vector<Point> subsimplex(std::span<const Point> vertices);

} // namespace ssc
