#pragma once

#include "ssc/geometry.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ssc {

/// Exponent multi-index of one monomial.
using Exponent = std::vector<int>;

/// Number of monomials of total degree <= p in d variables, (d+p)!/(d!p!).
std::size_t basis_size(int d, int p);

/// All exponents with |alpha| <= p, ordered by total degree and then
/// lexicographically with the first variable varying slowest
/// (d=2, p=1: (0,0), (1,0), (0,1)).
std::vector<Exponent> monomial_basis(int d, int p);

/// A polynomial in the monomial basis over shifted and scaled coordinates
/// y_k = (x_k - center_k) / scale_k.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(int degree, Point center, Point scale, std::vector<double> coefficients);

    static Polynomial constant(int d, double value);

    double operator()(PointView x) const;

    int degree() const { return degree_; }
    int dimension() const { return static_cast<int>(center_.size()); }
    const std::vector<double>& coefficients() const { return coefficients_; }
    const Point& center() const { return center_; }
    const Point& scale() const { return scale_; }

    struct Basis;

private:
    int degree_ = 0;
    Point center_;
    Point scale_;
    Point inv_scale_;
    std::vector<double> coefficients_;
    const Basis* basis_ = nullptr;
};

/// Relative tolerance on the interpolation residual.
inline constexpr double interpolation_residual_tol = 1e-8;
/// Pivot-ratio bound above which an interpolation system is treated as singular.
inline constexpr double max_pivot_ratio = 1e12;

/// Interpolates `values` at `points` with a polynomial of total degree
/// `degree`; requires points.size() == basis_size(d, degree). Coordinates are
/// shifted to `center` and scaled by the bounding-box half-widths of the
/// points. Returns std::nullopt when the system is singular or
/// ill-conditioned (pivot ratio above 1e12, or residual above 1e-8 relative).
std::optional<Polynomial> fit_interpolant(std::span<const PointView> points, std::span<const double> values,
                                          int degree, PointView center);

/// Least-squares fit of total degree `degree` to more points than unknowns.
Polynomial fit_least_squares(std::span<const PointView> points, std::span<const double> values, int degree,
                             PointView center);

} // namespace ssc
