#include "ssc/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ssc {

namespace {

void exponents_of_degree(int d, int total, int var, Exponent& cur, std::vector<Exponent>& out)
{
    if (var == d - 1) {
        cur[var] = total;
        out.push_back(cur);
        return;
    }
    for (int e = total; e >= 0; --e) {
        cur[var] = e;
        exponents_of_degree(d, total - e, var + 1, cur, out);
    }
}

} // namespace

struct Polynomial::Basis {
    std::vector<Exponent> exponents;
    /// Per term and variable, the index k*(p+1)+alpha_k into the power table.
    std::vector<int> power_index;
};

namespace {

const Polynomial::Basis& cached_basis_table(int d, int p)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, Polynomial::Basis> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find({d, p});
    if (it == cache.end()) {
        Polynomial::Basis b;
        b.exponents = monomial_basis(d, p);
        for (const auto& alpha : b.exponents)
            for (int k = 0; k < d; ++k)
                b.power_index.push_back(k * (p + 1) + alpha[k]);
        it = cache.emplace(std::make_pair(d, p), std::move(b)).first;
    }
    return it->second;
}

const std::vector<Exponent>& cached_basis(int d, int p)
{
    return cached_basis_table(d, p).exponents;
}

// Powers y_k^e for e = 0..degree, stored row-wise per variable.
void fill_powers(PointView x, const Point& center, const Point& scale, int degree, std::vector<double>& powers)
{
    const std::size_t d = center.size();
    const std::size_t stride = static_cast<std::size_t>(degree) + 1;
    powers.resize(d * stride);
    for (std::size_t k = 0; k < d; ++k) {
        const double y = (x[k] - center[k]) / scale[k];
        double v = 1.0;
        for (std::size_t e = 0; e < stride; ++e) {
            powers[k * stride + e] = v;
            v *= y;
        }
    }
}

Point bounding_half_widths(std::span<const PointView> points)
{
    const std::size_t d = points.front().size();
    Point scale(d);
    for (std::size_t k = 0; k < d; ++k) {
        double lo = points.front()[k];
        double hi = lo;
        for (const auto& p : points) {
            lo = std::min(lo, p[k]);
            hi = std::max(hi, p[k]);
        }
        const double half = 0.5 * (hi - lo);
        scale[k] = half > 0.0 ? half : 1.0;
    }
    return scale;
}

Eigen::MatrixXd design_matrix(std::span<const PointView> points, const std::vector<Exponent>& basis,
                              const Point& center, const Point& scale, int degree)
{
    const auto rows = static_cast<Eigen::Index>(points.size());
    const auto cols = static_cast<Eigen::Index>(basis.size());
    const std::size_t stride = static_cast<std::size_t>(degree) + 1;
    Eigen::MatrixXd v(rows, cols);
    std::vector<double> powers;
    for (Eigen::Index r = 0; r < rows; ++r) {
        fill_powers(points[r], center, scale, degree, powers);
        for (Eigen::Index c = 0; c < cols; ++c) {
            double m = 1.0;
            const auto& alpha = basis[c];
            for (std::size_t k = 0; k < alpha.size(); ++k)
                m *= powers[k * stride + alpha[k]];
            v(r, c) = m;
        }
    }
    return v;
}

} // namespace

std::size_t basis_size(int d, int p)
{
    // binomial(d+p, p)
    std::size_t n = 1;
    for (int i = 1; i <= p; ++i)
        n = n * static_cast<std::size_t>(d + i) / static_cast<std::size_t>(i);
    return n;
}

std::vector<Exponent> monomial_basis(int d, int p)
{
    if (d < 1 || p < 0)
        throw std::invalid_argument("monomial basis needs d >= 1 and p >= 0");
    std::vector<Exponent> out;
    out.reserve(basis_size(d, p));
    Exponent cur(d, 0);
    for (int total = 0; total <= p; ++total)
        exponents_of_degree(d, total, 0, cur, out);
    return out;
}

Polynomial::Polynomial(int degree, Point center, Point scale, std::vector<double> coefficients)
    : degree_(degree)
    , center_(std::move(center))
    , scale_(std::move(scale))
    , coefficients_(std::move(coefficients))
    , basis_(&cached_basis_table(static_cast<int>(center_.size()), degree))
{
    inv_scale_.resize(scale_.size());
    for (std::size_t k = 0; k < scale_.size(); ++k)
        inv_scale_[k] = 1.0 / scale_[k];
    if (coefficients_.size() != basis_->exponents.size())
        throw std::invalid_argument("coefficient count does not match the basis size");
}

Polynomial Polynomial::constant(int d, double value)
{
    return Polynomial(0, Point(d, 0.0), Point(d, 1.0), {value});
}

double Polynomial::operator()(PointView x) const
{
    if (degree_ == 0)
        return coefficients_[0];
    const std::size_t d = center_.size();
    const std::size_t stride = static_cast<std::size_t>(degree_) + 1;
    constexpr std::size_t stack_powers = 128;
    std::array<double, stack_powers> local;
    thread_local std::vector<double> heap;
    double* powers = local.data();
    if (d * stride > stack_powers) {
        heap.resize(d * stride);
        powers = heap.data();
    }
    for (std::size_t k = 0; k < d; ++k) {
        const double y = (x[k] - center_[k]) * inv_scale_[k];
        double v = 1.0;
        double* row = powers + k * stride;
        for (std::size_t e = 0; e < stride; ++e) {
            row[e] = v;
            v *= y;
        }
    }
    const int* idx = basis_->power_index.data();
    double sum = 0.0;
    for (std::size_t c = 0; c < coefficients_.size(); ++c) {
        double m = coefficients_[c];
        for (std::size_t k = 0; k < d; ++k)
            m *= powers[*idx++];
        sum += m;
    }
    return sum;
}

std::optional<Polynomial> fit_interpolant(std::span<const PointView> points, std::span<const double> values,
                                          int degree, PointView center)
{
    const int d = static_cast<int>(center.size());
    const auto& basis = cached_basis(d, degree);
    if (points.size() != basis.size() || values.size() != points.size())
        throw std::invalid_argument("interpolation needs exactly one point per basis function");

    Point c(center.begin(), center.end());
    Point scale = bounding_half_widths(points);
    const Eigen::MatrixXd v = design_matrix(points, basis, c, scale, degree);
    const Eigen::Map<const Eigen::VectorXd> f(values.data(), static_cast<Eigen::Index>(values.size()));

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(v);
    const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double pmax = pivots.maxCoeff();
    const double pmin = pivots.minCoeff();
    if (!(pmin > 0.0) || pmax / pmin > max_pivot_ratio)
        return std::nullopt;

    Eigen::VectorXd coeffs = lu.solve(f);
    coeffs += lu.solve(f - v * coeffs);

    const Eigen::VectorXd residual = v * coeffs - f;
    for (Eigen::Index i = 0; i < residual.size(); ++i)
        if (!(std::abs(residual(i)) <= interpolation_residual_tol * (1.0 + std::abs(f(i)))))
            return std::nullopt;

    return Polynomial(degree, std::move(c), std::move(scale),
                      std::vector<double>(coeffs.data(), coeffs.data() + coeffs.size()));
}

Polynomial fit_least_squares(std::span<const PointView> points, std::span<const double> values, int degree,
                             PointView center)
{
    const int d = static_cast<int>(center.size());
    const auto& basis = cached_basis(d, degree);
    Point c(center.begin(), center.end());
    Point scale = bounding_half_widths(points);
    const Eigen::MatrixXd v = design_matrix(points, basis, c, scale, degree);
    const Eigen::Map<const Eigen::VectorXd> f(values.data(), static_cast<Eigen::Index>(values.size()));
    const Eigen::VectorXd coeffs = v.colPivHouseholderQr().solve(f);
    return Polynomial(degree, std::move(c), std::move(scale),
                      std::vector<double>(coeffs.data(), coeffs.data() + coeffs.size()));
}

} // namespace ssc
