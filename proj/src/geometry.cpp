#include "ssc/geometry.hpp"

#include "ssc/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ssc {

namespace {

Eigen::MatrixXd edge_matrix(std::span<const Point> vertices)
{
    const auto d = static_cast<Eigen::Index>(vertices.size()) - 1;
    Eigen::MatrixXd e(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r)
            e(r, c) = vertices[c + 1][r] - vertices[0][r];
    return e;
}

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

} // namespace

Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
{
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * keys.size());
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (auto k : keys)
        push(k);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

double squared_distance(PointView a, PointView b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

double signed_simplex_volume(std::span<const Point> vertices)
{
    const int d = static_cast<int>(vertices.size()) - 1;
    if (d == 0)
        return 1.0;
    return edge_matrix(vertices).determinant() / factorial(d);
}

double simplex_volume(std::span<const Point> vertices)
{
    return std::abs(signed_simplex_volume(vertices));
}

Point centroid(std::span<const Point> vertices)
{
    Point c(vertices.front().size(), 0.0);
    for (const auto& v : vertices)
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] += v[i];
    for (auto& x : c)
        x /= static_cast<double>(vertices.size());
    return c;
}

std::vector<double> barycentric_coordinates(std::span<const Point> vertices, PointView x)
{
    const auto d = static_cast<Eigen::Index>(vertices.size()) - 1;
    const Eigen::MatrixXd e = edge_matrix(vertices);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(e);
    if (simplex_volume(vertices) <= 0.0)
        throw DegenerateSimplex("barycentric coordinates of a degenerate simplex");
    Eigen::VectorXd rhs(d);
    for (Eigen::Index i = 0; i < d; ++i)
        rhs(i) = x[i] - vertices[0][i];
    const Eigen::VectorXd lam = lu.solve(rhs);
    std::vector<double> out(d + 1);
    out[0] = 1.0 - lam.sum();
    for (Eigen::Index i = 0; i < d; ++i)
        out[i + 1] = lam(i);
    return out;
}

bool point_in_simplex(std::span<const Point> vertices, PointView x, double tol)
{
    const auto lam = barycentric_coordinates(vertices, x);
    return std::all_of(lam.begin(), lam.end(), [tol](double l) { return l >= -tol; });
}

void sample_barycentric(int d, Rng& rng, double* weights)
{
    // d+1 exponential spacings normalised by their sum.
    double s = 0.0;
    for (int i = 0; i <= d; ++i) {
        weights[i] = -std::log(uniform_open01(rng));
        s += weights[i];
    }
    for (int i = 0; i <= d; ++i)
        weights[i] /= s;
}

Point sample_unit_simplex(int d, Rng& rng)
{
    Point w(d + 1);
    sample_barycentric(d, rng, w.data());
    w.pop_back();
    return w;
}

Point sample_in_simplex(std::span<const Point> vertices, Rng& rng)
{
    if (simplex_volume(vertices) <= 0.0)
        throw DegenerateSimplex("cannot sample inside a degenerate simplex");
    const int d = static_cast<int>(vertices.size()) - 1;
    const Point s = sample_unit_simplex(d, rng);
    double rest = 1.0;
    for (double v : s)
        rest -= v;
    Point x(vertices[0].size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        double acc = rest * vertices[0][k];
        for (int i = 0; i < d; ++i)
            acc += s[i] * vertices[i + 1][k];
        x[k] = acc;
    }
    return x;
}

std::vector<Point> subsimplex(std::span<const Point> vertices)
{
    if (simplex_volume(vertices) <= 0.0)
        throw DegenerateSimplex("subsimplex of a degenerate simplex");
    const auto nv = vertices.size();
    const double d = static_cast<double>(nv - 1);
    const Point sum = [&] {
        Point s(vertices[0].size(), 0.0);
        for (const auto& v : vertices)
            for (std::size_t k = 0; k < s.size(); ++k)
                s[k] += v[k];
        return s;
    }();
    std::vector<Point> out(nv, Point(sum.size()));
    for (std::size_t l = 0; l < nv; ++l)
        for (std::size_t k = 0; k < sum.size(); ++k)
            out[l][k] = (sum[k] - vertices[l][k]) / d;
    return out;
}

} // namespace ssc
