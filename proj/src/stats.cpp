#include "ssc/stats.hpp"

#include "ssc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ssc {

namespace {

constexpr std::array<unsigned, 6> primes{2, 3, 5, 7, 11, 13};
constexpr double variance_slack = 1e-12;
constexpr double degenerate_range = 1e-12;

std::vector<double> ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
            ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

std::string to_string(QuadratureSpec::Kind k)
{
    return k == QuadratureSpec::Kind::monte_carlo ? "mc" : "qmc";
}

double radical_inverse(std::uint64_t i, unsigned base)
{
    double result = 0.0;
    double f = 1.0 / base;
    while (i > 0) {
        result += f * static_cast<double>(i % base);
        i /= base;
        f /= base;
    }
    return result;
}

std::vector<Point> halton_sequence(int d, std::size_t n)
{
    if (d < 1 || d > static_cast<int>(primes.size()))
        throw std::invalid_argument("Halton sequence supports 1 <= d <= 6");
    std::vector<Point> out(n, Point(d));
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k)
            out[i][k] = radical_inverse(i + 1, primes[k]);
    return out;
}

void for_each_node(int d, const QuadratureSpec& q, const std::function<void(PointView)>& f)
{
    if (q.n < 1)
        throw std::invalid_argument("quadrature needs at least one node");
    Point x(d);
    if (q.kind == QuadratureSpec::Kind::halton) {
        if (d > static_cast<int>(primes.size()))
            throw std::invalid_argument("Halton sequence supports 1 <= d <= 6");
        for (std::size_t i = 0; i < q.n; ++i) {
            for (int k = 0; k < d; ++k)
                x[k] = radical_inverse(i + 1, primes[k]);
            f(x);
        }
        return;
    }
    Rng rng = derive_rng(q.seed, {0x7175616400ULL});
    for (std::size_t i = 0; i < q.n; ++i) {
        for (auto& c : x)
            c = uniform_open01(rng);
        f(x);
    }
}

Moments moments(int d, const std::function<double(PointView)>& g, const QuadratureSpec& q)
{
    // Shifted accumulation keeps the variance accurate for large means.
    double shift = 0.0;
    bool first = true;
    double s1 = 0.0;
    double s2 = 0.0;
    for_each_node(d, q, [&](PointView x) {
        const double v = g(x);
        if (first) {
            shift = v;
            first = false;
        }
        s1 += v - shift;
        s2 += (v - shift) * (v - shift);
    });
    const double n = static_cast<double>(q.n);
    Moments m;
    const double m1 = s1 / n;
    m.mean = shift + m1;
    m.variance = s2 / n - m1 * m1;
    if (m.variance < 0.0) {
        if (m.variance < -variance_slack)
            throw std::runtime_error("negative variance estimate");
        m.variance = 0.0;
    }
    m.standard_error = q.n > 1 ? std::sqrt(m.variance * n / (n - 1.0) / n) : 0.0;
    return m;
}

double expectation(const SurrogateModel& model, const QuadratureSpec& q)
{
    return moments(model.dimension(), [&](PointView x) { return model(x); }, q).mean;
}

double variance(const SurrogateModel& model, const QuadratureSpec& q)
{
    return moments(model.dimension(), [&](PointView x) { return model(x); }, q).variance;
}

double CdfCurve::operator()(double y) const
{
    if (nodes.empty())
        return 0.0;
    if (y < nodes.front())
        return 0.0;
    if (y >= nodes.back())
        return std::clamp(probabilities.back(), 0.0, 1.0);
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
    const double t = (y - nodes[i]) / (nodes[i + 1] - nodes[i]);
    return std::clamp(probabilities[i] + t * (probabilities[i + 1] - probabilities[i]), 0.0, 1.0);
}

CdfCurve cdf(int d, const std::function<double(PointView)>& g, std::size_t n_nodes, std::size_t n_mc, Rng& rng)
{
    if (n_nodes < 2)
        throw std::invalid_argument("a CDF needs at least two nodes");
    if (n_mc < 1)
        throw std::invalid_argument("a CDF needs at least one draw");
    std::vector<double> values(n_mc);
    Point x(d);
    for (auto& v : values) {
        for (auto& c : x)
            c = uniform_open01(rng);
        v = g(x);
    }
    std::sort(values.begin(), values.end());
    const double lo = values.front();
    const double hi = values.back();

    CdfCurve curve;
    if (hi - lo < degenerate_range) {
        // Point mass: a step from 0 to 1 at the constant value.
        curve.nodes = {std::nextafter(lo, -HUGE_VAL), lo};
        curve.probabilities = {0.0, 1.0};
        return curve;
    }
    const double h = (hi - lo) / static_cast<double>(n_nodes - 1);
    curve.nodes.resize(n_nodes);
    curve.probabilities.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double y = i + 1 == n_nodes ? hi : lo + static_cast<double>(i) * h;
        curve.nodes[i] = y;
        const auto count = std::upper_bound(values.begin(), values.end(), y) - values.begin();
        curve.probabilities[i] = static_cast<double>(count) / static_cast<double>(n_mc);
    }
    return curve;
}

CdfCurve cdf(const SurrogateModel& model, std::size_t n_nodes, std::size_t n_mc, Rng& rng)
{
    return cdf(model.dimension(), [&](PointView x) { return model(x); }, n_nodes, n_mc, rng);
}

double l1_error(const SurrogateModel& model, const Oracle& oracle, std::size_t n, std::uint64_t seed)
{
    Rng rng = derive_rng(seed, {0x6c31ULL});
    Point x(model.dimension());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& c : x)
            c = uniform_open01(rng);
        sum += std::abs(oracle.evaluate(x).value - model(x));
    }
    return sum / static_cast<double>(n);
}

double fitted_slope(const std::vector<double>& n, const std::vector<double>& error)
{
    if (n.size() != error.size() || n.empty())
        throw std::invalid_argument("slope fit needs matching non-empty series");
    const double n_max = *std::max_element(n.begin(), n.end());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] < n_max / 10.0 || !(error[i] > 0.0))
            continue;
        const double lx = std::log(n[i]);
        const double ly = std::log(error[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2)
        throw std::invalid_argument("slope fit needs at least two points in the final decade");
    const double den = m * sxx - sx * sx;
    if (den == 0.0)
        throw std::invalid_argument("slope fit needs distinct sample counts");
    return (m * sxy - sx * sy) / den;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("Spearman correlation needs two equal series of length >= 2");
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0)
        return 0.0;
    return sab / std::sqrt(saa * sbb);
}

} // namespace ssc
