#include "ssc/surrogate.hpp"

#include "ssc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <tuple>

namespace ssc {

namespace {

constexpr double combiner_tol = 1e-6;
constexpr double lec_tol = 1e-9;

// Barycentric lattice {k / order : sum k = order}, cached per (d, order).
const std::vector<std::vector<double>>& barycentric_lattice(int d, int order)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::vector<std::vector<double>>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find({d, order});
    if (it != cache.end())
        return it->second;
    std::vector<std::vector<double>> nodes;
    std::vector<int> k(d + 1, 0);
    auto rec = [&](auto&& self, int var, int remaining) -> void {
        if (var == d) {
            k[d] = remaining;
            std::vector<double> w(d + 1);
            for (int i = 0; i <= d; ++i)
                w[i] = static_cast<double>(k[i]) / order;
            nodes.push_back(std::move(w));
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            k[var] = e;
            self(self, var + 1, remaining - e);
        }
    };
    rec(rec, 0, order);
    return cache.emplace(std::make_pair(d, order), std::move(nodes)).first->second;
}

template <typename F>
std::pair<double, double> range_on_lattice(F&& g, std::span<const Point> vertices, int degree)
{
    const int d = static_cast<int>(vertices.size()) - 1;
    const auto& lattice = barycentric_lattice(d, 2 * degree + 2);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    Point x(vertices[0].size());
    for (const auto& w : lattice) {
        std::fill(x.begin(), x.end(), 0.0);
        for (int i = 0; i <= d; ++i)
            for (std::size_t k = 0; k < x.size(); ++k)
                x[k] += w[i] * vertices[i][k];
        const double v = g(PointView(x));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

bool range_conserved(double g_lo, double g_hi, std::span<const double> vertex_values, LecMode mode)
{
    if (mode == LecMode::off)
        return true;
    const auto [f_lo_it, f_hi_it] = std::minmax_element(vertex_values.begin(), vertex_values.end());
    const double f_lo = *f_lo_it;
    const double f_hi = *f_hi_it;
    if (mode == LecMode::strict) {
        const double slack = lec_tol * (1.0 + std::max(std::abs(f_lo), std::abs(f_hi)));
        return g_lo >= f_lo - slack && g_hi <= f_hi + slack;
    }
    const double delta = 0.5 * (f_hi - f_lo);
    return g_lo + delta >= f_lo && g_hi - delta <= f_hi;
}

double combine(Combiner c, double a, double b)
{
    return c == Combiner::max ? std::max(a, b) : std::min(a, b);
}

struct SideFit {
    Side side;
    bool reduced = false;
};

// Fits one side with degree fallback from p_cap down to 1. `accept` decides
// whether a fitted polynomial is kept (extremum limiting).
template <typename Accept>
std::optional<SideFit> fit_side(const SimplexRecord& s, const SampleSet& samples, std::optional<RegionLabel> region,
                                int p_cap, Accept&& accept)
{
    const int d = samples.dimension();
    const std::size_t want = basis_size(d, p_cap);
    const auto order = stencil_order(s, samples, region, want);

    double radius = std::numeric_limits<double>::infinity();
    if (order.size() >= want) {
        const auto last = order.back();
        const bool is_vertex = std::find(s.vertices.begin(), s.vertices.end(), last) != s.vertices.end();
        radius = is_vertex ? -1.0 : std::sqrt(squared_distance(samples.point(last), s.centroid));
    }

    bool reduced = false;
    std::vector<PointView> pts;
    std::vector<double> vals;
    for (int p = p_cap; p >= 1; --p) {
        const std::size_t need = basis_size(d, p);
        if (order.size() < need)
            continue;
        pts.clear();
        vals.clear();
        for (std::size_t i = 0; i < need; ++i) {
            pts.push_back(samples.point(order[i]));
            vals.push_back(samples.value(order[i]));
        }
        auto poly = fit_interpolant(pts, vals, p, s.centroid);
        if (!poly)
            continue;
        if (p > 1 && !accept(*poly)) {
            reduced = true;
            continue;
        }
        Stencil st{std::vector<int>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(need)), p, region};
        return SideFit{Side{std::move(*poly), std::move(st), radius}, reduced};
    }
    return std::nullopt;
}

std::vector<double> vertex_values(const SimplexRecord& s, const SampleSet& samples)
{
    std::vector<double> out;
    for (int v : s.vertices)
        out.push_back(samples.value(v));
    return out;
}

std::vector<Point> vertex_points(const SimplexRecord& s, const SampleSet& samples)
{
    std::vector<Point> out;
    for (int v : s.vertices) {
        const auto p = samples.point(v);
        out.emplace_back(p.begin(), p.end());
    }
    return out;
}

// Picks max or min so that the combination reproduces the stencil samples.
// When neither does, the simplex vertices decide first: distant stencil
// samples can sit where one side extrapolates poorly.
void choose_combiner(LocalSurrogate& local, const SimplexRecord& simplex, const SampleSet& samples)
{
    std::set<int> ids;
    for (const auto& side : local.sides)
        ids.insert(side.stencil.point_ids.begin(), side.stencil.point_ids.end());
    struct Fit {
        int vertex_misses = 0;
        int misses = 0;
        double worst = 0.0;
    };
    auto assess = [&](Combiner c) {
        Fit fit;
        for (int i : ids) {
            const auto x = samples.point(i);
            const double f = samples.value(i);
            const double g = combine(c, local.sides[0].poly(x), local.sides[1].poly(x));
            const double err = std::abs(g - f) / (1.0 + std::abs(f));
            fit.worst = std::max(fit.worst, err);
            if (err > combiner_tol) {
                ++fit.misses;
                if (std::find(simplex.vertices.begin(), simplex.vertices.end(), i) != simplex.vertices.end())
                    ++fit.vertex_misses;
            }
        }
        return fit;
    };
    const Fit with_max = assess(Combiner::max);
    if (with_max.misses == 0) {
        local.combiner = Combiner::max;
        return;
    }
    const Fit with_min = assess(Combiner::min);
    if (with_min.misses == 0) {
        local.combiner = Combiner::min;
        return;
    }
    const auto key = [](const Fit& f) { return std::make_tuple(f.vertex_misses, f.misses, f.worst); };
    local.combiner = key(with_min) < key(with_max) ? Combiner::min : Combiner::max;
    local.combiner_mismatch = true;
}

} // namespace

std::string_view to_string(Mode m)
{
    return m == Mode::original ? "original" : "improved";
}

std::string_view to_string(LecMode m)
{
    switch (m) {
    case LecMode::off:
        return "off";
    case LecMode::strict:
        return "strict";
    case LecMode::delta:
        return "delta";
    }
    return "off";
}

Mode parse_mode(std::string_view s)
{
    if (s == "original")
        return Mode::original;
    if (s == "improved")
        return Mode::improved;
    throw ConfigError("unknown mode '" + std::string(s) + "'");
}

LecMode parse_lec(std::string_view s)
{
    if (s == "off")
        return LecMode::off;
    if (s == "strict")
        return LecMode::strict;
    if (s == "delta")
        return LecMode::delta;
    throw ConfigError("unknown LEC mode '" + std::string(s) + "'");
}

int SampleSet::add(PointView x, double value, RegionLabel label)
{
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("sample dimension mismatch");
    coords_.insert(coords_.end(), x.begin(), x.end());
    values_.push_back(value);
    labels_.push_back(label);
    return static_cast<int>(values_.size()) - 1;
}

std::vector<int> stencil_order(const SimplexRecord& simplex, const SampleSet& samples,
                               std::optional<RegionLabel> region, std::size_t count)
{
    auto admissible = [&](int i) { return !region || samples.label(i) == *region; };

    std::vector<int> order;
    for (int v : simplex.vertices)
        if (admissible(v))
            order.push_back(v);
    std::sort(order.begin(), order.end());
    if (order.size() >= count)
        return order;

    std::vector<std::pair<double, int>> others;
    others.reserve(samples.size());
    for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
        if (!admissible(i) || std::find(simplex.vertices.begin(), simplex.vertices.end(), i) != simplex.vertices.end())
            continue;
        others.emplace_back(squared_distance(samples.point(i), simplex.centroid), i);
    }
    const std::size_t take = std::min(others.size(), count - order.size());
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(take), others.end());
    for (std::size_t k = 0; k < take; ++k)
        order.push_back(others[k].second);
    return order;
}

Stencil build_stencil(const SimplexRecord& simplex, const SampleSet& samples, int p,
                      std::optional<RegionLabel> region)
{
    const std::size_t need = basis_size(samples.dimension(), p);
    auto order = stencil_order(simplex, samples, region, need);
    if (order.size() < need)
        throw InsufficientPoints("stencil needs " + std::to_string(need) + " points, candidate set has "
                                 + std::to_string(order.size()));
    return Stencil{std::move(order), p, region};
}

std::optional<Polynomial> fit_interpolant(const Stencil& stencil, const SampleSet& samples, PointView center)
{
    std::vector<PointView> pts;
    std::vector<double> vals;
    for (int i : stencil.point_ids) {
        pts.push_back(samples.point(i));
        vals.push_back(samples.value(i));
    }
    return fit_interpolant(pts, vals, stencil.degree, center);
}

bool lec_check(const Polynomial& g, std::span<const Point> vertices, std::span<const double> vertex_values,
               LecMode mode)
{
    if (mode == LecMode::off)
        return true;
    const auto [lo, hi] = range_on_lattice(g, vertices, std::max(g.degree(), 1));
    return range_conserved(lo, hi, vertex_values, mode);
}

double LocalSurrogate::operator()(PointView x) const
{
    if (sides.size() == 1)
        return sides[0].poly(x);
    return combine(combiner, sides[0].poly(x), sides[1].poly(x));
}

std::size_t LocalSurrogate::active_side(PointView x) const
{
    if (sides.size() == 1)
        return 0;
    const double a = sides[0].poly(x);
    const double b = sides[1].poly(x);
    if (combiner == Combiner::max)
        return a >= b ? 0 : 1;
    return a <= b ? 0 : 1;
}

int LocalSurrogate::degree() const
{
    int p = std::numeric_limits<int>::max();
    for (const auto& s : sides)
        p = std::min(p, s.poly.degree());
    return sides.empty() ? 0 : p;
}

LecMode effective_lec(const SurrogateOptions& options, int d)
{
    if (options.lec == LecMode::delta)
        return d >= 4 ? LecMode::delta : LecMode::off;
    if (options.lec == LecMode::strict && options.mode == Mode::original)
        return LecMode::strict;
    return LecMode::off;
}

LocalSurrogate linear_vertex_surrogate(int simplex_id, const Triangulation& tri, const SampleSet& samples)
{
    const auto& s = tri.simplex(simplex_id);
    std::vector<int> ids(s.vertices);
    std::sort(ids.begin(), ids.end());
    Stencil st{ids, 1, std::nullopt};
    auto poly = fit_interpolant(st, samples, s.centroid);
    if (!poly)
        throw DegenerateSimplex("linear interpolation on a degenerate simplex");
    LocalSurrogate local;
    local.simplex = simplex_id;
    local.sides.push_back(Side{std::move(*poly), std::move(st), -1.0});
    return local;
}

LocalSurrogate build_local_surrogate(int simplex_id, const Triangulation& tri, const SampleSet& samples,
                                     const SurrogateOptions& options)
{
    if (options.p_max < 1)
        throw std::invalid_argument("p_max must be at least 1");
    const auto& s = tri.simplex(simplex_id);
    const int d = samples.dimension();
    const LecMode lec = effective_lec(options, d);
    const auto verts = vertex_points(s, samples);
    const auto fvals = vertex_values(s, samples);

    LocalSurrogate local;
    local.simplex = simplex_id;

    std::vector<std::optional<RegionLabel>> regions;
    if (options.mode == Mode::original) {
        regions.push_back(std::nullopt);
    } else {
        std::set<RegionLabel> labels;
        for (int v : s.vertices)
            labels.insert(samples.label(v));
        if (labels.size() > 2)
            throw MoreThanTwoRegions("simplex vertices span " + std::to_string(labels.size()) + " regions");
        regions.assign(labels.begin(), labels.end());
    }

    if (regions.size() == 1) {
        auto accept = [&](const Polynomial& g) { return lec_check(g, verts, fvals, lec); };
        auto fit = fit_side(s, samples, regions[0], options.p_max, accept);
        if (!fit)
            throw InsufficientPoints("no admissible interpolant on the simplex stencil");
        local.lec_reduced = fit->reduced;
        local.sides.push_back(std::move(fit->side));
        return local;
    }

    // Two regions: independent one-sided fits; extremum limiting (delta mode
    // only) is applied to the combination by lowering the higher side.
    std::array<int, 2> cap{options.p_max, options.p_max};
    auto no_limit = [](const Polynomial&) { return true; };
    for (;;) {
        local.sides.clear();
        for (std::size_t k = 0; k < 2; ++k) {
            auto fit = fit_side(s, samples, regions[k], cap[k], no_limit);
            if (!fit)
                throw InsufficientPoints("region " + std::to_string(*regions[k])
                                         + " has too few samples for a one-sided fit");
            local.sides.push_back(std::move(fit->side));
        }
        choose_combiner(local, s, samples);
        if (lec == LecMode::off)
            break;
        const int top = std::max(local.sides[0].poly.degree(), local.sides[1].poly.degree());
        const auto [lo, hi] = range_on_lattice(local, verts, top);
        if (range_conserved(lo, hi, fvals, lec) || top == 1)
            break;
        local.lec_reduced = true;
        for (std::size_t k = 0; k < 2; ++k)
            cap[k] = std::min(cap[k], local.sides[k].poly.degree() == top ? top - 1 : cap[k]);
        local.combiner_mismatch = false;
    }
    return local;
}

} // namespace ssc
