#include "ssc/adaptive.hpp"

#include "ssc/csv.hpp"
#include "ssc/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace ssc {

namespace {

constexpr int placement_retries = 100;
// Stream tags for derive_rng.
constexpr std::uint64_t placement_stream = 1;
constexpr std::uint64_t estimator_stream = 2;

double elapsed_s(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

std::size_t BatchSize::resolve(std::size_t n) const
{
    const double m = fraction ? std::floor(value * static_cast<double>(n)) : std::floor(value);
    return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

BatchSize parse_batch_size(std::string_view s)
{
    BatchSize b;
    if (!s.empty() && s.back() == 'n') {
        b.fraction = true;
        s.remove_suffix(1);
    }
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, b.value);
    if (s.empty() || ec != std::errc() || ptr != end || !(b.value > 0.0))
        throw ConfigError("invalid batch size '" + std::string(s) + "'");
    if (!b.fraction && b.value != std::floor(b.value))
        throw ConfigError("absolute batch size must be an integer");
    return b;
}

std::string to_string(const BatchSize& b)
{
    return b.fraction ? format_real(b.value) + "n" : format_real(b.value);
}

void BuildConfig::validate(int d) const
{
    if (d < 1 || d > Triangulation::max_dimension)
        throw ConfigError("dimension must be between 1 and 6");
    if (p_max < 1)
        throw ConfigError("p_max must be at least 1");
    if (!(m_ref.value > 0.0))
        throw ConfigError("m_ref must be positive");
    if (budget < (std::size_t{1} << d) + 1)
        throw ConfigError("budget must cover the 2^d corners and the centre");
    if (!(tolerance >= 0.0))
        throw ConfigError("tolerance must be non-negative");
    if (n_mc_local < 1)
        throw ConfigError("n_mc_local must be positive");
}

SurrogateModel::SurrogateModel(const BuildConfig& config, int d)
    : config_(config)
    , samples_(d)
    , tri_(Triangulation::unit_cube(d))
    , estimates_(config.estimator)
    , start_(std::chrono::steady_clock::now())
{
}

void SurrogateModel::append_sample(PointView x, const Evaluation& e, double prediction)
{
    samples_.add(x, e.value, e.label);
    predictions_.push_back(prediction);
}

SurrogateModel SurrogateModel::initialize(const Oracle& oracle, const BuildConfig& config)
{
    const int d = oracle.dimension();
    config.validate(d);
    SurrogateModel m(config, d);
    const int corners = 1 << d;
    for (int k = 0; k < corners; ++k) {
        const auto x = m.tri_.point(k);
        const Evaluation e = oracle.evaluate(x);
        m.append_sample(x, e, e.value);
    }
    // The centre lies on the main diagonal shared by every corner simplex, so
    // the corner interpolant predicts the mean of the two diagonal ends.
    const Point center(d, 0.5);
    const double pred = 0.5 * (m.samples_.value(0) + m.samples_.value(corners - 1));
    m.append_sample(center, oracle.evaluate(center), pred);
    m.tri_.insert(center);
    m.refit(m.tri_.alive_simplices());
    m.record_log();
    return m;
}

SurrogateModel SurrogateModel::from_samples(const BuildConfig& config, const SampleSet& samples,
                                            std::span<const double> parent_predictions)
{
    const int d = samples.dimension();
    config.validate(d);
    const std::size_t corners = std::size_t{1} << d;
    if (samples.size() < corners + 1 || parent_predictions.size() != samples.size())
        throw ConfigError("stored model must hold the corners, the centre and one prediction per sample");
    SurrogateModel m(config, d);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto x = samples.point(static_cast<int>(i));
        if (i < corners) {
            if (squared_distance(x, m.tri_.point(static_cast<int>(i))) != 0.0)
                throw ConfigError("stored samples do not start with the cube corners");
        } else {
            m.tri_.insert(x);
        }
        m.append_sample(x, {samples.value(static_cast<int>(i)), samples.label(static_cast<int>(i))},
                        parent_predictions[i]);
    }
    m.refit(m.tri_.alive_simplices());
    m.record_log();
    return m;
}

const LocalSurrogate& SurrogateModel::surrogate(int simplex) const
{
    if (simplex < 0 || simplex >= static_cast<int>(surrogates_.size()) || !surrogates_[simplex])
        throw std::out_of_range("no surrogate for simplex " + std::to_string(simplex));
    return *surrogates_[simplex];
}

double SurrogateModel::hierarchical_error(int i) const
{
    return std::abs(samples_.value(i) - predictions_[i]);
}

double SurrogateModel::estimate(int id, const LocalSurrogate& local) const
{
    const auto& s = tri_.simplex(id);
    switch (config_.estimator) {
    case EstimatorPolicy::last_point: {
        const int newest = *std::max_element(s.vertices.begin(), s.vertices.end());
        return estimate_last_point(s.volume, hierarchical_error(newest));
    }
    case EstimatorPolicy::mc_l1: {
        const auto verts = tri_.vertex_points(id);
        const auto lower = lower_degree_comparator(local, s, samples_);
        Rng rng = derive_rng(config_.seed, {estimator_stream, static_cast<std::uint64_t>(id)});
        return estimate_mc_l1(verts, s.volume, local, lower, config_.n_mc_local, rng);
    }
    case EstimatorPolicy::volume_order:
        return estimate_volume_order(s.volume, local.degree(), dimension());
    }
    return 0.0;
}

void SurrogateModel::refit(const std::vector<int>& ids)
{
    if (surrogates_.size() < tri_.simplex_table_size())
        surrogates_.resize(tri_.simplex_table_size());
    const SurrogateOptions options{config_.p_max, config_.mode, config_.lec};
    for (int id : ids) {
        LocalSurrogate local;
        try {
            local = build_local_surrogate(id, tri_, samples_, options);
        } catch (const MoreThanTwoRegions&) {
            local = linear_vertex_surrogate(id, tri_, samples_);
            local.pending_refinement = true;
        } catch (const InsufficientPoints&) {
            local = linear_vertex_surrogate(id, tri_, samples_);
            local.fallback_linear = true;
        }
        estimates_.set(id, estimate(id, local));
        surrogates_[id] = std::move(local);
    }
}

void SurrogateModel::record_log()
{
    log_.push_back({step_, samples_.size(), tri_.simplex_count(), aggregate(), elapsed_s(start_)});
}

bool SurrogateModel::is_boundary_simplex(int simplex) const
{
    const auto& s = tri_.simplex(simplex);
    const int d = dimension();
    for (int skip = 0; skip <= d; ++skip) {
        for (int k = 0; k < d; ++k) {
            for (double pin : {0.0, 1.0}) {
                bool all = true;
                for (int i = 0; i <= d && all; ++i)
                    if (i != skip && samples_.point(s.vertices[i])[k] != pin)
                        all = false;
                if (all)
                    return true;
            }
        }
    }
    return false;
}

Point SurrogateModel::place_new_point(int simplex, Rng& rng, std::span<const Point> reserved) const
{
    const auto& s = tri_.simplex(simplex);
    const int d = dimension();
    const bool boundary = is_boundary_simplex(simplex);

    int a = -1;
    int b = -1;
    std::vector<Point> sub;
    if (boundary) {
        std::vector<int> verts(s.vertices);
        std::sort(verts.begin(), verts.end());
        double best = -1.0;
        for (int i = 0; i <= d; ++i)
            for (int j = i + 1; j <= d; ++j) {
                const double len = squared_distance(samples_.point(verts[i]), samples_.point(verts[j]));
                if (len > best) {
                    best = len;
                    a = verts[i];
                    b = verts[j];
                }
            }
    } else {
        sub = subsimplex(tri_.vertex_points(simplex));
    }

    auto coincident = [&](const Point& x) {
        constexpr double tol2 = Triangulation::coincidence_tol * Triangulation::coincidence_tol;
        for (std::size_t i = 0; i < samples_.size(); ++i)
            if (squared_distance(x, samples_.point(static_cast<int>(i))) <= tol2)
                return true;
        for (const auto& r : reserved)
            if (squared_distance(x, r) <= tol2)
                return true;
        return false;
    };

    for (int attempt = 0; attempt < placement_retries; ++attempt) {
        Point x;
        if (boundary) {
            const double t = (1.0 + uniform_open01(rng)) / 3.0;
            const auto x0 = samples_.point(a);
            const auto x1 = samples_.point(b);
            x.resize(d);
            for (int k = 0; k < d; ++k)
                x[k] = std::clamp(x0[k] + t * (x1[k] - x0[k]), 0.0, 1.0);
        } else {
            x = sample_in_simplex(sub, rng);
        }
        if (!coincident(x))
            return x;
    }
    throw PlacementFailure("no admissible new point in simplex " + std::to_string(simplex));
}

std::size_t SurrogateModel::refine_step(const Oracle& oracle)
{
    const std::size_t n = samples_.size();
    if (n >= config_.budget)
        throw BudgetExhausted("oracle budget of " + std::to_string(config_.budget) + " reached");
    ++step_;

    std::vector<int> candidates;
    for (int id : tri_.alive_simplices())
        if (!unrefinable_.count(id))
            candidates.push_back(id);
    std::sort(candidates.begin(), candidates.end(), [&](int x, int y) {
        const bool px = surrogates_[x]->pending_refinement;
        const bool py = surrogates_[y]->pending_refinement;
        if (px != py)
            return px;
        const double ex = estimates_.get(x);
        const double ey = estimates_.get(y);
        if (ex != ey)
            return ex > ey;
        return x < y;
    });

    const std::size_t want = std::min(config_.m_ref.resolve(n), config_.budget - n);
    Rng rng = derive_rng(config_.seed, {placement_stream, static_cast<std::uint64_t>(step_)});
    std::vector<Point> batch;
    std::vector<double> preds;
    for (int id : candidates) {
        if (batch.size() >= want)
            break;
        try {
            Point x = place_new_point(id, rng, batch);
            preds.push_back((*surrogates_[id])(x));
            batch.push_back(std::move(x));
        } catch (const PlacementFailure&) {
            unrefinable_.insert(id);
        }
    }

    std::vector<Evaluation> evals;
    evals.reserve(batch.size());
    for (const auto& x : batch)
        evals.push_back(oracle.evaluate(x));

    const auto old_alive = tri_.alive_simplices();
    std::set<int> created;
    for (std::size_t k = 0; k < batch.size(); ++k) {
        append_sample(batch[k], evals[k], preds[k]);
        const auto res = tri_.insert(batch[k]);
        for (int r : res.removed) {
            created.erase(r);
            estimates_.erase(r);
            if (r < static_cast<int>(surrogates_.size()))
                surrogates_[r].reset();
            unrefinable_.erase(r);
        }
        created.insert(res.created.begin(), res.created.end());
    }

    // Surviving simplices whose stencil would admit one of the new points.
    const int first_new = static_cast<int>(n);
    std::vector<int> to_fit(created.begin(), created.end());
    for (int id : old_alive) {
        if (!tri_.simplex(id).alive)
            continue;
        const auto& local = *surrogates_[id];
        const auto& centroid = tri_.simplex(id).centroid;
        bool changed = local.fallback_linear || local.pending_refinement;
        for (std::size_t sd = 0; sd < local.sides.size() && !changed; ++sd) {
            const auto& side = local.sides[sd];
            if (side.radius < 0.0)
                continue;
            for (int i = first_new; i < static_cast<int>(samples_.size()) && !changed; ++i) {
                if (side.stencil.region && samples_.label(i) != *side.stencil.region)
                    continue;
                if (std::sqrt(squared_distance(samples_.point(i), centroid)) <= side.radius)
                    changed = true;
            }
        }
        if (changed)
            to_fit.push_back(id);
    }
    std::sort(to_fit.begin(), to_fit.end());
    refit(to_fit);
    record_log();
    return batch.size();
}

void SurrogateModel::build_locator() const
{
    const int d = dimension();
    const double m = static_cast<double>(tri_.simplex_count());
    int k = std::max(1, static_cast<int>(std::floor(std::pow(m / 2.0, 1.0 / d))));
    while (std::pow(static_cast<double>(k), d) > (1 << 20))
        --k;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i)
        total *= static_cast<std::size_t>(k);
    locator_.cells = k;
    locator_.hints.assign(total, -1);
    Point c(d);
    int hint = -1;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        for (int i = 0; i < d; ++i) {
            c[i] = (static_cast<double>(r % k) + 0.5) / k;
            r /= k;
        }
        hint = tri_.locate(c, hint);
        locator_.hints[idx] = hint;
    }
    locator_.generation = tri_.generation();
}

int SurrogateModel::locate(PointView x) const
{
    if (locator_.generation != tri_.generation())
        build_locator();
    const int d = dimension();
    const int k = locator_.cells;
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (int i = 0; i < d; ++i) {
        const int c = std::clamp(static_cast<int>(x[i] * k), 0, k - 1);
        idx += static_cast<std::size_t>(c) * stride;
        stride *= static_cast<std::size_t>(k);
    }
    return tri_.locate(x, locator_.hints[idx]);
}

double SurrogateModel::operator()(PointView x) const
{
    return surrogate(locate(x))(x);
}

SurrogateModel initialize(const Oracle& oracle, const BuildConfig& config)
{
    return SurrogateModel::initialize(oracle, config);
}

std::size_t refine_step(SurrogateModel& model, const Oracle& oracle)
{
    return model.refine_step(oracle);
}

SurrogateModel build(const Oracle& oracle, const BuildConfig& config, const BuildObserver& observer)
{
    SurrogateModel model = SurrogateModel::initialize(oracle, config);
    if (observer)
        observer(model);
    while (model.samples().size() < config.budget) {
        if (config.tolerance > 0.0 && model.aggregate() <= config.tolerance)
            break;
        if (model.refine_step(oracle) == 0)
            break;
        if (observer)
            observer(model);
    }
    return model;
}

double evaluate_model(const SurrogateModel& model, PointView x)
{
    return model(x);
}

std::string build_log_csv(const std::vector<BuildLogEntry>& log)
{
    std::ostringstream out;
    out << "step,n_samples,n_simplices,aggregate_estimate,wall_time_s\n";
    for (const auto& e : log)
        out << e.step << ',' << e.n_samples << ',' << e.n_simplices << ',' << format_real(e.aggregate) << ','
            << format_real(e.wall_time_s) << '\n';
    return out.str();
}

} // namespace ssc
