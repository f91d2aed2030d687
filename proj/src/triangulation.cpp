#include "ssc/triangulation.hpp"

#include "ssc/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_set>

namespace ssc {

namespace {

// Barycentric coordinate below which a new simplex is considered flat.
constexpr double orientation_tol = 1e-11;

std::vector<int> facet_key(const std::vector<int>& vertices, std::size_t skip)
{
    std::vector<int> key;
    key.reserve(vertices.size() - 1);
    for (std::size_t k = 0; k < vertices.size(); ++k)
        if (k != skip)
            key.push_back(vertices[k]);
    std::sort(key.begin(), key.end());
    return key;
}

} // namespace

Triangulation::Triangulation(int d)
    : dim_(d)
{
}

Triangulation Triangulation::unit_cube(int d)
{
    if (d < 1 || d > max_dimension)
        throw std::invalid_argument("dimension must be between 1 and 6");
    Triangulation tri(d);
    const int corners = 1 << d;
    tri.coords_.resize(static_cast<std::size_t>(corners) * d);
    for (int k = 0; k < corners; ++k)
        for (int i = 0; i < d; ++i)
            tri.coords_[static_cast<std::size_t>(k) * d + i] = (k >> i) & 1;

    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<int> verts{0};
        int v = 0;
        for (int axis : perm) {
            v |= 1 << axis;
            verts.push_back(v);
        }
        tri.add_simplex(std::move(verts));
    } while (std::next_permutation(perm.begin(), perm.end()));
    tri.link_all();
    return tri;
}

int Triangulation::add_simplex(std::vector<int> vertices)
{
    const int d = dim_;
    auto build_edges = [&](const std::vector<int>& v) {
        Eigen::MatrixXd e(d, d);
        for (int c = 0; c < d; ++c)
            for (int r = 0; r < d; ++r)
                e(r, c) = point(v[c + 1])[r] - point(v[0])[r];
        return e;
    };
    Eigen::MatrixXd e = build_edges(vertices);
    double det = e.determinant();
    if (det < 0.0) {
        std::swap(vertices[0], vertices[1]);
        e = build_edges(vertices);
        det = -det;
    }

    SimplexRecord s;
    s.vertices = std::move(vertices);
    s.neighbors.assign(d + 1, -1);
    double fact = 1.0;
    for (int i = 2; i <= d; ++i)
        fact *= i;
    s.volume = det / fact;

    s.centroid.assign(d, 0.0);
    for (int v : s.vertices)
        for (int k = 0; k < d; ++k)
            s.centroid[k] += point(v)[k];
    for (auto& c : s.centroid)
        c /= d + 1;

    const Eigen::MatrixXd inv = e.inverse();
    s.inverse_edges.resize(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            s.inverse_edges[static_cast<std::size_t>(r) * d + c] = inv(r, c);

    // Circumcentre c = x_0 + E^{-T} b with b_i = |x_i - x_0|^2 / 2.
    Eigen::VectorXd b(d);
    for (int i = 0; i < d; ++i)
        b(i) = 0.5 * e.col(i).squaredNorm();
    const Eigen::VectorXd offset = inv.transpose() * b;
    s.circumcenter.resize(d);
    for (int k = 0; k < d; ++k)
        s.circumcenter[k] = point(s.vertices[0])[k] + offset(k);
    s.circumradius2 = offset.squaredNorm();

    simplices_.push_back(std::move(s));
    ++alive_count_;
    last_created_ = static_cast<int>(simplices_.size()) - 1;
    return last_created_;
}

void Triangulation::link_all()
{
    std::map<std::vector<int>, std::pair<int, int>> open;
    for (int id = 0; id < static_cast<int>(simplices_.size()); ++id) {
        auto& s = simplices_[id];
        if (!s.alive)
            continue;
        for (std::size_t j = 0; j < s.vertices.size(); ++j) {
            auto key = facet_key(s.vertices, j);
            auto it = open.find(key);
            if (it == open.end()) {
                open.emplace(std::move(key), std::make_pair(id, static_cast<int>(j)));
            } else {
                s.neighbors[j] = it->second.first;
                simplices_[it->second.first].neighbors[it->second.second] = id;
                open.erase(it);
            }
        }
    }
}

std::vector<double> Triangulation::barycentric(int id, PointView x) const
{
    std::vector<double> lam(dim_ + 1);
    barycentric_into(id, x, lam.data());
    return lam;
}

void Triangulation::barycentric_into(int id, PointView x, double* lam) const
{
    const auto& s = simplices_[id];
    const int d = dim_;
    const PointView x0 = point(s.vertices[0]);
    double sum = 0.0;
    for (int r = 0; r < d; ++r) {
        double acc = 0.0;
        for (int c = 0; c < d; ++c)
            acc += s.inverse_edges[static_cast<std::size_t>(r) * d + c] * (x[c] - x0[c]);
        lam[r + 1] = acc;
        sum += acc;
    }
    lam[0] = 1.0 - sum;
}

bool Triangulation::in_circumsphere(const SimplexRecord& s, PointView p) const
{
    const double dist2 = squared_distance(s.circumcenter, p);
    return dist2 < s.circumradius2 * (1.0 - insphere_tol);
}

int Triangulation::walk(PointView x, int start) const
{
    int cur = start;
    if (cur < 0 || cur >= static_cast<int>(simplices_.size()) || !simplices_[cur].alive)
        cur = last_created_;
    if (cur < 0 || !simplices_[cur].alive) {
        cur = -1;
        for (int id = 0; id < static_cast<int>(simplices_.size()); ++id)
            if (simplices_[id].alive) {
                cur = id;
                break;
            }
    }
    if (cur < 0)
        return -1;

    const std::size_t limit = 64 + 4 * alive_count_;
    std::array<double, max_dimension + 1> lam{};
    std::array<int, max_dimension + 1> order{};
    const auto nv = static_cast<std::ptrdiff_t>(dim_ + 1);
    for (std::size_t step = 0; step < limit; ++step) {
        barycentric_into(cur, x, lam.data());
        std::iota(order.begin(), order.begin() + nv, 0);
        std::sort(order.begin(), order.begin() + nv, [&](int a, int b) { return lam[a] < lam[b]; });
        if (lam[order[0]] >= -containment_tol)
            return cur;
        int next = -1;
        for (std::ptrdiff_t k = 0; k < nv; ++k) {
            const int i = order[k];
            if (lam[i] >= -containment_tol)
                break;
            if (simplices_[cur].neighbors[i] >= 0) {
                next = simplices_[cur].neighbors[i];
                break;
            }
        }
        if (next < 0)
            return -1;
        cur = next;
    }

    // The walk cycled; fall back to a scan.
    int best = -1;
    double best_min = -std::numeric_limits<double>::infinity();
    for (int id = 0; id < static_cast<int>(simplices_.size()); ++id) {
        if (!simplices_[id].alive)
            continue;
        const auto lam = barycentric(id, x);
        const double m = *std::min_element(lam.begin(), lam.end());
        if (m > best_min) {
            best_min = m;
            best = id;
        }
    }
    return best_min >= -containment_tol ? best : -1;
}

int Triangulation::smallest_containing(PointView x, int found) const
{
    auto on_face = [&](const std::vector<double>& lam) {
        return std::any_of(lam.begin(), lam.end(), [](double l) { return l <= containment_tol; });
    };
    auto lam = barycentric(found, x);
    if (!on_face(lam))
        return found;

    int best = found;
    std::unordered_set<int> seen{found};
    std::deque<std::pair<int, std::vector<double>>> queue;
    queue.emplace_back(found, std::move(lam));
    while (!queue.empty()) {
        auto [id, l] = std::move(queue.front());
        queue.pop_front();
        best = std::min(best, id);
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (l[i] > containment_tol)
                continue;
            const int nb = simplices_[id].neighbors[i];
            if (nb < 0 || !seen.insert(nb).second)
                continue;
            auto nl = barycentric(nb, x);
            if (*std::min_element(nl.begin(), nl.end()) >= -containment_tol)
                queue.emplace_back(nb, std::move(nl));
        }
    }
    return best;
}

int Triangulation::locate(PointView x, int hint) const
{
    const int found = walk(x, hint);
    if (found < 0)
        throw PointLocationFailure("point is outside the triangulated domain");
    return smallest_containing(x, found);
}

InsertionResult Triangulation::insert(PointView p)
{
    if (static_cast<int>(p.size()) != dim_)
        throw std::invalid_argument("point dimension mismatch");
    for (double c : p)
        if (!std::isfinite(c) || c < -containment_tol || c > 1.0 + containment_tol)
            throw DegeneratePoint("point outside the unit cube");
    const std::size_t n = point_count();
    for (std::size_t i = 0; i < n; ++i)
        if (squared_distance(point(static_cast<int>(i)), p) <= coincidence_tol * coincidence_tol)
            throw DegeneratePoint("point coincides with an existing sample");

    const int start = walk(p, last_created_);
    if (start < 0)
        throw DegeneratePoint("point could not be located");

    // Conflict region: connected set of simplices whose circumsphere holds p.
    std::unordered_set<int> in_cavity{start};
    std::vector<int> cavity{start};
    for (std::size_t k = 0; k < cavity.size(); ++k) {
        for (int nb : simplices_[cavity[k]].neighbors) {
            if (nb < 0 || in_cavity.count(nb))
                continue;
            if (in_circumsphere(simplices_[nb], p)) {
                in_cavity.insert(nb);
                cavity.push_back(nb);
            }
        }
    }

    // Grow the cavity until every boundary facet sees p strictly on its inner
    // side; facets on the hull that contain p are dropped.
    struct Facet {
        int simplex;
        int opposite;
    };
    std::vector<Facet> boundary;
    for (std::size_t round = 0;; ++round) {
        if (round > simplices_.size())
            throw PredicateFailure("cavity repair did not terminate");
        boundary.clear();
        bool grown = false;
        for (std::size_t k = 0; k < cavity.size() && !grown; ++k) {
            const int sid = cavity[k];
            const auto lam = barycentric(sid, p);
            const auto& s = simplices_[sid];
            for (std::size_t i = 0; i < s.neighbors.size(); ++i) {
                const int nb = s.neighbors[i];
                if (nb >= 0 && in_cavity.count(nb))
                    continue;
                if (lam[i] > orientation_tol) {
                    boundary.push_back({sid, static_cast<int>(i)});
                } else if (nb < 0) {
                    if (lam[i] < -orientation_tol)
                        throw PredicateFailure("point lies beyond a hull facet");
                } else {
                    in_cavity.insert(nb);
                    cavity.push_back(nb);
                    grown = true;
                    break;
                }
            }
        }
        if (!grown)
            break;
    }
    if (boundary.empty())
        throw PredicateFailure("empty cavity boundary");

    const int v = static_cast<int>(n);
    coords_.insert(coords_.end(), p.begin(), p.end());

    InsertionResult result;
    result.vertex = v;
    std::map<std::vector<int>, std::pair<int, int>> open;
    for (const auto& f : boundary) {
        const SimplexRecord& old = simplices_[f.simplex];
        std::vector<int> verts = old.vertices;
        const int outside = old.neighbors[f.opposite];
        verts[f.opposite] = v;
        const int id = add_simplex(std::move(verts));
        auto& created = simplices_[id];
        // add_simplex may have swapped the first two vertices to fix orientation.
        const auto slot = static_cast<std::size_t>(
            std::find(created.vertices.begin(), created.vertices.end(), v) - created.vertices.begin());
        created.neighbors[slot] = outside;
        if (outside >= 0) {
            auto& nbs = simplices_[outside].neighbors;
            std::replace(nbs.begin(), nbs.end(), f.simplex, id);
        }
        for (std::size_t j = 0; j < created.vertices.size(); ++j) {
            if (j == slot)
                continue;
            auto key = facet_key(created.vertices, j);
            auto it = open.find(key);
            if (it == open.end()) {
                open.emplace(std::move(key), std::make_pair(id, static_cast<int>(j)));
            } else {
                created.neighbors[j] = it->second.first;
                simplices_[it->second.first].neighbors[it->second.second] = id;
                open.erase(it);
            }
        }
        result.created.push_back(id);
    }
    for (int sid : cavity) {
        simplices_[sid].alive = false;
        --alive_count_;
        result.removed.push_back(sid);
    }
    ++generation_;
    return result;
}

std::vector<int> Triangulation::alive_simplices() const
{
    std::vector<int> out;
    out.reserve(alive_count_);
    for (int id = 0; id < static_cast<int>(simplices_.size()); ++id)
        if (simplices_[id].alive)
            out.push_back(id);
    return out;
}

std::vector<Point> Triangulation::vertex_points(int id) const
{
    std::vector<Point> out;
    for (int v : simplices_[id].vertices) {
        const auto p = point(v);
        out.emplace_back(p.begin(), p.end());
    }
    return out;
}

double Triangulation::total_volume() const
{
    double sum = 0.0;
    for (const auto& s : simplices_)
        if (s.alive)
            sum += s.volume;
    return sum;
}

} // namespace ssc
