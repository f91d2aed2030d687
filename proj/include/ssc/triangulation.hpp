#pragma once

#include "ssc/geometry.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ssc {

/// One simplex of the triangulation together with its cached geometry.
///
/// Vertices are stored positively oriented. `neighbors[i]` is the simplex
/// sharing the facet opposite `vertices[i]`, or -1 on the hull.
struct SimplexRecord {
    std::vector<int> vertices;
    std::vector<int> neighbors;
    double volume = 0.0;
    Point centroid;
    Point circumcenter;
    double circumradius2 = 0.0;
    /// Row-major inverse of the edge matrix [x_1-x_0 | ... | x_d-x_0].
    std::vector<double> inverse_edges;
    bool alive = true;
};

/// Simplices created and destroyed by one insertion.
struct InsertionResult {
    int vertex = -1;
    std::vector<int> created;
    std::vector<int> removed;
};

/// Incremental Delaunay triangulation (Bowyer-Watson) of points in [0,1]^d.
///
/// Simplex ids are never reused; removed simplices stay in the table with
/// `alive == false`. The triangulation is seeded with the 2^d corners of the
/// unit cube, so its hull is always the cube.
class Triangulation {
public:
    /// Coincident-point tolerance (Euclidean).
    static constexpr double coincidence_tol = 1e-12;
    /// Relative tolerance of the in-sphere predicate.
    static constexpr double insphere_tol = 1e-10;
    /// Tolerance on barycentric coordinates for containment.
    static constexpr double containment_tol = 1e-12;
    static constexpr int max_dimension = 6;

    /// Kuhn triangulation of the unit-cube corners; corner k has coordinate
    /// i equal to bit i of k.
    static Triangulation unit_cube(int d);

    int dimension() const { return dim_; }
    std::size_t point_count() const { return coords_.size() / dim_; }
    PointView point(int i) const { return {coords_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)}; }

    /// Inserts p and restores the Delaunay property.
    /// Throws DegeneratePoint when p coincides with an existing point or lies
    /// outside the cube, PredicateFailure when the cavity cannot be repaired.
    InsertionResult insert(PointView p);

    /// Id of a simplex containing x. Walks from `hint` (or the most recently
    /// created simplex). On shared faces the smallest containing id wins.
    /// Throws PointLocationFailure if x is outside the hull.
    int locate(PointView x, int hint = -1) const;

    const SimplexRecord& simplex(int id) const { return simplices_[id]; }
    std::size_t simplex_table_size() const { return simplices_.size(); }
    std::size_t simplex_count() const { return alive_count_; }
    std::vector<int> alive_simplices() const;

    /// Bumped on every mutation.
    std::uint64_t generation() const { return generation_; }

    std::vector<Point> vertex_points(int id) const;
    std::vector<double> barycentric(int id, PointView x) const;
    /// Writes d+1 barycentric coordinates to `out`.
    void barycentric_into(int id, PointView x, double* out) const;
    double total_volume() const;

private:
    explicit Triangulation(int d);

    int add_simplex(std::vector<int> vertices);
    void link_all();
    int walk(PointView x, int start) const;
    int smallest_containing(PointView x, int found) const;
    bool in_circumsphere(const SimplexRecord& s, PointView p) const;

    int dim_;
    std::vector<double> coords_;
    std::vector<SimplexRecord> simplices_;
    std::size_t alive_count_ = 0;
    std::uint64_t generation_ = 0;
    int last_created_ = -1;
};

} // namespace ssc
