#pragma once

// Boundary geometry of two-parameter families: envelopes of lines (which
// simplex vertices a family reaches) and the polygon of attainable
// sufficient statistics conv{X^T t : t in {0,1}^N} for two-column designs.

#include "lrgeo/numerics.hpp"

#include <array>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrgeo {

/// theta -> slope * theta + intercept, one line per simplex cell.
struct Line {
    double slope;
    double intercept;
};

class LineFamily {
public:
    explicit LineFamily(std::vector<Line> lines);
    const std::vector<Line>& lines() const noexcept { return lines_; }
    std::size_t size() const noexcept { return lines_.size(); }

private:
    std::vector<Line> lines_;
};

struct EnvelopePiece {
    std::size_t line;
    double from;  // -inf for the first piece
    double to;    // +inf for the last piece
};

struct EnvelopeResult {
    std::vector<EnvelopePiece> upper;  // increasing slope
    std::vector<EnvelopePiece> lower;  // decreasing slope
    std::set<std::size_t> upper_members;
    std::set<std::size_t> lower_members;
    std::set<std::size_t> redundant;
};

/// Upper and lower envelopes. A line is a member when it attains the
/// max (min) on an interval of positive length; coincident lines are all
/// members, and the piece lists carry the lowest index among them.
EnvelopeResult envelope_of_lines(const LineFamily& family);

/// Cells reachable as limits along some direction: union of envelope members.
std::set<std::size_t> connected_vertices(const LineFamily& family);

class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

using Point2 = std::array<double, 2>;

struct SuffStatPolytope {
    std::vector<Point2> vertices;                  // counterclockwise
    std::vector<std::vector<int>> vertex_patterns;  // t in {0,1}^N attaining each vertex

    std::size_t size() const noexcept { return vertices.size(); }
    /// Edge e joins vertices[e] and vertices[(e + 1) % size()].
    std::pair<std::size_t, std::size_t> edge(std::size_t e) const { return {e, (e + 1) % size()}; }
    double signed_area() const noexcept;
};

/// Vertices of the zonotope sum_i [0, x_i] for a two-column design.
/// Generators are walked in angle order; collinear rows are merged and
/// zero rows are dropped. Each vertex is computed as X^T(pattern) directly.
SuffStatPolytope suffstat_polytope_2d(const Matrix& x);

struct BoundaryPoint {
    double dist_sq;
    Point2 closest;
    std::size_t edge;  // index into the polytope's edge list
    double lambda;     // closest = v_a + lambda (v_b - v_a)
};

class CenterOutside : public std::domain_error {
public:
    CenterOutside(std::size_t edge, double signed_margin);
    std::size_t edge() const noexcept { return edge_; }
    double dist_sq() const noexcept { return 0.0; }
    double signed_margin() const noexcept { return margin_; }

private:
    std::size_t edge_;
    double margin_;
};

/// Minimum over edges of (v - center)^T M (v - center). Throws
/// CenterOutside when the center is not strictly inside the polygon.
BoundaryPoint min_mahalanobis_to_polytope_boundary(const SuffStatPolytope& polytope,
                                                   const Point2& center,
                                                   const SymmetricMatrix& metric);

}  // namespace lrgeo
