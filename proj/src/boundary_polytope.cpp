#include "lrgeo/boundary_polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lrgeo {

LineFamily::LineFamily(std::vector<Line> lines) : lines_(std::move(lines)) {
    if (lines_.size() < 2) throw std::invalid_argument("LineFamily: need at least two lines");
    for (const auto& l : lines_)
        if (!std::isfinite(l.slope) || !std::isfinite(l.intercept))
            throw std::invalid_argument("LineFamily: non-finite line");
}

namespace {

struct UpperHull {
    std::vector<EnvelopePiece> pieces;
    std::set<std::size_t> members;
};

// Upper envelope of max_i (s_i theta + b_i); indices refer to `lines`.
UpperHull upper_envelope(const std::vector<Line>& lines) {
    std::vector<std::size_t> order(lines.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (lines[i].slope != lines[j].slope) return lines[i].slope < lines[j].slope;
        return lines[i].intercept > lines[j].intercept;
    });

    // One representative per slope (the highest); remember exact duplicates.
    std::vector<std::size_t> reps;
    std::vector<std::vector<std::size_t>> twins;
    for (std::size_t idx : order) {
        if (!reps.empty() && lines[reps.back()].slope == lines[idx].slope) {
            if (lines[reps.back()].intercept == lines[idx].intercept) twins.back().push_back(idx);
            continue;
        }
        reps.push_back(idx);
        twins.push_back({idx});
    }

    // Line m is hidden between l and r (slopes s_l < s_m < s_r) when r
    // overtakes l no later than m does:
    //   (b_l - b_r)(s_m - s_l) <= (b_l - b_m)(s_r - s_l).
    auto hidden = [&](std::size_t l, std::size_t m, std::size_t r) {
        const Line& a = lines[l];
        const Line& b = lines[m];
        const Line& c = lines[r];
        return (a.intercept - c.intercept) * (b.slope - a.slope) <=
               (a.intercept - b.intercept) * (c.slope - a.slope);
    };

    std::vector<std::size_t> hull;  // positions into reps
    for (std::size_t pos = 0; pos < reps.size(); ++pos) {
        while (hull.size() >= 2 && hidden(reps[hull[hull.size() - 2]], reps[hull.back()], reps[pos]))
            hull.pop_back();
        hull.push_back(pos);
    }

    UpperHull out;
    double from = -std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < hull.size(); ++h) {
        const Line& cur = lines[reps[hull[h]]];
        double to = std::numeric_limits<double>::infinity();
        if (h + 1 < hull.size()) {
            const Line& nxt = lines[reps[hull[h + 1]]];
            to = (cur.intercept - nxt.intercept) / (nxt.slope - cur.slope);
        }
        out.pieces.push_back({*std::min_element(twins[hull[h]].begin(), twins[hull[h]].end()), from, to});
        out.members.insert(twins[hull[h]].begin(), twins[hull[h]].end());
        from = to;
    }
    return out;
}

}  // namespace

EnvelopeResult envelope_of_lines(const LineFamily& family) {
    EnvelopeResult out;
    UpperHull up = upper_envelope(family.lines());

    std::vector<Line> negated;
    negated.reserve(family.size());
    for (const auto& l : family.lines()) negated.push_back({-l.slope, -l.intercept});
    UpperHull down = upper_envelope(negated);

    out.upper = std::move(up.pieces);
    out.upper_members = std::move(up.members);
    out.lower = std::move(down.pieces);
    out.lower_members = std::move(down.members);
    for (std::size_t i = 0; i < family.size(); ++i)
        if (!out.upper_members.contains(i) && !out.lower_members.contains(i)) out.redundant.insert(i);
    return out;
}

std::set<std::size_t> connected_vertices(const LineFamily& family) {
    const EnvelopeResult env = envelope_of_lines(family);
    std::set<std::size_t> out = env.upper_members;
    out.insert(env.lower_members.begin(), env.lower_members.end());
    return out;
}

double SuffStatPolytope::signed_area() const noexcept {
    double a = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const auto& p = vertices[i];
        const auto& q = vertices[(i + 1) % vertices.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

namespace {

double cross(const Point2& a, const Point2& b) { return a[0] * b[1] - a[1] * b[0]; }

}  // namespace

SuffStatPolytope suffstat_polytope_2d(const Matrix& x) {
    if (x.cols() != 2)
        throw DimensionError("suffstat_polytope_2d needs a two-column design, got " +
                             std::to_string(x.cols()));
    const std::size_t n = x.rows();

    // Flip every generator into the half-plane of angles [0, pi). A flipped
    // segment [0, g] = g + [0, -g] starts from its far end, so the walk
    // starts with those rows switched on.
    struct Generator {
        Point2 dir;
        std::size_t row;
    };
    std::vector<Generator> gens;
    std::vector<int> start(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        Point2 g{x(i, 0), x(i, 1)};
        if (g[0] == 0.0 && g[1] == 0.0) continue;
        if (g[1] < 0.0 || (g[1] == 0.0 && g[0] < 0.0)) {
            g = {-g[0], -g[1]};
            start[i] = 1;
        }
        gens.push_back({g, i});
    }

    std::stable_sort(gens.begin(), gens.end(), [](const Generator& a, const Generator& b) {
        return std::atan2(a.dir[1], a.dir[0]) < std::atan2(b.dir[1], b.dir[0]);
    });

    // Merge collinear neighbours.
    std::vector<std::vector<std::size_t>> groups;
    Point2 last{0.0, 0.0};
    for (const auto& g : gens) {
        const double len = std::hypot(g.dir[0], g.dir[1]) * std::hypot(last[0], last[1]);
        if (!groups.empty() && std::abs(cross(last, g.dir)) <= 1e-12 * len) {
            groups.back().push_back(g.row);
        } else {
            groups.push_back({g.row});
        }
        last = g.dir;
    }

    SuffStatPolytope out;
    auto emit = [&](const std::vector<int>& pattern) {
        Point2 v{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            if (pattern[i]) {
                v[0] += x(i, 0);
                v[1] += x(i, 1);
            }
        out.vertices.push_back(v);
        out.vertex_patterns.push_back(pattern);
    };

    std::vector<int> pattern = start;
    if (groups.empty()) {
        emit(pattern);
        return out;
    }
    // Going once around toggles every group twice; the 2m patterns visited
    // before returning to the start are the vertices.
    for (int lap = 0; lap < 2; ++lap) {
        for (const auto& grp : groups) {
            emit(pattern);
            for (std::size_t row : grp) pattern[row] ^= 1;
        }
    }
    return out;
}

CenterOutside::CenterOutside(std::size_t edge, double signed_margin)
    : std::domain_error("center is on or outside the polytope boundary (edge " +
                        std::to_string(edge) + ")"),
      edge_(edge),
      margin_(signed_margin) {}

BoundaryPoint min_mahalanobis_to_polytope_boundary(const SuffStatPolytope& polytope,
                                                   const Point2& center,
                                                   const SymmetricMatrix& metric) {
    if (metric.dim() != 2) throw DimensionError("metric must be 2x2");
    cholesky(metric);  // rejects non-positive-definite metrics
    const std::size_t m = polytope.size();
    if (m < 3) throw CenterOutside(0, 0.0);

    for (std::size_t e = 0; e < m; ++e) {
        const auto [a, b] = polytope.edge(e);
        const Point2& va = polytope.vertices[a];
        const Point2& vb = polytope.vertices[b];
        const Point2 d{vb[0] - va[0], vb[1] - va[1]};
        const Point2 w{center[0] - va[0], center[1] - va[1]};
        const double c = cross(d, w);
        const double scale = std::hypot(d[0], d[1]) * (std::hypot(w[0], w[1]) + 1.0);
        if (c <= 1e-12 * scale) throw CenterOutside(e, c);
    }

    BoundaryPoint best{std::numeric_limits<double>::infinity(), {0.0, 0.0}, 0, 0.0};
    for (std::size_t e = 0; e < m; ++e) {
        const auto [a, b] = polytope.edge(e);
        const Point2& va = polytope.vertices[a];
        const Point2& vb = polytope.vertices[b];
        const Vector d{vb[0] - va[0], vb[1] - va[1]};
        const Vector w{va[0] - center[0], va[1] - center[1]};
        const double dmd = metric.quadratic_form(d);
        const Vector md = metric * std::span<const double>(d);
        double lambda = dmd > 0.0 ? -dot(md, w) / dmd : 0.0;
        lambda = std::clamp(lambda, 0.0, 1.0);
        const Vector r{w[0] + lambda * d[0], w[1] + lambda * d[1]};
        const double q = metric.quadratic_form(r);
        if (q < best.dist_sq) {
            best.dist_sq = q;
            best.closest = {va[0] + lambda * d[0], va[1] + lambda * d[1]};
            best.edge = e;
            best.lambda = lambda;
        }
    }
    return best;
}

}  // namespace lrgeo
