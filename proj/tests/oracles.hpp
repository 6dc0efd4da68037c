#pragma once

// Brute-force reference computations used by the unit and acceptance
// tests. None of these call into the code paths they are used to check.

#include "lrgeo/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using P2 = std::array<double, 2>;

inline double cross(const P2& o, const P2& a, const P2& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Strict extreme points of a planar point set (Andrew's monotone chain;
/// collinear boundary points dropped), counterclockwise.
inline std::vector<P2> convex_hull(std::vector<P2> pts, double tol = 1e-9) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](const P2& a, const P2& b) {
                              return std::abs(a[0] - b[0]) <= tol && std::abs(a[1] - b[1]) <= tol;
                          }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<P2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= tol) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= tol) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

/// All 2^N points X^T t for a two-column design.
inline std::vector<P2> all_suffstats(const lrgeo::Matrix& x) {
    const std::size_t n = x.rows();
    std::vector<P2> out;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        P2 s{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1ULL) {
                s[0] += x(i, 0);
                s[1] += x(i, 1);
            }
        out.push_back(s);
    }
    return out;
}

/// Directional search for a recession direction of a two-column design:
/// a uniform grid of `grid` unit directions plus the two unit normals of
/// every row (the extreme rays of the recession cone in the plane lie on
/// those normals). Accepts gamma when every (2t_i - 1) x_i^T gamma >= -tol
/// and at least one exceeds +tol.
inline bool separated_by_search(const lrgeo::Matrix& x, const std::vector<int>& t,
                                std::size_t grid = 10000, double tol = 1e-9) {
    std::vector<P2> dirs;
    dirs.reserve(grid + 2 * x.rows());
    for (std::size_t k = 0; k < grid; ++k) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid);
        dirs.push_back({std::cos(a), std::sin(a)});
    }
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double len = std::hypot(x(i, 0), x(i, 1));
        if (len == 0.0) continue;
        dirs.push_back({-x(i, 1) / len, x(i, 0) / len});
        dirs.push_back({x(i, 1) / len, -x(i, 0) / len});
    }
    for (const auto& g : dirs) {
        bool feasible = true;
        bool strict = false;
        for (std::size_t i = 0; i < x.rows() && feasible; ++i) {
            const double s = (t[i] ? 1.0 : -1.0) * (x(i, 0) * g[0] + x(i, 1) * g[1]);
            if (s < -tol) feasible = false;
            if (s > tol) strict = true;
        }
        if (feasible && strict) return true;
    }
    return false;
}

inline double logistic(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

/// Exact probability that a response vector drawn under beta is separated,
/// by enumerating all 2^N outcomes.
inline double exact_boundary_probability(const lrgeo::Matrix& x, const std::vector<double>& beta) {
    const std::size_t n = x.rows();
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = logistic(x(i, 0) * beta[0] + x(i, 1) * beta[1]);
    double total = 0.0;
    std::vector<int> t(n);
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        double prob = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = static_cast<int>(mask >> i & 1ULL);
            prob *= t[i] ? p[i] : 1.0 - p[i];
        }
        if (separated_by_search(x, t, 720)) total += prob;
    }
    return total;
}

/// Minimizes sum_i (q_i - base_i)^2 / base_i over the simplex face where the
/// cells in `zeroed` vanish, by projected gradient descent.
inline double face_qp(const std::vector<double>& base, const std::vector<std::size_t>& zeroed,
                      int iterations = 20000) {
    const std::size_t n = base.size();
    std::vector<bool> fixed(n, false);
    for (std::size_t i : zeroed) fixed[i] = true;
    std::vector<std::size_t> free_cells;
    for (std::size_t i = 0; i < n; ++i)
        if (!fixed[i]) free_cells.push_back(i);

    auto project = [&](std::vector<double>& q) {
        // Euclidean projection of the free cells onto {q >= 0, sum = 1}.
        std::vector<double> v;
        for (std::size_t i : free_cells) v.push_back(q[i]);
        std::vector<double> s = v;
        std::sort(s.begin(), s.end(), std::greater<>());
        double cum = 0.0;
        double theta = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            cum += s[j];
            const double th = (cum - 1.0) / static_cast<double>(j + 1);
            if (s[j] - th > 0.0) theta = th;
        }
        for (std::size_t j = 0; j < free_cells.size(); ++j) q[free_cells[j]] = std::max(v[j] - theta, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (fixed[i]) q[i] = 0.0;
    };
    auto objective = [&](const std::vector<double>& q) {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) f += (q[i] - base[i]) * (q[i] - base[i]) / base[i];
        return f;
    };

    std::vector<double> q(n, 0.0);
    for (std::size_t i : free_cells) q[i] = 1.0 / static_cast<double>(free_cells.size());
    const double min_base = *std::min_element(base.begin(), base.end());
    const double step = 0.5 * min_base;  // 1 / Lipschitz constant of the gradient
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i : free_cells) q[i] -= step * 2.0 * (q[i] - base[i]) / base[i];
        project(q);
    }
    return objective(q);
}

}  // namespace oracle
