#include "lrgeo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lrgeo {

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Safe: return "SAFE";
        case Verdict::Marginal: return "MARGINAL";
        case Verdict::Suspect: return "SUSPECT";
    }
    return "?";
}

std::string_view to_string(DiagnosticStatus s) noexcept {
    return s == DiagnosticStatus::Separated ? "separated" : "evaluated";
}

Verdict classify(double dist_sq, double threshold, double marginal_factor) noexcept {
    if (dist_sq < threshold) return Verdict::Suspect;
    if (dist_sq < marginal_factor * threshold) return Verdict::Marginal;
    return Verdict::Safe;
}

namespace {

void evaluate_interval(const Dataset& d, DiagnosticReport& r) {
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < d.n(); ++i) {
        lo += std::min(d.x()(i, 0), 0.0);
        hi += std::max(d.x()(i, 0), 0.0);
    }
    const double mu = r.mu_hat[0];
    const double var = r.sigma_hat(0, 0);
    const double to_lo = mu - lo;
    const double to_hi = hi - mu;
    const double end = to_lo <= to_hi ? lo : hi;
    const double gap = std::min(to_lo, to_hi);
    if (!(gap > 0.0)) {
        r.boundary_contact = true;
        r.dist_sq = 0.0;
    } else {
        r.dist_sq = gap * gap / var;
    }
    r.closest_face = {{end}, {end}, {end}, to_lo <= to_hi ? 0u : 1u};
}

void evaluate_polygon(const Dataset& d, DiagnosticReport& r) {
    r.polytope = suffstat_polytope_2d(d.x());
    const Point2 center{r.mu_hat[0], r.mu_hat[1]};
    const SymmetricMatrix metric = inverse_spd(r.sigma_hat);
    const auto& poly = *r.polytope;
    try {
        const BoundaryPoint bp = min_mahalanobis_to_polytope_boundary(poly, center, metric);
        const auto [a, b] = poly.edge(bp.edge);
        r.dist_sq = bp.dist_sq;
        r.closest_face = {{poly.vertices[a][0], poly.vertices[a][1]},
                          {poly.vertices[b][0], poly.vertices[b][1]},
                          {bp.closest[0], bp.closest[1]},
                          bp.edge};
    } catch (const CenterOutside& e) {
        const auto [a, b] = poly.edge(e.edge());
        r.boundary_contact = true;
        r.dist_sq = 0.0;
        r.closest_face = {{poly.vertices[a][0], poly.vertices[a][1]},
                          {poly.vertices[b][0], poly.vertices[b][1]},
                          {center[0], center[1]},
                          e.edge()};
    }
}

}  // namespace

DiagnosticReport boundary_diagnostic(const Dataset& d, const DiagnosticOptions& opts) {
    if (d.d() != 1 && d.d() != 2)
        throw DimensionError("boundary diagnostic supports D = 1 or D = 2, got D = " +
                             std::to_string(d.d()));
    if (!(opts.level > 0.0 && opts.level < 1.0)) throw std::domain_error("level must lie in (0, 1)");

    DiagnosticReport r;
    r.level = opts.level;
    r.threshold = chi2_quantile(static_cast<int>(d.d()), opts.level);

    const FitResult fit = fit_mle(d);
    if (!fit.interior()) {
        r.status = DiagnosticStatus::Separated;
        r.recession = fit.boundary().recession;
        r.verdict = Verdict::Suspect;
        if (d.d() == 2) r.polytope = suffstat_polytope_2d(d.x());
        return r;
    }

    r.beta_hat = fit.fit().beta_hat;
    ModelMoments m = model_moments(d.x(), r.beta_hat);
    r.mu_hat = std::move(m.mu);
    r.sigma_hat = std::move(m.sigma);

    if (d.d() == 1) evaluate_interval(d, r);
    else evaluate_polygon(d, r);

    r.verdict = classify(r.dist_sq, r.threshold, opts.marginal_factor);
    return r;
}

std::vector<Point2> contour_points(const Point2& mu, const SymmetricMatrix& metric, double radius_sq,
                                   std::size_t n) {
    if (metric.dim() != 2) throw DimensionError("contour_points needs a 2x2 metric");
    if (n < 3) throw std::invalid_argument("contour_points needs n >= 3");
    if (!(radius_sq >= 0.0)) throw std::invalid_argument("contour_points needs radius_sq >= 0");
    const Matrix l = cholesky(metric);
    const double radius = std::sqrt(radius_sq);
    std::vector<Point2> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        const Vector u{radius * std::cos(phi), radius * std::sin(phi)};
        // (z - mu) = L^{-T} u gives (z - mu)^T L L^T (z - mu) = |u|^2.
        const Vector offset = solve_lower_transpose(l, u);
        out.push_back({mu[0] + offset[0], mu[1] + offset[1]});
    }
    return out;
}

}  // namespace lrgeo
