#pragma once

// Boundary-proximity diagnostic: squared Mahalanobis distance (metric
// Sigma^{-1}) from the fitted mean of the sufficient statistic to the
// boundary polytope, compared against a chi-squared quantile.

#include "lrgeo/boundary_polytope.hpp"
#include "lrgeo/logistic_model.hpp"

#include <optional>
#include <string_view>

namespace lrgeo {

enum class DiagnosticStatus { Evaluated, Separated };
enum class Verdict { Safe, Marginal, Suspect };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(DiagnosticStatus s) noexcept;

struct DiagnosticOptions {
    double level = 0.99;
    /// Distances in [threshold, marginal_factor * threshold) are MARGINAL.
    double marginal_factor = 1.5;
};

struct ClosestFace {
    Vector vertex_a;
    Vector vertex_b;
    Vector closest;
    std::size_t edge = 0;
};

struct DiagnosticReport {
    DiagnosticStatus status = DiagnosticStatus::Evaluated;
    Vector recession;  // Separated only
    Vector beta_hat;
    Vector mu_hat;
    SymmetricMatrix sigma_hat;
    double dist_sq = 0.0;
    double threshold = 0.0;
    double level = 0.99;
    Verdict verdict = Verdict::Suspect;
    /// Set when the fitted mean sits on the polytope boundary to within
    /// rounding even though the fit is interior.
    bool boundary_contact = false;
    ClosestFace closest_face;
    std::optional<SuffStatPolytope> polytope;  // D = 2 only
};

Verdict classify(double dist_sq, double threshold, double marginal_factor = 1.5) noexcept;

/// Runs fit -> moments -> polytope -> distance -> verdict. Supports D = 2
/// (intercept plus one covariate) and the intercept-only D = 1 case, where
/// the polytope is the interval of attainable sums. Other D throw
/// DimensionError. NoConvergence from the fit propagates.
DiagnosticReport boundary_diagnostic(const Dataset& d, const DiagnosticOptions& opts = {});

/// n points on {z : (z - mu)^T M (z - mu) = radius_sq}, equally spaced in
/// the whitened angle.
std::vector<Point2> contour_points(const Point2& mu, const SymmetricMatrix& metric, double radius_sq,
                                   std::size_t n);

}  // namespace lrgeo
