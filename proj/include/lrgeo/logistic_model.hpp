#pragma once

// Logistic regression viewed as a D-parameter full exponential family for
// N binary responses: fitting, separation detection and model cumulants.

#include "lrgeo/numerics.hpp"

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace lrgeo {

class DatasetError : public std::invalid_argument {
public:
    explicit DatasetError(const std::string& what) : std::invalid_argument(what) {}
};

class NoInterceptColumn : public std::invalid_argument {
public:
    NoInterceptColumn() : std::invalid_argument("centering requires an intercept column of ones") {}
};

/// Design matrix X (N x D) with binary responses t. Requires N >= D >= 1,
/// t in {0,1}^N and full column rank.
class Dataset {
public:
    Dataset(Matrix x, std::vector<int> t);

    const Matrix& x() const noexcept { return x_; }
    const std::vector<int>& t() const noexcept { return t_; }
    std::size_t n() const noexcept { return x_.rows(); }
    std::size_t d() const noexcept { return x_.cols(); }

    /// First column whose entries are all exactly 1, if any.
    std::optional<std::size_t> intercept_column() const;

    Dataset with_responses(std::vector<int> t) const;

private:
    Matrix x_;
    std::vector<int> t_;
};

/// Numerical rank by Gaussian elimination with full pivoting.
std::size_t matrix_rank(const Matrix& m, double tol = 1e-10);

struct InteriorFit {
    Vector beta_hat;
    Vector probs;
    SymmetricMatrix fisher;
    int iterations = 0;
    double score_norm = 0.0;
};

struct BoundaryFit {
    Vector recession;  // unit direction
};

struct FitResult {
    std::variant<InteriorFit, BoundaryFit> status;

    bool interior() const noexcept { return std::holds_alternative<InteriorFit>(status); }
    const InteriorFit& fit() const { return std::get<InteriorFit>(status); }
    const BoundaryFit& boundary() const { return std::get<BoundaryFit>(status); }
};

class NoConvergence : public std::runtime_error {
public:
    NoConvergence(Vector last_beta, double score_norm, int iterations);
    const Vector& last_beta() const noexcept { return last_beta_; }
    double score_norm() const noexcept { return score_norm_; }
    int iterations() const noexcept { return iterations_; }

private:
    Vector last_beta_;
    double score_norm_;
    int iterations_;
};

/// Fully symmetric D x D x D tensor.
class SymmetricTensor3 {
public:
    SymmetricTensor3() = default;
    explicit SymmetricTensor3(std::size_t dim) : dim_(dim), data_(dim * dim * dim, 0.0) {}

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t a, std::size_t b, std::size_t c) const {
        return data_[(a * dim_ + b) * dim_ + c];
    }
    /// Adds v to every permutation of (a, b, c) once.
    void add_symmetric(std::size_t a, std::size_t b, std::size_t c, double v);
    bool is_zero() const noexcept;

private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// Cumulants of the sufficient statistic X^T T under beta.
struct ModelMoments {
    Vector mu;              // X^T p
    SymmetricMatrix sigma;  // X^T diag(p(1-p)) X
    SymmetricTensor3 kappa3;
};

struct CenteredDataset {
    Dataset data;
    Vector offsets;  // subtracted column means; 0 for the intercept
};

/// Logistic function s^{-1}(eta) = 1 / (1 + exp(-eta)), overflow-safe.
double logistic(double eta) noexcept;
/// log(1 + exp(eta)), overflow-safe.
double softplus(double eta) noexcept;

CenteredDataset center_covariates(const Dataset& d);

Vector suff_stat(const Dataset& d);

/// Some(unit gamma) iff (2 t_i - 1) x_i^T gamma >= 0 for all i with at least
/// one strict inequality, i.e. complete or quasi-complete separation.
std::optional<Vector> detect_separation(const Dataset& d);

/// Maximum likelihood fit. Separation is checked first and returned as
/// BoundaryFit; otherwise Newton-Raphson with step halving from beta = 0.
/// Throws NoConvergence when max_iter is exhausted with the score above 1e-8.
FitResult fit_mle(const Dataset& d, int max_iter = 100, double tol = 1e-10);

ModelMoments model_moments(const Matrix& x, std::span<const double> beta);

double log_likelihood(const Dataset& d, std::span<const double> beta);

/// X^T (t - p(beta)).
Vector score(const Dataset& d, std::span<const double> beta);

}  // namespace lrgeo
