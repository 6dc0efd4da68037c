#include "lrgeo/logistic_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lrgeo {

std::size_t matrix_rank(const Matrix& m, double tol) {
    Matrix a = m;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    const double scale = std::max(a.max_abs(), 1.0);
    std::vector<std::size_t> col_perm(cols);
    for (std::size_t j = 0; j < cols; ++j) col_perm[j] = j;

    std::size_t rank = 0;
    for (; rank < std::min(rows, cols); ++rank) {
        std::size_t pr = rank;
        std::size_t pc = rank;
        double best = 0.0;
        for (std::size_t i = rank; i < rows; ++i)
            for (std::size_t j = rank; j < cols; ++j)
                if (std::abs(a(i, j)) > best) {
                    best = std::abs(a(i, j));
                    pr = i;
                    pc = j;
                }
        if (best <= tol * scale) break;
        for (std::size_t j = 0; j < cols; ++j) std::swap(a(rank, j), a(pr, j));
        for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, rank), a(i, pc));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const double f = a(i, rank) / a(rank, rank);
            for (std::size_t j = rank; j < cols; ++j) a(i, j) -= f * a(rank, j);
        }
    }
    return rank;
}

Dataset::Dataset(Matrix x, std::vector<int> t) : x_(std::move(x)), t_(std::move(t)) {
    if (x_.cols() < 1) throw DatasetError("dataset needs at least one column");
    if (x_.rows() < x_.cols())
        throw DatasetError("dataset needs N >= D (N=" + std::to_string(x_.rows()) +
                           ", D=" + std::to_string(x_.cols()) + ")");
    if (t_.size() != x_.rows()) throw DatasetError("response length does not match design rows");
    for (int v : t_)
        if (v != 0 && v != 1) throw DatasetError("responses must be 0 or 1");
    for (std::size_t i = 0; i < x_.rows(); ++i)
        for (std::size_t j = 0; j < x_.cols(); ++j)
            if (!std::isfinite(x_(i, j))) throw DatasetError("design matrix has non-finite entries");
    if (matrix_rank(x_) < x_.cols()) throw DatasetError("design matrix is rank deficient");
}

std::optional<std::size_t> Dataset::intercept_column() const {
    for (std::size_t j = 0; j < d(); ++j) {
        bool ones = true;
        for (std::size_t i = 0; i < n() && ones; ++i) ones = x_(i, j) == 1.0;
        if (ones) return j;
    }
    return std::nullopt;
}

Dataset Dataset::with_responses(std::vector<int> t) const { return Dataset(x_, std::move(t)); }

NoConvergence::NoConvergence(Vector last_beta, double score_norm, int iterations)
    : std::runtime_error("Newton-Raphson did not converge after " + std::to_string(iterations) +
                         " iterations (score norm " + std::to_string(score_norm) +
                         "); data may be nearly separated"),
      last_beta_(std::move(last_beta)),
      score_norm_(score_norm),
      iterations_(iterations) {}

void SymmetricTensor3::add_symmetric(std::size_t a, std::size_t b, std::size_t c, double v) {
    const std::size_t idx[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
    // Each distinct permutation receives v exactly once.
    std::vector<std::size_t> seen;
    for (const auto& p : idx) {
        const std::size_t flat = (p[0] * dim_ + p[1]) * dim_ + p[2];
        if (std::find(seen.begin(), seen.end(), flat) != seen.end()) continue;
        seen.push_back(flat);
        data_[flat] += v;
    }
}

bool SymmetricTensor3::is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

double logistic(double eta) noexcept {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double softplus(double eta) noexcept {
    if (eta > 30.0) return eta + std::log1p(std::exp(-eta));
    return std::log1p(std::exp(eta));
}

CenteredDataset center_covariates(const Dataset& d) {
    const auto intercept = d.intercept_column();
    if (!intercept) throw NoInterceptColumn();
    Matrix x = d.x();
    Vector offsets(d.d(), 0.0);
    for (std::size_t j = 0; j < d.d(); ++j) {
        if (j == *intercept) continue;
        double mean = 0.0;
        for (std::size_t i = 0; i < d.n(); ++i) mean += x(i, j);
        mean /= static_cast<double>(d.n());
        for (std::size_t i = 0; i < d.n(); ++i) x(i, j) -= mean;
        offsets[j] = mean;
    }
    return {Dataset(std::move(x), d.t()), std::move(offsets)};
}

Vector suff_stat(const Dataset& d) {
    Vector s(d.d(), 0.0);
    for (std::size_t i = 0; i < d.n(); ++i) {
        if (d.t()[i] == 0) continue;
        for (std::size_t j = 0; j < d.d(); ++j) s[j] += d.x()(i, j);
    }
    return s;
}

std::optional<Vector> detect_separation(const Dataset& d) {
    Matrix signed_rows(d.n(), d.d());
    for (std::size_t i = 0; i < d.n(); ++i) {
        const double sign = d.t()[i] == 1 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < d.d(); ++j) signed_rows(i, j) = sign * d.x()(i, j);
    }
    return lp_feasible(signed_rows);
}

Vector score(const Dataset& d, std::span<const double> beta) {
    Vector g(d.d(), 0.0);
    for (std::size_t i = 0; i < d.n(); ++i) {
        const double r = d.t()[i] - logistic(dot(d.x().row(i), beta));
        for (std::size_t j = 0; j < d.d(); ++j) g[j] += r * d.x()(i, j);
    }
    return g;
}

double log_likelihood(const Dataset& d, std::span<const double> beta) {
    double ll = 0.0;
    for (std::size_t i = 0; i < d.n(); ++i) {
        const double eta = dot(d.x().row(i), beta);
        ll += d.t()[i] * eta - softplus(eta);
    }
    return ll;
}

namespace {

SymmetricMatrix weighted_gram(const Matrix& x, std::span<const double> w) {
    SymmetricMatrix g(x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t a = 0; a < x.cols(); ++a)
            for (std::size_t b = a; b < x.cols(); ++b) g.add(a, b, w[i] * x(i, a) * x(i, b));
    return g;
}

Vector fitted_probs(const Matrix& x, std::span<const double> beta) {
    Vector p(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) p[i] = logistic(dot(x.row(i), beta));
    return p;
}

}  // namespace

FitResult fit_mle(const Dataset& d, int max_iter, double tol) {
    if (auto gamma = detect_separation(d)) return FitResult{BoundaryFit{std::move(*gamma)}};

    constexpr double score_tol = 1e-8;
    Vector beta(d.d(), 0.0);
    double ll = log_likelihood(d, beta);
    Vector g = score(d, beta);
    int it = 0;
    for (; it < max_iter; ++it) {
        if (norm_inf(g) <= tol) break;
        const Vector p = fitted_probs(d.x(), beta);
        Vector w(d.n());
        for (std::size_t i = 0; i < d.n(); ++i) w[i] = p[i] * (1.0 - p[i]);
        const Vector step = solve_spd(weighted_gram(d.x(), w), g);
        if (norm_inf(step) <= 1e-15 * (1.0 + norm_inf(beta))) break;

        // Inside the quadratic-convergence region the predicted gain is at
        // roundoff level, where likelihood comparisons are noise: take the
        // full step there and line-search only further out.
        const double predicted_gain = dot(g, step);
        const bool local = predicted_gain <= 1e-10 * (1.0 + std::abs(ll));

        double scale = 1.0;
        Vector trial(d.d());
        double trial_ll = ll;
        bool accepted = false;
        for (int halving = 0; halving <= 30; ++halving) {
            for (std::size_t j = 0; j < d.d(); ++j) trial[j] = beta[j] + scale * step[j];
            trial_ll = log_likelihood(d, trial);
            if (local || trial_ll >= ll) {
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) {
            ++it;
            break;
        }
        beta = trial;
        ll = trial_ll;
        g = score(d, beta);
    }
    const double score_norm = norm_inf(g);
    if (score_norm > score_tol) throw NoConvergence(beta, score_norm, it);

    InteriorFit fit;
    fit.probs = fitted_probs(d.x(), beta);
    Vector w(d.n());
    for (std::size_t i = 0; i < d.n(); ++i) w[i] = fit.probs[i] * (1.0 - fit.probs[i]);
    fit.fisher = weighted_gram(d.x(), w);
    fit.beta_hat = std::move(beta);
    fit.iterations = it;
    fit.score_norm = score_norm;
    return FitResult{std::move(fit)};
}

ModelMoments model_moments(const Matrix& x, std::span<const double> beta) {
    const std::size_t dim = x.cols();
    const Vector p = fitted_probs(x, beta);
    ModelMoments m{Vector(dim, 0.0), SymmetricMatrix(dim), SymmetricTensor3(dim)};
    Vector w(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        w[i] = p[i] * (1.0 - p[i]);
        for (std::size_t a = 0; a < dim; ++a) m.mu[a] += x(i, a) * p[i];
    }
    m.sigma = weighted_gram(x, w);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double k3 = w[i] * (1.0 - 2.0 * p[i]);
        if (k3 == 0.0) continue;
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = a; b < dim; ++b)
                for (std::size_t c = b; c < dim; ++c)
                    m.kappa3.add_symmetric(a, b, c, k3 * x(i, a) * x(i, b) * x(i, c));
    }
    return m;
}

}  // namespace lrgeo
