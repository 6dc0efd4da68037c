#include "lrgeo/sampling_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace lrgeo {

std::vector<int> draw_responses(const Matrix& x, std::span<const double> beta, RngStream& rng) {
    std::vector<int> t(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double p = logistic(dot(x.row(i), beta));
        t[i] = rng.next_uniform() < p ? 1 : 0;
    }
    return t;
}

bool responses_on_boundary(const Matrix& x, const std::vector<int>& t) {
    Matrix signed_rows(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double sign = t[i] == 1 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < x.cols(); ++j) signed_rows(i, j) = sign * x(i, j);
    }
    return lp_feasible(signed_rows).has_value();
}

namespace {

// Runs body(r) for r in [0, reps) over contiguous chunks.
template <class Body>
void parallel_reps(std::size_t reps, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(reps, 1)));
    if (threads <= 1) {
        for (std::size_t r = 0; r < reps; ++r) body(r);
        return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (reps + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(reps, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t r = lo; r < hi; ++r) body(r);
        });
    }
}

}  // namespace

SuffStatSample sample_suffstats(const Matrix& x, std::span<const double> beta, std::size_t reps,
                                const RngStream& rng, unsigned threads) {
    if (reps < 1) throw std::invalid_argument("sample_suffstats: reps must be >= 1");
    SuffStatSample out;
    out.seed = rng.seed();
    out.stream_id = rng.stream_id();
    out.draws.assign(reps, Vector(x.cols(), 0.0));
    out.on_boundary.assign(reps, 0);

    parallel_reps(reps, threads, [&](std::size_t r) {
        RngStream stream = rng.split(r);
        const std::vector<int> t = draw_responses(x, beta, stream);
        Vector& s = out.draws[r];
        for (std::size_t i = 0; i < x.rows(); ++i)
            if (t[i])
                for (std::size_t j = 0; j < x.cols(); ++j) s[j] += x(i, j);
        out.on_boundary[r] = responses_on_boundary(x, t) ? 1 : 0;
    });
    return out;
}

MleSample sample_mles(const Matrix& x, std::span<const double> beta, std::size_t reps,
                      const RngStream& rng, unsigned threads) {
    if (reps < 1) throw std::invalid_argument("sample_mles: reps must be >= 1");
    enum class Outcome : std::uint8_t { Interior, Boundary, NoConvergence };
    std::vector<Outcome> outcome(reps, Outcome::Boundary);
    std::vector<Vector> estimates(reps);

    parallel_reps(reps, threads, [&](std::size_t r) {
        RngStream stream = rng.split(r);
        std::vector<int> t = draw_responses(x, beta, stream);
        try {
            const FitResult fit = fit_mle(Dataset(x, std::move(t)));
            if (fit.interior()) {
                outcome[r] = Outcome::Interior;
                estimates[r] = fit.fit().beta_hat;
            }
        } catch (const NoConvergence&) {
            outcome[r] = Outcome::NoConvergence;
        }
    });

    MleSample out;
    out.total = reps;
    for (std::size_t r = 0; r < reps; ++r) {
        switch (outcome[r]) {
            case Outcome::Interior: out.interior_estimates.push_back(std::move(estimates[r])); break;
            case Outcome::NoConvergence:
                ++out.nonconverged_count;
                ++out.boundary_count;
                break;
            case Outcome::Boundary: ++out.boundary_count; break;
        }
    }
    return out;
}

double skewness(std::span<const double> values) {
    if (values.size() < 3) throw DegenerateSample("skewness needs at least three values");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 < 1e-300) throw DegenerateSample("skewness of a sample with zero variance");
    return m3 / std::pow(m2, 1.5);
}

namespace {

struct Standardized {
    Vector y;
    double gaussian;
    Matrix lower;
};

Standardized standardize(std::span<const double> z, const ModelMoments& m) {
    const std::size_t dim = m.mu.size();
    if (z.size() != dim || m.sigma.dim() != dim) throw std::invalid_argument("edgeworth: dimension mismatch");
    Matrix l = cholesky(m.sigma);
    Vector diff(dim);
    for (std::size_t a = 0; a < dim; ++a) diff[a] = z[a] - m.mu[a];
    Vector y = solve_lower(l, diff);
    double log_det = 0.0;
    for (std::size_t a = 0; a < dim; ++a) log_det += std::log(l(a, a));
    const double q = dot(y, y);
    const double g = std::exp(-0.5 * q - log_det - 0.5 * dim * std::log(2.0 * std::numbers::pi));
    return {std::move(y), g, std::move(l)};
}

}  // namespace

double gaussian_density(std::span<const double> z, const ModelMoments& m) {
    return standardize(z, m).gaussian;
}

double edgeworth_density(std::span<const double> z, const ModelMoments& m) {
    const std::size_t dim = m.mu.size();
    Standardized s = standardize(z, m);
    if (m.kappa3.dim() != dim) throw std::invalid_argument("edgeworth: kappa3 dimension mismatch");
    if (m.kappa3.is_zero()) return s.gaussian;

    // Linv = L^{-1}, column by column.
    Matrix linv(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        Vector e(dim, 0.0);
        e[j] = 1.0;
        const Vector col = solve_lower(s.lower, e);
        for (std::size_t i = 0; i < dim; ++i) linv(i, j) = col[i];
    }

    // kbar^{abc} = Linv_ai Linv_bj Linv_ck kappa^{ijk}, contracted one index at a time.
    const std::size_t d2 = dim * dim;
    std::vector<double> t1(dim * d2, 0.0), t2(dim * d2, 0.0), kbar(dim * d2, 0.0);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = 0; k < dim; ++k) {
                double v = 0.0;
                for (std::size_t i = 0; i < dim; ++i) v += linv(a, i) * m.kappa3(i, j, k);
                t1[a * d2 + j * dim + k] = v;
            }
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            for (std::size_t k = 0; k < dim; ++k) {
                double v = 0.0;
                for (std::size_t j = 0; j < dim; ++j) v += linv(b, j) * t1[a * d2 + j * dim + k];
                t2[a * d2 + b * dim + k] = v;
            }
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            for (std::size_t c = 0; c < dim; ++c) {
                double v = 0.0;
                for (std::size_t k = 0; k < dim; ++k) v += linv(c, k) * t2[a * d2 + b * dim + k];
                kbar[a * d2 + b * dim + c] = v;
            }

    // He_abc(y) = y_a y_b y_c - (delta_ab y_c + delta_ac y_b + delta_bc y_a)
    const Vector& y = s.y;
    double correction = 0.0;
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            for (std::size_t c = 0; c < dim; ++c) {
                double h = y[a] * y[b] * y[c];
                if (a == b) h -= y[c];
                if (a == c) h -= y[b];
                if (b == c) h -= y[a];
                correction += kbar[a * d2 + b * dim + c] * h;
            }
    return s.gaussian * (1.0 + correction / 6.0);
}

}  // namespace lrgeo
