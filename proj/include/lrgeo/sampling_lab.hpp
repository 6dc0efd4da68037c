#pragma once

// Monte-Carlo studies of the sampling distribution of the sufficient
// statistic and of the MLE under a fitted model, plus the first-order
// (third cumulant) Edgeworth density.
//
// Replicate r of a batch always draws from rng.split(r), so results are
// bit-identical under any partitioning of replicates across threads.

#include "lrgeo/logistic_model.hpp"
#include "lrgeo/numerics.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lrgeo {

struct SuffStatSample {
    std::vector<Vector> draws;
    std::vector<std::uint8_t> on_boundary;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

struct MleSample {
    std::vector<Vector> interior_estimates;
    std::size_t boundary_count = 0;  // includes non-converged replicates
    std::size_t nonconverged_count = 0;
    std::size_t total = 0;
};

/// Draws t_i ~ Bernoulli(logistic(x_i^T beta)) for replicate `rng`.
std::vector<int> draw_responses(const Matrix& x, std::span<const double> beta, RngStream& rng);

/// True when responses t are completely or quasi-completely separated on x.
bool responses_on_boundary(const Matrix& x, const std::vector<int>& t);

/// threads = 0 uses the hardware concurrency.
SuffStatSample sample_suffstats(const Matrix& x, std::span<const double> beta, std::size_t reps,
                                const RngStream& rng, unsigned threads = 1);

MleSample sample_mles(const Matrix& x, std::span<const double> beta, std::size_t reps,
                      const RngStream& rng, unsigned threads = 1);

class DegenerateSample : public std::invalid_argument {
public:
    explicit DegenerateSample(const std::string& what) : std::invalid_argument(what) {}
};

/// m3 / m2^{3/2} with population central moments.
double skewness(std::span<const double> values);

/// phi_Sigma(z - mu) * (1 + (1/6) sum kbar^{abc} He_{abc}(y)), y = L^{-1}(z - mu).
/// Tail values may be negative and are returned unclamped.
double edgeworth_density(std::span<const double> z, const ModelMoments& m);

/// Same density without the cumulant correction.
double gaussian_density(std::span<const double> z, const ModelMoments& m);

}  // namespace lrgeo
