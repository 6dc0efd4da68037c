#pragma once

// Geometry of the extended multinomial simplex: Fisher information for the
// log-odds parameters, its interlaced spectrum, and squared Fisher-metric
// distances from an interior point to the faces of the simplex.

#include "lrgeo/numerics.hpp"

#include <set>
#include <stdexcept>
#include <vector>

namespace lrgeo {

class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A point of the closed simplex. Construction renormalizes to sum 1;
/// zero cells are allowed. One cell is the reference cell (default 0)
/// whose probability is omitted from the log-odds parametrization.
class ProbabilityVector {
public:
    explicit ProbabilityVector(Vector probs, std::size_t reference = 0);

    const Vector& probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }
    /// Number of free cells, k = size() - 1.
    std::size_t k() const noexcept { return probs_.size() - 1; }
    std::size_t reference() const noexcept { return reference_; }
    double reference_prob() const { return probs_[reference_]; }

    /// All probabilities except the reference cell, in cell order.
    Vector without_reference() const;
    /// Maps a free-cell position 1..k to a cell index of probs().
    std::size_t cell_of(std::size_t free_index) const;

    bool interior() const noexcept;

    double operator[](std::size_t i) const { return probs_[i]; }

private:
    Vector probs_;
    std::size_t reference_;
};

/// Spectrum of diag(p) - p p^T where p are the non-reference probabilities.
///
/// distinct_probs holds the distinct values lambda_1 > ... > lambda_g with
/// multiplicities; simple_eigenvalues holds one root of the secular
/// equation below each positive lambda_i, so lambda_i > simple_i > lambda_{i+1}.
/// Every lambda_i with multiplicity m_i > 1 is also an eigenvalue with
/// multiplicity m_i - 1. A zero group (a free cell at probability zero)
/// contributes eigenvalue 0 with its full multiplicity and no simple root.
struct FisherSpectrum {
    struct Repeated {
        double value;
        std::size_t multiplicity;
    };
    struct Group {
        double value;
        std::size_t multiplicity;
    };

    Vector simple_eigenvalues;
    std::vector<Repeated> repeated_eigenvalues;
    std::vector<Group> distinct_probs;

    /// All k eigenvalues, descending.
    Vector all_eigenvalues() const;
    /// Checks lambda_1 > s_1 > ... > lambda_g > s_g >= 0 with slack `tol`.
    bool interlaced(double tol = 1e-10) const;
};

/// Non-empty set of free-cell positions in 1..k forced to zero.
class FaceIndexSet {
public:
    FaceIndexSet(std::set<std::size_t> indices, std::size_t k);
    const std::set<std::size_t>& indices() const noexcept { return indices_; }

private:
    std::set<std::size_t> indices_;
};

SymmetricMatrix fisher_information(const ProbabilityVector& pi);

FisherSpectrum fisher_spectrum(const ProbabilityVector& pi);

/// pi_I / (1 - pi_I) with pi_I the total base probability on the face's
/// cells; +infinity once pi_I >= 1 - 1e-14. Throws DomainError unless the
/// base point is strictly interior.
double face_distance_sq(const ProbabilityVector& base, const FaceIndexSet& face);

}  // namespace lrgeo
