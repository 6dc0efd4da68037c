#include "lrgeo/multinomial_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace lrgeo {

ProbabilityVector::ProbabilityVector(Vector probs, std::size_t reference)
    : probs_(std::move(probs)), reference_(reference) {
    if (probs_.size() < 2) throw DomainError("ProbabilityVector: need at least two cells");
    if (reference_ >= probs_.size()) throw DomainError("ProbabilityVector: reference cell out of range");
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("ProbabilityVector: negative or non-finite cell");
        total += p;
    }
    if (!(total > 0.0)) throw DomainError("ProbabilityVector: all cells are zero");
    for (double& p : probs_) p /= total;
}

Vector ProbabilityVector::without_reference() const {
    Vector out;
    out.reserve(k());
    for (std::size_t i = 0; i < probs_.size(); ++i)
        if (i != reference_) out.push_back(probs_[i]);
    return out;
}

std::size_t ProbabilityVector::cell_of(std::size_t free_index) const {
    if (free_index < 1 || free_index > k()) throw DomainError("cell_of: index outside 1..k");
    const std::size_t pos = free_index - 1;
    return pos < reference_ ? pos : pos + 1;
}

bool ProbabilityVector::interior() const noexcept {
    return std::all_of(probs_.begin(), probs_.end(), [](double p) { return p > 0.0; });
}

FaceIndexSet::FaceIndexSet(std::set<std::size_t> indices, std::size_t k) : indices_(std::move(indices)) {
    if (indices_.empty()) throw DomainError("FaceIndexSet: index set is empty");
    if (*indices_.begin() < 1 || *indices_.rbegin() > k)
        throw DomainError("FaceIndexSet: indices must lie in 1..k");
}

SymmetricMatrix fisher_information(const ProbabilityVector& pi) {
    const Vector p = pi.without_reference();
    SymmetricMatrix info(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i; j < p.size(); ++j) {
            info.set(i, j, (i == j ? p[i] : 0.0) - p[i] * p[j]);
        }
    }
    return info;
}

Vector FisherSpectrum::all_eigenvalues() const {
    Vector out = simple_eigenvalues;
    for (const auto& r : repeated_eigenvalues) out.insert(out.end(), r.multiplicity, r.value);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

bool FisherSpectrum::interlaced(double tol) const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < distinct_probs.size(); ++i) {
        const double lambda = distinct_probs[i].value;
        if (lambda == 0.0) break;
        if (s >= simple_eigenvalues.size()) return false;
        const double simple = simple_eigenvalues[s++];
        if (!(lambda - simple > tol)) return false;
        const bool last_positive =
            i + 1 == distinct_probs.size() || distinct_probs[i + 1].value == 0.0;
        if (last_positive) {
            if (simple < -tol) return false;
        } else if (!(simple - distinct_probs[i + 1].value > tol)) {
            return false;
        }
    }
    return s == simple_eigenvalues.size();
}

FisherSpectrum fisher_spectrum(const ProbabilityVector& pi) {
    Vector p = pi.without_reference();
    std::sort(p.begin(), p.end(), std::greater<>());

    FisherSpectrum out;
    for (double v : p) {
        if (!out.distinct_probs.empty()) {
            auto& last = out.distinct_probs.back();
            if (std::abs(last.value - v) <= 1e-12 * std::max(last.value, v)) {
                ++last.multiplicity;
                continue;
            }
        }
        out.distinct_probs.push_back({v, 1});
    }

    // Eigenvalues off the diagonal values solve the secular equation
    //   f(x) = 1 - sum_g m_g lambda_g^2 / (lambda_g - x) = 0,
    // f strictly decreasing between consecutive poles, with f(0) = pi_ref.
    const auto& groups = out.distinct_probs;
    auto secular = [&](double x) {
        double f = 1.0;
        for (const auto& g : groups) {
            if (g.value == 0.0) continue;
            f -= static_cast<double>(g.multiplicity) * g.value * g.value / (g.value - x);
        }
        return f;
    };

    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double hi = groups[i].value;
        if (hi == 0.0) break;
        double lo = (i + 1 < groups.size()) ? groups[i + 1].value : 0.0;
        double root;
        if (i + 1 == groups.size() || groups[i + 1].value == 0.0) {
            lo = 0.0;
            if (secular(0.0) <= 0.0) {
                out.simple_eigenvalues.push_back(0.0);
                continue;
            }
        }
        double a = lo;
        double b = hi;
        for (int it = 0; it < 2000; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            if (secular(mid) > 0.0) a = mid;
            else b = mid;
        }
        root = 0.5 * (a + b);
        out.simple_eigenvalues.push_back(root);
    }

    for (const auto& g : groups) {
        if (g.value == 0.0) out.repeated_eigenvalues.push_back({0.0, g.multiplicity});
        else if (g.multiplicity > 1) out.repeated_eigenvalues.push_back({g.value, g.multiplicity - 1});
    }
    return out;
}

double face_distance_sq(const ProbabilityVector& base, const FaceIndexSet& face) {
    if (!base.interior()) throw DomainError("face_distance_sq: base point must be strictly interior");
    double mass = 0.0;
    for (std::size_t idx : face.indices()) {
        if (idx > base.k()) throw DomainError("face_distance_sq: face index exceeds k");
        mass += base[base.cell_of(idx)];
    }
    if (mass >= 1.0 - 1e-14) return std::numeric_limits<double>::infinity();
    return mass / (1.0 - mass);
}

}  // namespace lrgeo
