#pragma once

// Small dense numerical kernels shared by the rest of the library.
//
// Everything here works on tiny problems (dimension <= 10 for matrices,
// a few hundred constraints for the LP), so the implementations favour
// robustness and exact qualitative answers over speed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrgeo {

using Vector = std::vector<double>;

/// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    Vector column(std::size_t c) const;

    Matrix transpose() const;
    double max_abs() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Square symmetric matrix. Writes go to both (i,j) and (j,i), so the
/// stored entries are always exactly symmetric.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t dim, double fill = 0.0) : full_(dim, dim, fill) {}

    /// Symmetrizes as (m + m^T) / 2; throws std::invalid_argument if m is not square.
    static SymmetricMatrix from(const Matrix& m);
    static SymmetricMatrix identity(std::size_t n);
    static SymmetricMatrix diagonal(std::span<const double> d);

    std::size_t dim() const noexcept { return full_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return full_(i, j); }
    void set(std::size_t i, std::size_t j, double v) {
        full_(i, j) = v;
        full_(j, i) = v;
    }
    void add(std::size_t i, std::size_t j, double v) {
        full_(i, j) += v;
        if (i != j) full_(j, i) += v;
    }

    const Matrix& matrix() const noexcept { return full_; }
    double max_abs() const noexcept { return full_.max_abs(); }
    double trace() const noexcept;

    /// x^T M x
    double quadratic_form(std::span<const double> x) const;

    SymmetricMatrix scaled(double c) const;

    friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

private:
    Matrix full_;
};

Vector operator*(const SymmetricMatrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

class NotPositiveDefinite : public std::runtime_error {
public:
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct EigenDecomposition {
    Vector values;   // descending
    Matrix vectors;  // orthonormal columns, column j pairs with values[j]
};

/// Cyclic Jacobi eigendecomposition.
EigenDecomposition sym_eigen(const SymmetricMatrix& m);

/// Lower-triangular L with L L^T = m. Throws NotPositiveDefinite when a
/// pivot falls below dim * 1e-14 * max|m|.
Matrix cholesky(const SymmetricMatrix& m);

/// Solves L x = b for lower-triangular L.
Vector solve_lower(const Matrix& lower, std::span<const double> b);
/// Solves L^T x = b for lower-triangular L.
Vector solve_lower_transpose(const Matrix& lower, std::span<const double> b);
/// Solves m x = b through the Cholesky factor.
Vector solve_spd(const SymmetricMatrix& m, std::span<const double> b);
SymmetricMatrix inverse_spd(const SymmetricMatrix& m);

/// Regularized lower incomplete gamma P(a, x).
double regularized_lower_gamma(double a, double x);

/// Quantile of the chi-squared distribution with df degrees of freedom.
/// Throws std::domain_error unless 0 < p < 1 and df >= 1.
double chi2_quantile(int df, double p);

/// Looks for gamma != 0 with a_i^T gamma >= 0 for every row a_i of
/// `constraints` and a_i^T gamma > 0 for at least one. Returns the
/// direction normalized to unit length, or nullopt when only gamma = 0 is
/// feasible.
std::optional<Vector> lp_feasible(const Matrix& constraints);

/// Counter-based 64-bit generator.
///
/// A stream is identified by (seed, stream_id). Its key is
///   key = mix64(seed ^ mix64(stream_id + 0x9E3779B97F4A7C15))
/// and the n-th output (n = 0, 1, ...) is
///   mix64(key + (n + 1) * 0x9E3779B97F4A7C15)
/// where mix64 is the SplitMix64 finalizer. Outputs depend only on
/// (seed, stream_id, n), so streams are bit-reproducible regardless of
/// how work is scheduled.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform() noexcept;
    /// Standard normal via Box-Muller (two uniforms per call, no caching).
    double next_normal() noexcept;

    /// Child stream for sub-task `index`; same seed, derived stream id.
    RngStream split(std::uint64_t index) const noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace lrgeo
