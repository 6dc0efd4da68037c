#include "lrgeo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace lrgeo {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::column(std::size_t c) const {
    Vector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Matrix product: shape mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw std::invalid_argument("Matrix-vector product: shape mismatch");
    Vector out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
    return out;
}

SymmetricMatrix SymmetricMatrix::from(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("SymmetricMatrix: matrix is not square");
    SymmetricMatrix s(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    return s;
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
    SymmetricMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> d) {
    SymmetricMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
}

double SymmetricMatrix::trace() const noexcept {
    double t = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) t += full_(i, i);
    return t;
}

double SymmetricMatrix::quadratic_form(std::span<const double> x) const {
    if (x.size() != dim()) throw std::invalid_argument("quadratic_form: shape mismatch");
    double q = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) q += x[i] * dot(full_.row(i), x);
    return q;
}

SymmetricMatrix SymmetricMatrix::scaled(double c) const {
    SymmetricMatrix s(dim());
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i; j < dim(); ++j) s.set(i, j, c * full_(i, j));
    return s;
}

Vector operator*(const SymmetricMatrix& a, std::span<const double> x) { return a.matrix() * x; }

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

EigenDecomposition sym_eigen(const SymmetricMatrix& m) {
    const std::size_t n = m.dim();
    Matrix a = m.matrix();
    Matrix v = Matrix::identity(n);

    auto off_diagonal = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return s;
    };
    const double scale = std::max(m.max_abs(), std::numeric_limits<double>::min());

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (std::sqrt(off_diagonal()) <= 1e-15 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition out{Vector(n), Matrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
    }
    return out;
}

Matrix cholesky(const SymmetricMatrix& m) {
    const std::size_t n = m.dim();
    const double floor = static_cast<double>(n) * 1e-14 * m.max_abs();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > floor)) {
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j) + " is " +
                                      std::to_string(d) + ", matrix is not positive definite");
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

Vector solve_lower(const Matrix& lower, std::span<const double> b) {
    const std::size_t n = lower.rows();
    Vector x(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) x[i] -= lower(i, k) * x[k];
        x[i] /= lower(i, i);
    }
    return x;
}

Vector solve_lower_transpose(const Matrix& lower, std::span<const double> b) {
    const std::size_t n = lower.rows();
    Vector x(b.begin(), b.end());
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= lower(k, ii) * x[k];
        x[ii] /= lower(ii, ii);
    }
    return x;
}

Vector solve_spd(const SymmetricMatrix& m, std::span<const double> b) {
    const Matrix l = cholesky(m);
    return solve_lower_transpose(l, solve_lower(l, b));
}

SymmetricMatrix inverse_spd(const SymmetricMatrix& m) {
    const std::size_t n = m.dim();
    const Matrix l = cholesky(m);
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector e(n, 0.0);
        e[j] = 1.0;
        const Vector col = solve_lower_transpose(l, solve_lower(l, e));
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return SymmetricMatrix::from(inv);
}

// ---------------------------------------------------------------------------
// chi-squared quantile

namespace {

double gamma_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper tail Q(a, x) by modified Lentz continued fraction.
double gamma_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-17) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Acklam's rational approximation to the standard normal quantile; only
// used for the starting point, so its ~1e-9 accuracy is plenty.
double normal_quantile_approx(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("regularized_lower_gamma: a must be positive");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_series(a, x);
    return 1.0 - gamma_continued_fraction(a, x);
}

double chi2_quantile(int df, double p) {
    if (df < 1) throw std::domain_error("chi2_quantile: df must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chi2_quantile: p must lie in (0, 1)");
    if (df == 2) return -2.0 * std::log1p(-p);

    const double k = df;
    const double half = 0.5 * k;
    const double log_norm = half * std::numbers::ln2 + std::lgamma(half);
    auto cdf = [&](double x) { return regularized_lower_gamma(half, 0.5 * x); };
    auto pdf = [&](double x) {
        return std::exp((half - 1.0) * std::log(x) - 0.5 * x - log_norm);
    };

    // Wilson-Hilferty start.
    const double z = normal_quantile_approx(p);
    const double w = 2.0 / (9.0 * k);
    double x = k * std::pow(std::max(1.0 - w + z * std::sqrt(w), 0.05), 3);

    // Bracket so that Newton can fall back to bisection.
    double lo = 0.0;
    double hi = std::max(2.0 * x, k + 10.0);
    while (cdf(hi) < p) hi *= 2.0;

    for (int it = 0; it < 200; ++it) {
        const double f = cdf(x) - p;
        if (f == 0.0) return x;
        if (f < 0.0) lo = std::max(lo, x);
        else hi = std::min(hi, x);
        const double deriv = pdf(x);
        double next = x - f / deriv;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x) {
            return next;
        }
        x = next;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    return x;
}

// ---------------------------------------------------------------------------
// LP feasibility
//
// Rows a_i are normalized and gamma is split as gamma+ - gamma-, both >= 0.
// Every LP below has the form
//   maximize  c^T gamma + w s
//   s.t.      -a_i^T gamma + [i in S] s <= 0,   gamma+_j + gamma-_j <= 1,   s <= 1
// with all right-hand sides zero or one, so the all-slack basis is feasible
// and no phase one is needed. Solved by a dense tableau simplex with
// Bland's rule (the problems are heavily degenerate at the origin).

namespace {

struct ConeLpResult {
    Vector gamma;
    double objective;
};

ConeLpResult solve_cone_lp(const std::vector<Vector>& a, std::span<const double> c,
                           const std::vector<bool>& strict, double w) {
    const std::size_t d = c.size();
    const std::size_t rows = a.size() + d + 1;
    const std::size_t nvars = 2 * d + 1;  // gamma+, gamma-, s
    const std::size_t s_col = 2 * d;
    const std::size_t cols = nvars + rows + 1;
    const std::size_t rhs = cols - 1;
    Matrix tab(rows + 1, cols);  // last row: reduced costs

    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            tab(i, j) = -a[i][j];
            tab(i, d + j) = a[i][j];
        }
        if (strict[i]) tab(i, s_col) = 1.0;
    }
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t r = a.size() + j;
        tab(r, j) = 1.0;
        tab(r, d + j) = 1.0;
        tab(r, rhs) = 1.0;
    }
    tab(rows - 1, s_col) = 1.0;
    tab(rows - 1, rhs) = 1.0;
    for (std::size_t r = 0; r < rows; ++r) tab(r, nvars + r) = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        tab(rows, j) = -c[j];
        tab(rows, d + j) = c[j];
    }
    tab(rows, s_col) = -w;

    std::vector<std::size_t> basis(rows);
    for (std::size_t i = 0; i < rows; ++i) basis[i] = nvars + i;

    constexpr double eps = 1e-12;
    const std::size_t max_pivots = 50 * (rows + cols);
    for (std::size_t pivots = 0;; ++pivots) {
        if (pivots > max_pivots) throw std::runtime_error("lp_feasible: simplex did not terminate");
        std::size_t enter = cols;
        for (std::size_t j = 0; j < rhs; ++j) {
            if (tab(rows, j) < -eps) {
                enter = j;
                break;
            }
        }
        if (enter == cols) break;

        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rows; ++i) {
            if (tab(i, enter) > eps) best = std::min(best, tab(i, rhs) / tab(i, enter));
        }
        std::size_t leave = rows;
        for (std::size_t i = 0; i < rows; ++i) {
            if (tab(i, enter) <= eps || tab(i, rhs) / tab(i, enter) > best + eps) continue;
            if (leave == rows || basis[i] < basis[leave]) leave = i;
        }
        if (leave == rows) throw std::runtime_error("lp_feasible: unbounded (cannot happen)");

        const double piv = tab(leave, enter);
        for (std::size_t j = 0; j < cols; ++j) tab(leave, j) /= piv;
        for (std::size_t i = 0; i <= rows; ++i) {
            if (i == leave) continue;
            const double f = tab(i, enter);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) tab(i, j) -= f * tab(leave, j);
        }
        basis[leave] = enter;
    }

    ConeLpResult out{Vector(d, 0.0), tab(rows, rhs)};
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t b = basis[i];
        if (b < d) out.gamma[b] += tab(i, rhs);
        else if (b < 2 * d) out.gamma[b - d] -= tab(i, rhs);
    }
    return out;
}

}  // namespace

// The returned direction is canonical rather than an arbitrary optimal
// vertex: first every constraint that can be made strict is found (each
// round maximizes the sum of the not-yet-strict rows), then the minimum
// slack over those constraints is maximized.
std::optional<Vector> lp_feasible(const Matrix& constraints) {
    const std::size_t d = constraints.cols();
    if (constraints.rows() == 0 || d == 0) return std::nullopt;

    std::vector<Vector> a;
    a.reserve(constraints.rows());
    for (std::size_t i = 0; i < constraints.rows(); ++i) {
        Vector row(constraints.row(i).begin(), constraints.row(i).end());
        const double n = norm2(row);
        if (n == 0.0) continue;
        for (double& v : row) v /= n;
        a.push_back(std::move(row));
    }
    if (a.empty()) return std::nullopt;

    constexpr double positive = 1e-10;
    const std::vector<bool> none(a.size(), false);
    std::vector<bool> strict(a.size(), false);
    std::size_t strict_count = 0;
    while (strict_count < a.size()) {
        Vector c(d, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!strict[i])
                for (std::size_t j = 0; j < d; ++j) c[j] += a[i][j];
        const ConeLpResult r = solve_cone_lp(a, c, none, 0.0);
        if (!(r.objective > positive)) break;
        bool grew = false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!strict[i] && dot(a[i], r.gamma) > positive) {
                strict[i] = true;
                ++strict_count;
                grew = true;
            }
        }
        if (!grew) break;
    }
    if (strict_count == 0) return std::nullopt;

    const Vector zero(d, 0.0);
    Vector gamma = solve_cone_lp(a, zero, strict, 1.0).gamma;
    const double n = norm2(gamma);
    if (!(n > 0.0)) return std::nullopt;
    for (double& v : gamma) v /= n;
    return gamma;
}

// ---------------------------------------------------------------------------
// RNG

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id), key_(mix64(seed ^ mix64(stream_id + kGolden))) {}

std::uint64_t RngStream::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double RngStream::next_uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_normal() noexcept {
    const double u1 = 1.0 - next_uniform();  // (0, 1]
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RngStream RngStream::split(std::uint64_t index) const noexcept {
    return RngStream(seed_, mix64(stream_id_ ^ mix64(index + 0x632BE59BD9B4E019ULL)));
}

}  // namespace lrgeo
