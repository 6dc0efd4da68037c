// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failures.

#include "lrgeo/boundary_polytope.hpp"
#include "lrgeo/diagnostics.hpp"
#include "lrgeo/logistic_model.hpp"
#include "lrgeo/multinomial_geometry.hpp"
#include "lrgeo/sampling_lab.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace lrgeo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

Matrix intercept_design(const std::vector<double>& covariate) {
    Matrix x(covariate.size(), 2);
    for (std::size_t i = 0; i < covariate.size(); ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = covariate[i];
    }
    return x;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// 1. Envelope example.
Outcome envelope_example() {
    const LineFamily family({{1, 1}, {2, 4}, {3, 9}, {4, -1}});
    const auto env = envelope_of_lines(family);
    const auto connected = connected_vertices(family);
    Outcome o;
    o.ok = env.redundant == std::set<std::size_t>{1} && connected.size() == 3 && !connected.contains(1);
    o.detail = "redundant lines: " + std::to_string(env.redundant.size()) +
               ", connected vertices: " + std::to_string(connected.size());
    return o;
}

// 2. Interlacing on random interior probability vectors.
Outcome interlacing() {
    std::mt19937_64 gen(2);
    std::exponential_distribution<double> e(1.0);
    int failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t k = 1 + trial % 10;
        Vector p(k + 1);
        for (double& v : p) v = e(gen) + 1e-4;
        const ProbabilityVector pi(p);
        const auto s = fisher_spectrum(pi);
        const Vector all = s.all_eigenvalues();
        const auto dense = sym_eigen(fisher_information(pi));
        bool ok = s.interlaced(1e-10) && all.size() == dense.values.size();
        for (std::size_t i = 0; ok && i < all.size(); ++i) {
            worst = std::max(worst, std::abs(all[i] - dense.values[i]));
            ok = std::abs(all[i] - dense.values[i]) <= 1e-9;
        }
        failures += !ok;
    }
    return {failures == 0, fmt("%.0f failures, max eigenvalue gap %.2e", failures, worst)};
}

// 3. Face distance closed form against the projected-gradient QP.
Outcome face_distance() {
    std::mt19937_64 gen(3);
    std::exponential_distribution<double> e(1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + trial % 4;
        Vector p(k + 1);
        for (double& v : p) v = e(gen) + 0.05;
        const ProbabilityVector pi(p);
        std::set<std::size_t> face;
        for (std::size_t i = 1; i <= k; ++i)
            if (gen() % 2) face.insert(i);
        if (face.empty()) face.insert(1 + gen() % k);
        std::vector<std::size_t> cells;
        for (std::size_t i : face) cells.push_back(pi.cell_of(i));
        const double closed = face_distance_sq(pi, FaceIndexSet(face, k));
        worst = std::max(worst, std::abs(closed - oracle::face_qp(pi.probs(), cells)));
    }
    return {worst <= 1e-6, fmt("max |closed form - QP| = %.2e", worst)};
}

// 4. Threshold-vertex theorem on monotone-covariate designs.
Outcome threshold_vertices() {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> step(0.1, 2.0);
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 12;
        std::vector<double> cov(n);
        double c = -3.0;
        for (double& v : cov) v = (c += step(gen));
        const Matrix x = intercept_design(cov);
        const auto poly = suffstat_polytope_2d(x);
        auto hull = oracle::convex_hull(oracle::all_suffstats(x));
        std::vector<Point2> got = poly.vertices;
        std::vector<Point2> want(hull.begin(), hull.end());
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        bool ok = got.size() == want.size();
        for (std::size_t i = 0; ok && i < got.size(); ++i)
            ok = std::abs(got[i][0] - want[i][0]) <= 1e-9 && std::abs(got[i][1] - want[i][1]) <= 1e-9;
        for (const auto& pat : poly.vertex_patterns) {
            int changes = 0;
            for (std::size_t i = 1; i < n; ++i) changes += pat[i] != pat[i - 1];
            ok = ok && changes <= 1;
        }
        failures += !ok;
    }
    return {failures == 0, fmt("%.0f of 100 designs mismatched", failures)};
}

// 5. Separation detection against exhaustive direction search.
Outcome separation() {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> cov(-3, 3);
    std::uniform_real_distribution<double> u(0, 1);
    int mismatches = 0, boundary = 0, interior = 0;
    double worst_score = 0.0;
    for (int made = 0; made < 500;) {
        const std::size_t n = 2 + gen() % 11;
        std::vector<double> c(n);
        for (double& v : c) v = cov(gen);
        const double rate = u(gen);
        std::vector<int> t(n);
        for (int& v : t) v = u(gen) < rate;
        const Matrix x = intercept_design(c);
        if (matrix_rank(x) < 2) continue;
        ++made;
        const Dataset d(x, t);
        const bool oracle_sep = oracle::separated_by_search(x, t, 10000);
        try {
            const FitResult f = fit_mle(d);
            const bool is_boundary = !f.interior();
            mismatches += is_boundary != oracle_sep;
            if (is_boundary) ++boundary;
            else {
                ++interior;
                worst_score = std::max(worst_score, norm_inf(score(d, f.fit().beta_hat)));
            }
        } catch (const NoConvergence&) {
            ++mismatches;
        }
    }
    Outcome o{mismatches == 0 && worst_score <= 1e-8,
              fmt("%.0f mismatches, max interior score %.2e", mismatches, worst_score)};
    o.detail += " (" + std::to_string(boundary) + " boundary, " + std::to_string(interior) + " interior)";
    return o;
}

// 6. Monte-Carlo boundary-hit rate against exact enumeration.
Outcome boundary_probability() {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> nd;
    double worst_z = 0.0;
    for (int design = 0; design < 20; ++design) {
        const std::size_t n = 3 + design % 8;
        std::vector<double> c(n);
        for (double& v : c) v = nd(gen);
        const Matrix x = intercept_design(c);
        const Vector beta{0.5 * nd(gen), nd(gen)};
        const double exact = oracle::exact_boundary_probability(x, {beta[0], beta[1]});
        const std::size_t reps = 100000;
        const auto ms = sample_mles(x, beta, reps, RngStream(600 + design, 0), 0);
        const double rate = double(ms.boundary_count) / double(reps);
        const double se = std::sqrt(std::max(exact * (1 - exact), 1e-12) / double(reps));
        worst_z = std::max(worst_z, std::abs(rate - exact) / se);
    }
    return {worst_z <= 4.0, fmt("max |MC - exact| = %.2f binomial SE", worst_z)};
}

// 7. Edgeworth validity.
Outcome edgeworth() {
    const Matrix x = intercept_design({-1, 0, 0.5, 1, 2, 3});
    const ModelMoments m = model_moments(x, Vector{1.2, 0.9});
    ModelMoments flat = m;
    flat.kappa3 = SymmetricTensor3(2);

    double worst_a = 0.0;
    std::mt19937_64 gen(7);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 1000; ++i) {
        const Vector z{m.mu[0] + 3 * nd(gen), m.mu[1] + 3 * nd(gen)};
        const double g = gaussian_density(z, flat);
        worst_a = std::max(worst_a, std::abs(edgeworth_density(z, flat) - g) / std::max(g, 1e-300));
    }

    const Matrix l = cholesky(m.sigma);
    const int cells = 600;
    const double h = 12.0 / cells;
    double integral = 0.0;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            const double y0 = -6 + (i + 0.5) * h, y1 = -6 + (j + 0.5) * h;
            const Vector z{m.mu[0] + l(0, 0) * y0, m.mu[1] + l(1, 0) * y0 + l(1, 1) * y1};
            integral += edgeworth_density(z, m);
        }
    integral *= h * h * l(0, 0) * l(1, 1);

    Matrix ones(12, 1);
    for (std::size_t i = 0; i < 12; ++i) ones(i, 0) = 1.0;
    const ModelMoments b = model_moments(ones, Vector{std::log(0.7 / 0.3)});
    double tv_e = 0.0, tv_g = 0.0;
    for (int k = 0; k <= 12; ++k) {
        const double pmf = std::exp(std::lgamma(13.0) - std::lgamma(k + 1.0) - std::lgamma(13.0 - k) +
                                    k * std::log(0.7) + (12 - k) * std::log(0.3));
        tv_e += 0.5 * std::abs(edgeworth_density(Vector{double(k)}, b) - pmf);
        tv_g += 0.5 * std::abs(gaussian_density(Vector{double(k)}, b) - pmf);
    }
    return {worst_a <= 1e-14 && std::abs(integral - 1.0) <= 0.01 && tv_e < tv_g,
            fmt("(a) %.1e (b) integral %.6f (c) TV %.5f", worst_a, integral, tv_e) + fmt(" vs gaussian %.5f", tv_g)};
}

// 8. Diagnostic along a family that slides from mixed to separated.
Outcome diagnostic_family() {
    const int n = 40;
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i) c[i] = -2.0 + 4.0 * i / (n - 1);
    const Matrix x = intercept_design(c);
    // Stage 0 SAFE, 1 MARGINAL, 2 SUSPECT, 3 separated.
    int stage = 0;
    double last = std::numeric_limits<double>::infinity();
    bool ok = true;
    std::string path;
    for (int m = n / 2; m >= 0; --m) {
        // Responses alternate inside a window of width 2m around the median
        // and are sorted by covariate outside it.
        std::vector<int> t(n);
        for (int i = 0; i < n; ++i)
            t[i] = (i >= n / 2 - m && i < n / 2 + m) ? (i - (n / 2 - m)) % 2 : int(i >= n / 2);
        const auto r = boundary_diagnostic(Dataset(x, t));
        int now;
        if (r.status == DiagnosticStatus::Separated) now = 3;
        else {
            now = r.verdict == Verdict::Safe ? 0 : r.verdict == Verdict::Marginal ? 1 : 2;
            ok = ok && r.dist_sq <= last;
            last = r.dist_sq;
        }
        ok = ok && now >= stage && now <= stage + 1;
        if (path.empty() || now != stage) {
            static const char* names[] = {"SAFE", "MARGINAL", "SUSPECT", "SEPARATED"};
            path += path.empty() ? names[now] : std::string(" > ") + names[now];
        }
        stage = now;
    }
    ok = ok && path == "SAFE > MARGINAL > SUSPECT > SEPARATED";
    return {ok, path};
}

// 9. Skewness of the slope estimate near the boundary versus at beta = 0.
Outcome skewness_growth() {
    const int n = 20;
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i) c[i] = -1.0 + 2.0 * i / (n - 1);
    const Matrix x = intercept_design(c);
    auto batch_skew = [&](const Vector& beta, double& se) {
        const auto ms = sample_mles(x, beta, 10000, RngStream(9, 0), 0);
        std::vector<double> s;
        for (const auto& b : ms.interior_estimates) s.push_back(b[1]);
        const int batches = 20;
        const std::size_t per = s.size() / batches;
        double mean = 0.0, sq = 0.0;
        for (int b = 0; b < batches; ++b) {
            const double k = skewness(std::span<const double>(s.data() + b * per, per));
            mean += k;
            sq += k * k;
        }
        mean /= batches;
        se = std::sqrt((sq / batches - mean * mean) / (batches - 1));
        return skewness(s);
    };
    const Vector near{0.0, 3.0};
    double max_p = 0.0;
    for (double v : c) max_p = std::max(max_p, oracle::logistic(near[0] + near[1] * v));
    double se0 = 0, se1 = 0;
    const double k0 = batch_skew({0.0, 0.0}, se0);
    const double k1 = batch_skew(near, se1);
    const double gap = std::abs(k1) - std::abs(k0);
    const double se = std::hypot(se0, se1);
    return {max_p >= 0.95 && gap > 5 * se,
            fmt("|skew| %.3f at beta=0, %.3f near boundary", std::abs(k0), std::abs(k1)) +
                fmt(", gap %.1f SE", gap / se)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 10. Byte-identical CLI output for identical configs.
Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "lrgeo_acceptance_determinism";
    fs::remove_all(root);
    const std::string input = (fs::path(LRGEO_DATA_DIR) / "iris_setosa_versicolor.csv").string();
    bool ok = true;
    for (const char* run : {"a", "b"}) {
        const std::string cmd = std::string("\"") + LRGEO_CLI_PATH + "\" --input-path \"" + input +
                                "\" --response-column setosa --covariate-columns sepal_length --reps 5000 "
                                "--seed 20240601 --output-dir \"" + (root / run).string() + "\" > /dev/null";
        ok = ok && std::system(cmd.c_str()) == 0;
    }
    int compared = 0;
    for (const char* f : {"report.json", "suffstat_samples.csv", "mle_samples.csv", "polytope.csv",
                          "contour.csv", "edgeworth_grid.csv"}) {
        const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
        ok = ok && !a.empty() && a == b;
        ++compared;
    }
    return {ok, std::to_string(compared) + " files compared"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_seconds;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {"envelope example", 1e-3, envelope_example},
        {"interlacing", 10, interlacing},
        {"face distance closed form", 30, face_distance},
        {"threshold-vertex theorem", 60, threshold_vertices},
        {"separation and recession", 60, separation},
        {"boundary-hit probability", 300, boundary_probability},
        {"edgeworth validity", 10, edgeworth},
        {"diagnostic behavior", 30, diagnostic_family},
        {"skewness growth", 120, skewness_growth},
        {"end-to-end determinism", 60, determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool within = secs < criteria[i].budget_seconds;
        const bool pass = o.ok && within;
        failures += !pass;
        std::printf("%s %2zu %-28s %s [%.3f s%s]\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.c_str(), secs, within ? "" : ", over budget");
        std::fflush(stdout);
    }
    return failures;
}
