#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrgeo/multinomial_geometry.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <random>

using namespace lrgeo;

namespace {

ProbabilityVector random_interior(std::mt19937_64& gen, std::size_t cells) {
    std::exponential_distribution<double> e(1.0);
    Vector p(cells);
    for (double& v : p) v = e(gen) + 1e-3;
    return ProbabilityVector(p);
}

}  // namespace

TEST_CASE("ProbabilityVector renormalizes and validates") {
    ProbabilityVector p({2.0, 1.0, 1.0});
    CHECK(p[0] == 0.5);
    CHECK(p.k() == 2);
    CHECK(p.without_reference() == Vector{0.25, 0.25});
    CHECK(p.interior());
    CHECK_FALSE(ProbabilityVector({1.0, 0.0}).interior());
    CHECK_THROWS_AS(ProbabilityVector({1.0, -0.1}), DomainError);
    CHECK_THROWS_AS(ProbabilityVector({0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(ProbabilityVector({1.0}), DomainError);

    ProbabilityVector shifted({0.2, 0.3, 0.5}, 2);
    CHECK(shifted.without_reference() == Vector{0.2, 0.3});
    CHECK(shifted.cell_of(1) == 0);
    CHECK(shifted.cell_of(2) == 1);
}

TEST_CASE("fisher_information examples") {
    auto m = fisher_information(ProbabilityVector({0.5, 0.5}));
    REQUIRE(m.dim() == 1);
    CHECK(m(0, 0) == 0.25);

    m = fisher_information(ProbabilityVector({1.0, 1.0, 1.0}));
    CHECK(m(0, 0) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(m(1, 1) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(m(0, 1) == doctest::Approx(-1.0 / 9.0).epsilon(1e-15));

    m = fisher_information(ProbabilityVector({0.5, 0.5, 0.0}));
    CHECK(m(0, 0) == 0.25);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 1) == 0.0);
    CHECK_THROWS_AS(cholesky(m), NotPositiveDefinite);
}

TEST_CASE("fisher_information entries, trace and eigenvalue range") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto pi = random_interior(gen, 2 + trial % 10);
        const auto m = fisher_information(pi);
        const Vector p = pi.without_reference();
        double trace = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            trace += p[i] * (1.0 - p[i]);
            for (std::size_t j = 0; j < p.size(); ++j) {
                const double expected = i == j ? p[i] - p[i] * p[i] : -p[i] * p[j];
                REQUIRE(m(i, j) == expected);
            }
        }
        REQUIRE(m.trace() == doctest::Approx(trace).epsilon(1e-14));
        const auto e = sym_eigen(m);
        const double pmax = *std::max_element(p.begin(), p.end());
        REQUIRE(e.values.back() >= -1e-14);
        REQUIRE(e.values.front() <= pmax + 1e-14);
    }
}

TEST_CASE("fisher_spectrum examples") {
    auto s = fisher_spectrum(ProbabilityVector({1.0, 1.0, 1.0}));
    REQUIRE(s.distinct_probs.size() == 1);
    CHECK(s.distinct_probs[0].multiplicity == 2);
    REQUIRE(s.simple_eigenvalues.size() == 1);
    CHECK(s.simple_eigenvalues[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    REQUIRE(s.repeated_eigenvalues.size() == 1);
    CHECK(s.repeated_eigenvalues[0].value == doctest::Approx(1.0 / 3.0));
    CHECK(s.repeated_eigenvalues[0].multiplicity == 1);
    CHECK(s.interlaced());

    s = fisher_spectrum(ProbabilityVector({0.5, 0.3, 0.2}));
    REQUIRE(s.simple_eigenvalues.size() == 2);
    CHECK(s.repeated_eigenvalues.empty());
    const auto dense = sym_eigen(fisher_information(ProbabilityVector({0.5, 0.3, 0.2})));
    CHECK(s.simple_eigenvalues[0] == doctest::Approx(dense.values[0]).epsilon(1e-12));
    CHECK(s.simple_eigenvalues[1] == doctest::Approx(dense.values[1]).epsilon(1e-12));
    CHECK(s.simple_eigenvalues[0] < 0.3);
    CHECK(s.simple_eigenvalues[0] > 0.2);
    CHECK(s.simple_eigenvalues[1] < 0.2);
    CHECK(s.interlaced());

    s = fisher_spectrum(ProbabilityVector({0.5, 0.5}));
    REQUIRE(s.simple_eigenvalues.size() == 1);
    CHECK(s.simple_eigenvalues[0] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("fisher_spectrum with zero cells") {
    // Free cell at zero contributes a zero eigenvalue.
    auto s = fisher_spectrum(ProbabilityVector({0.5, 0.5, 0.0}));
    const Vector all = s.all_eigenvalues();
    const auto dense = sym_eigen(fisher_information(ProbabilityVector({0.5, 0.5, 0.0})));
    REQUIRE(all.size() == 2);
    CHECK(all[0] == doctest::Approx(dense.values[0]));
    CHECK(all[1] == doctest::Approx(dense.values[1]));

    // Reference cell at zero makes the smallest simple eigenvalue zero.
    s = fisher_spectrum(ProbabilityVector({0.0, 0.6, 0.4}));
    REQUIRE(s.simple_eigenvalues.size() == 2);
    CHECK(s.simple_eigenvalues[1] == doctest::Approx(0.0));
    CHECK(s.interlaced());
}

TEST_CASE("fisher_spectrum interlaces and matches dense eigenvalues") {
    std::mt19937_64 gen(17);
    std::uniform_int_distribution<int> level(1, 6);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t cells = 2 + trial % 10;
        Vector p(cells);
        // Tied values on purpose to exercise repeated eigenvalues.
        for (double& v : p) v = trial % 2 ? level(gen) : std::exponential_distribution<double>(1.0)(gen) + 1e-3;
        const ProbabilityVector pi(p);
        const auto s = fisher_spectrum(pi);
        REQUIRE(s.interlaced(1e-10));
        const Vector all = s.all_eigenvalues();
        const auto dense = sym_eigen(fisher_information(pi));
        REQUIRE(all.size() == dense.values.size());
        for (std::size_t i = 0; i < all.size(); ++i) REQUIRE(std::abs(all[i] - dense.values[i]) <= 1e-9);
    }
}

TEST_CASE("face_distance_sq examples") {
    const ProbabilityVector third({1.0, 1.0, 1.0});
    CHECK(face_distance_sq(third, FaceIndexSet({1}, 2)) == doctest::Approx(0.5).epsilon(1e-15));
    const ProbabilityVector half({0.5, 0.25, 0.25});
    CHECK(face_distance_sq(half, FaceIndexSet({1, 2}, 2)) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(face_distance_sq(ProbabilityVector({0.5, 0.5, 0.0}), FaceIndexSet({1}, 2)), DomainError);
    CHECK_THROWS_AS(FaceIndexSet({}, 2), DomainError);
    CHECK_THROWS_AS(FaceIndexSet({0}, 2), DomainError);
    CHECK_THROWS_AS(FaceIndexSet({3}, 2), DomainError);
}

TEST_CASE("face_distance_sq matches the projected-gradient QP") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t k = 1 + trial % 4;
        const auto pi = random_interior(gen, k + 1);
        std::set<std::size_t> face;
        std::vector<std::size_t> cells;
        for (std::size_t i = 1; i <= k; ++i)
            if (gen() % 2) face.insert(i);
        if (face.empty()) face.insert(1 + gen() % k);
        for (std::size_t i : face) cells.push_back(pi.cell_of(i));
        const double closed = face_distance_sq(pi, FaceIndexSet(face, k));
        const double qp = oracle::face_qp(pi.probs(), cells);
        REQUIRE(std::abs(closed - qp) <= 1e-6);
    }
}

TEST_CASE("face_distance_sq is monotone under nesting") {
    std::mt19937_64 gen(29);
    for (int trial = 0; trial < 500; ++trial) {
        const auto pi = random_interior(gen, 6);
        std::set<std::size_t> small{1 + gen() % 5};
        std::set<std::size_t> big = small;
        big.insert(1 + gen() % 5);
        big.insert(1 + gen() % 5);
        REQUIRE(face_distance_sq(pi, FaceIndexSet(small, 5)) <= face_distance_sq(pi, FaceIndexSet(big, 5)));
    }
}
