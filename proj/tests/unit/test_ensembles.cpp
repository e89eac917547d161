#include "doctest.h"

#include <cmath>
#include <vector>

#include "gaplab/ensembles.hpp"
#include "gaplab/error.hpp"

using namespace gaplab;

TEST_CASE("rademacher n=2 with zero diagonal") {
    for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
        const auto m = sample_wigner(2, EntryLaw::rademacher(), std::nullopt, seed);
        CHECK(m(0, 0) == 0.0);
        CHECK(m(1, 1) == 0.0);
        CHECK(std::abs(m(0, 1)) == 1.0);
        CHECK(m(0, 1) == m(1, 0));
    }
}

TEST_CASE("same seed gives a bit-identical matrix") {
    const auto a = sample_wigner(50, EntryLaw::gaussian(), EntryLaw::gaussian(), 7);
    const auto b = sample_wigner(50, EntryLaw::gaussian(), EntryLaw::gaussian(), 7);
    CHECK(a == b);
    const auto c = sample_wigner(50, EntryLaw::gaussian(), EntryLaw::gaussian(), 8);
    CHECK_FALSE(a == c);
}

TEST_CASE("gaussian n=200 off-diagonal moments") {
    const std::size_t n = 200;
    const auto m = sample_wigner(n, EntryLaw::gaussian(), EntryLaw::gaussian(), 2024);
    double sum = 0.0, sq = 0.0;
    const double count = n * (n - 1) / 2.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            sum += m(i, j);
            sq += m(i, j) * m(i, j);
        }
    const double mean = sum / count;
    const double var = sq / count - mean * mean;
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(count));
    CHECK(std::abs(var - 1.0) <= 0.1);
}

TEST_CASE("every built-in law matches its mean and variance within 5 standard errors") {
    struct Case {
        EntryLaw law;
        double fourth_moment;
    };
    const double p = 0.3;
    const double bern4 = p * std::pow(1 - p, 4) + (1 - p) * std::pow(p, 4);
    const std::vector<Case> cases{
        {EntryLaw::gaussian(), 3.0},
        {EntryLaw::rademacher(), 1.0},
        {EntryLaw::uniform(), 9.0 / 5.0},
        {EntryLaw::centered_bernoulli(p), bern4},
    };
    const std::size_t draws = 100000;
    for (const Case& c : cases) {
        CAPTURE(law_name(c.law.kind));
        Engine rng = make_engine(31337);
        EntrySampler sampler(c.law);
        double s = 0.0, s2 = 0.0;
        for (std::size_t k = 0; k < draws; ++k) {
            const double x = sampler(rng);
            s += x;
            s2 += x * x;
        }
        const double mean = s / draws;
        const double second = s2 / draws;
        const double var = c.law.variance();
        CHECK(std::abs(mean) <= 5.0 * std::sqrt(var / draws));
        const double var_se = std::sqrt((c.fourth_moment - var * var) / draws);
        CHECK(std::abs(second - var) <= 5.0 * var_se + 1e-15);
    }
}

TEST_CASE("adjacency endpoints and edge count") {
    const auto k3 = sample_adjacency(3, 1.0, 5);
    const auto empty = sample_adjacency(3, 0.0, 5);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(k3(i, j) == (i == j ? 0.0 : 1.0));
            CHECK(empty(i, j) == 0.0);
        }

    const std::size_t n = 100;
    const auto g = sample_adjacency(n, 0.5, 77);
    double edges = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(g(i, i) == 0.0);
        for (std::size_t j = i + 1; j < n; ++j) edges += g(i, j);
    }
    const double pairs = n * (n - 1) / 2.0;
    const double sd = std::sqrt(pairs * 0.25);
    CHECK(sd == doctest::Approx(35.18).epsilon(1e-3));
    CHECK(std::abs(edges - 2475.0) <= 5.0 * sd);
}

TEST_CASE("perturbed model identities") {
    const std::size_t n = 30;
    const auto wig = sample_wigner(n, EntryLaw::gaussian(), EntryLaw::gaussian(), 11);
    const auto pert = sample_perturbed(SymmetricMatrix(n), n, EntryLaw::gaussian(), EntryLaw::gaussian(), 1.0, 11);
    CHECK(wig == pert);

    const auto f = sample_wigner(n, EntryLaw::uniform(), std::nullopt, 3);
    CHECK(sample_perturbed(f, n, EntryLaw::gaussian(), EntryLaw::gaussian(), 0.0, 11) == f);

    CHECK_THROWS_AS(sample_perturbed(f, n + 1, EntryLaw::gaussian(), std::nullopt, 1.0, 1), Error);
}

TEST_CASE("half-filled deterministic part plus centered bernoulli noise reproduces G(n, 1/2)") {
    const std::size_t n = 100;
    SymmetricMatrix f(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) f.set(i, j, 0.5);

    const std::size_t samples = 10000;
    double ones_first = 0.0, ones_last = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const auto m = sample_perturbed(f, n, EntryLaw::centered_bernoulli(0.5), std::nullopt, 1.0, derive_seed(9, s));
        if (s < 20) {
            for (std::size_t i = 0; i < n; ++i) {
                REQUIRE(m(i, i) == 0.0);
                for (std::size_t j = i + 1; j < n; ++j) REQUIRE((m(i, j) == 0.0 || m(i, j) == 1.0));
            }
        }
        ones_first += m(0, 1);
        ones_last += m(n - 2, n - 1);
    }
    const double se = std::sqrt(0.25 / samples);
    CHECK(std::abs(ones_first / samples - 0.5) <= 5 * se);
    CHECK(std::abs(ones_last / samples - 0.5) <= 5 * se);
}

TEST_CASE("ensemble spec validation") {
    EnsembleSpec spec;
    spec.n = 1;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.n = 10;
    CHECK_NOTHROW(spec.validate());
    spec.kind = EnsembleKind::adjacency;
    spec.p = 1.0;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.p = 0.3;
    CHECK_NOTHROW(spec.validate());
    spec.kind = EnsembleKind::perturbed;
    spec.deterministic_part = SymmetricMatrix(9);
    try {
        spec.validate();
        FAIL("expected a dimension mismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
}

TEST_CASE("dense round trip preserves exact symmetry and rejects asymmetric input") {
    const auto m = sample_wigner(12, EntryLaw::gaussian(), EntryLaw::gaussian(), 4);
    const auto dense = m.to_dense();
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j) CHECK(dense[i * 12 + j] == dense[j * 12 + i]);
    CHECK(SymmetricMatrix::from_dense(12, dense) == m);
    auto bad = dense;
    bad[1] += 1e-12;
    CHECK_THROWS_AS(SymmetricMatrix::from_dense(12, bad), Error);
}

TEST_CASE("trial seeds are distinct and order independent") {
    CHECK(derive_seed(42, 0) != derive_seed(42, 1));
    CHECK(derive_seed(42, 0) != derive_seed(43, 0));
    CHECK(derive_seed(42, 17) == derive_seed(42, 17));
}
