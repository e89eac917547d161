#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gaplab/error.hpp"
#include "gaplab/smoothed_power.hpp"
#include "gaplab/spectral.hpp"

using namespace gaplab;

namespace {

SymmetricMatrix near_degenerate(std::size_t n) {
    std::vector<double> d(n, 0.0);
    d[0] = 1.0;
    d[1] = 1.0 - 1e-12;
    return SymmetricMatrix::diagonal(d);
}

}  // namespace

TEST_CASE("diag(2, 1) converges to e1 at the closed-form rate") {
    const auto a = SymmetricMatrix::diagonal(std::vector<double>{2.0, 1.0});
    const double r = 1.0 / std::sqrt(2.0);
    const auto t = power_iterate(a, std::vector<double>{r, r}, 1e-6, 1000);
    CHECK(t.converged);
    CHECK(t.lambda == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(t.u[0]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t.shift == 0.0);
    // u_k = (2^k, 1)/norm, so the residual is 2^k / (4^k + 1); first k with residual <= 1e-6
    std::size_t k = 0;
    while (std::ldexp(1.0, static_cast<int>(k)) / (std::ldexp(1.0, 2 * static_cast<int>(k)) + 1.0) > 1e-6) ++k;
    CHECK(t.iterations == k);
    CHECK(k >= 18);
    CHECK(k <= 24);
    CHECK(t.residuals.back() <= 1e-6);
    CHECK(t.residuals.size() == t.iterations + 1);
}

TEST_CASE("eigenvector starts converge at iteration zero") {
    const auto id = SymmetricMatrix::identity(5);
    std::vector<double> u(5, 1.0 / std::sqrt(5.0));
    const auto t = power_iterate(id, u, 1e-6, 10);
    CHECK(t.converged);
    CHECK(t.iterations == 0);
    CHECK(t.lambda == doctest::Approx(1.0));
    CHECK(t.residuals[0] == doctest::Approx(0.0));

    PowerOptions strict;
    strict.criterion = ConvergenceCriterion::eigenvector_error;
    CHECK(power_iterate(id, u, strict).iterations == 0);

    // e2 is an invariant direction of diag(2, 1): converged, but to the lower pair
    const auto d = SymmetricMatrix::diagonal(std::vector<double>{2.0, 1.0});
    const auto low = power_iterate(d, std::vector<double>{0.0, 1.0}, 1e-6, 100);
    CHECK(low.converged);
    CHECK(low.lambda == 1.0);
    // the eigenvector criterion rejects it
    const auto rej = power_iterate(d, std::vector<double>{0.0, 1.0}, PowerOptions{1e-6, 100, ConvergenceCriterion::eigenvector_error});
    CHECK_FALSE(rej.converged);
}

TEST_CASE("power iteration errors") {
    const SymmetricMatrix zero(3);
    std::vector<double> u{1.0, 0.0, 0.0};
    try {
        power_iterate(zero, u, 1e-6, 10);
        FAIL("expected Breakdown");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Breakdown);
    }
    CHECK_THROWS_AS(power_iterate(SymmetricMatrix::identity(3), std::vector<double>{1.0, 1.0, 0.0}, 1e-6, 10), Error);
    CHECK_THROWS_AS(power_iterate(SymmetricMatrix::identity(3), std::vector<double>{1.0, 0.0}, 1e-6, 10), Error);
    CHECK_THROWS_AS(power_iterate(SymmetricMatrix::identity(3), u, 0.0, 10), Error);
}

TEST_CASE("non-PSD input is shifted and the shift is removed from lambda") {
    const auto a = SymmetricMatrix::diagonal(std::vector<double>{-3.0, 1.0, 2.0});
    const auto t = power_iterate(a, start_vector(3, 4), 1e-8, 10000);
    CHECK(t.converged);
    CHECK(t.shift == doctest::Approx(3.3));
    CHECK(t.lambda == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("predicted iterations") {
    CHECK(predicted_iterations(2.0, 1.0, 1e-6) == 28);
    CHECK(predicted_iterations(1.0, 0.999, 1e-3) == 6908);
    CHECK(static_cast<double>(predicted_iterations(1.0, 1.0 - 1e-12, 1e-6)) == doctest::Approx(1.38e13).epsilon(0.01));
    try {
        predicted_iterations(1.0, 1.0, 1e-3);
        FAIL("expected GapZero");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GapZero);
    }
    CHECK_THROWS_AS(predicted_iterations(1.0, 2.0, 1e-3), Error);
    CHECK_THROWS_AS(predicted_iterations(2.0, 1.0, 1.0), Error);
}

TEST_CASE("sigma = 0 reproduces plain power iteration") {
    const auto f = near_degenerate(10);
    PowerOptions o{1e-6, 500, ConvergenceCriterion::eigenvector_error};
    const auto s = smoothed_solve(f, 0.0, o, 3);
    const auto p = power_iterate(f, start_vector(10, 3), o);
    CHECK(s.trace.iterations == p.iterations);
    CHECK(s.trace.lambda == p.lambda);
    CHECK(s.trace.u == p.u);
    CHECK(s.weyl_bound == 0.0);
    CHECK(s.certificate_holds);
}

TEST_CASE("near-degenerate top pair: plain stalls, smoothed converges") {
    const std::size_t n = 50;
    const auto f = near_degenerate(n);
    PowerOptions o{1e-6, 10000, ConvergenceCriterion::eigenvector_error};
    const auto plain = smoothed_solve(f, 0.0, o, 1);
    CHECK_FALSE(plain.trace.converged);

    int converged = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = smoothed_solve(f, 0.01, o, seed);
        CHECK(s.certificate_holds);
        if (!s.trace.converged) continue;
        ++converged;
        const auto pred = predicted_iterations(s.trace.lambda, s.trace.lambda - s.gap_perturbed, o.tol);
        CHECK(s.trace.iterations <= 10 * pred);
    }
    CHECK(converged >= 4);
}

TEST_CASE("full-spectrum Weyl inequality") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t n = 20;
        const auto f = sample_wigner(n, EntryLaw::uniform(), EntryLaw::uniform(), 1000 + seed);
        const double sigma = 0.05 * static_cast<double>(seed + 1);
        const auto x = sample_wigner(n, EntryLaw::gaussian(), EntryLaw::gaussian(), seed);
        const auto m = sample_perturbed(f, n, EntryLaw::gaussian(), EntryLaw::gaussian(), sigma, seed);
        const auto ef = eigenvalues(f), em = eigenvalues(m);
        const double bound = sigma * spectral_norm(x) + 1e-9;
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(em[i] - ef[i]) <= bound);
    }
}
