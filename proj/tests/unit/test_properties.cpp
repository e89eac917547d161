#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gaplab/littlewood_offord.hpp"
#include "gaplab/rng.hpp"
#include "support/corpus.hpp"

using namespace gaplab;

namespace {

// zeta = |xi - a| for Rademacher xi takes the two values below with
// probability 1/2 each.
constexpr double kShift = 0.3;
constexpr double kLow = 1.0 - kShift;
constexpr double kHigh = 1.0 + kShift;

double zeta_cdf(double t) { return (t > kLow ? 0.5 : 0.0) + (t > kHigh ? 0.5 : 0.0); }

// P(sum of n zeta^2 < t^2 n), by counting how many coordinates take kLow.
double sum_cdf(std::size_t n, double t) {
    double p = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double s = k * kLow * kLow + (n - k) * kHigh * kHigh;
        if (s < t * t * n) p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) *
                                std::pow(0.5, static_cast<double>(n));
    }
    return p;
}

// inf over lambda >= 0 of e^{lambda t^2} E e^{-lambda zeta^2}
double chernoff_factor(double t) {
    double best = 1.0;
    for (double lam = 0.0; lam <= 200.0; lam += 0.01) {
        const double m = 0.5 * std::exp(-lam * kLow * kLow) + 0.5 * std::exp(-lam * kHigh * kHigh);
        best = std::min(best, std::exp(lam * t * t) * m);
    }
    return best;
}

std::vector<double> t_grid() {
    std::vector<double> g;
    for (double t = 0.05; t <= 1.6; t += 0.01) g.push_back(t);
    return g;
}

}  // namespace

TEST_CASE("tensorization of small-ball bounds for independent non-negative variables") {
    const auto grid = t_grid();

    // per-coordinate P(zeta < t) <= K t, K from enumeration of the two atoms
    double k_const = 0.0;
    for (double t : {kLow, kHigh}) k_const = std::max(k_const, (t == kLow ? 0.5 : 1.0) / t);
    for (double t : grid) CHECK(zeta_cdf(t) <= k_const * t + 1e-15);

    // C from the per-coordinate Chernoff factor, which does not depend on n
    double c_const = 0.0;
    for (double t : grid) c_const = std::max(c_const, chernoff_factor(t) / (k_const * t));

    // a calibration read off n = 4 alone must not exceed it
    double c4 = 0.0;
    for (double t : grid) c4 = std::max(c4, std::pow(sum_cdf(4, t), 0.25) / (k_const * t));
    CHECK(c4 <= c_const + 1e-12);

    for (std::size_t n : {2u, 4u, 8u}) {
        CAPTURE(n);
        for (double t : grid) {
            CAPTURE(t);
            CHECK(sum_cdf(n, t) <= std::pow(c_const * k_const * t, static_cast<double>(n)) + 1e-12);
        }
    }

    // sampled frequencies agree with the exact count at n = 8
    Engine rng = make_engine(0x7E45);
    const std::size_t trials = 200000;
    for (double t : {0.9, 1.1, 1.2}) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < trials; ++i) {
            double s = 0.0;
            for (int k = 0; k < 8; ++k) {
                const double z = std::abs(((rng() & 1u) ? 1.0 : -1.0) - kShift);
                s += z * z;
            }
            hits += s < t * t * 8 ? 1 : 0;
        }
        const double freq = static_cast<double>(hits) / trials;
        CHECK(freq <= std::pow(c_const * k_const * t, 8.0) + dkw_half_width(trials));
        CHECK(std::abs(freq - sum_cdf(8, t)) <= dkw_half_width(trials));
    }
}

namespace {

const Gap kProgression{{1.0}, {2}};  // {-2, ..., 2}, volume 5
constexpr double kJitter = 0.01;

// Normalized radius covering one lattice step plus the accumulated jitter.
double structured_radius(std::size_t n) {
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));  // E k^2 = 2 for k uniform on Q
    return scale * (1.0 + static_cast<double>(n) * kJitter);
}

double concentration_ratio(double rho, std::size_t n) {
    return rho * 2.0 * kProgression.volume() * std::sqrt(static_cast<double>(n));
}

}  // namespace

TEST_CASE("vectors drawn from a small progression concentrate") {
    // pilot at n = 12 fixes the calibration constant
    double pilot = INFINITY;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto v = gap_vector(kProgression, 12, 500 + seed, kJitter);
        pilot = std::min(pilot, concentration_ratio(small_ball_exact(v, structured_radius(12)).estimate, 12));
    }
    const double calibration = 0.5 * pilot;
    REQUIRE(calibration > 0.0);

    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto v = gap_vector(kProgression, 16, 600 + seed, kJitter);
        CHECK(concentration_ratio(small_ball_exact(v, structured_radius(16)).estimate, 16) >= calibration);
    }
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto v = gap_vector(kProgression, 64, 700 + seed, kJitter);
        const auto mc = small_ball(v, structured_radius(64), EntryLaw::rademacher(), 100000, 800 + seed);
        CHECK(concentration_ratio(mc.estimate - mc.half_width, 64) >= calibration);
    }

    // a generic vector at the same radius is far less concentrated
    const auto g = testing::gaussian_unit(16, 900);
    double structured = INFINITY;
    for (std::uint64_t seed = 0; seed < 8; ++seed)
        structured = std::min(structured,
                              small_ball_exact(gap_vector(kProgression, 16, 600 + seed, kJitter), structured_radius(16))
                                  .estimate);
    CHECK(small_ball_exact(g, structured_radius(16)).estimate < structured);
}
