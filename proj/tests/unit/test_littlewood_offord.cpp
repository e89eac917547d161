#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gaplab/error.hpp"
#include "gaplab/littlewood_offord.hpp"
#include "gaplab/rng.hpp"

using namespace gaplab;

namespace {

std::vector<double> normalized(std::vector<double> x) {
    double s = 0.0;
    for (double t : x) s += t * t;
    s = std::sqrt(s);
    for (double& t : x) t /= s;
    return x;
}

std::vector<double> uniform_vector(std::size_t n) { return std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n))); }

std::vector<double> gaussian_unit(std::size_t n, std::uint64_t seed) {
    Engine rng = make_engine(seed);
    std::normal_distribution<double> z;
    std::vector<double> x(n);
    for (auto& t : x) t = z(rng);
    return normalized(x);
}

// Brute force sup_a P(|S - a| <= delta) over Rademacher signs: every optimal
// window can be slid until its left edge sits on an atom.
double rho_oracle(const std::vector<double>& x, double delta) {
    const std::size_t n = x.size();
    std::vector<double> sums;
    for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += ((m >> i) & 1u) ? x[i] : -x[i];
        sums.push_back(s);
    }
    std::size_t best = 0;
    for (double left : sums) {
        std::size_t c = 0;
        for (double s : sums)
            if (s >= left - 1e-12 && s <= left + 2.0 * delta + 1e-12) ++c;
        best = std::max(best, c);
    }
    return static_cast<double>(best) / static_cast<double>(sums.size());
}

// First admissible theta on a uniform grid, an upper bound on the LCD within one step.
double lcd_grid_oracle(const std::vector<double>& x, double kappa, double gamma, double theta_max, double step) {
    double nrm = 0.0;
    for (double t : x) nrm += t * t;
    nrm = std::sqrt(nrm);
    for (double th = step; th <= theta_max; th += step) {
        double d2 = 0.0;
        for (double t : x) {
            const double r = th * t - std::nearbyint(th * t);
            d2 += r * r;
        }
        if (std::sqrt(d2) < std::min(gamma * th * nrm, kappa)) return th;
    }
    return std::numeric_limits<double>::infinity();
}

double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("exact small ball examples") {
    CHECK(small_ball_exact(std::vector<double>{1.0}, 0.5).estimate == doctest::Approx(0.5));
    CHECK(small_ball_exact(normalized({1, 1}), 0.1).estimate == doctest::Approx(0.5));
    const auto e = small_ball_exact(normalized({1, 2, 4}), 0.01);
    CHECK(e.estimate == doctest::Approx(0.125));
    CHECK(e.half_width == 0.0);
    CHECK(e.method == SmallBallMethod::exact_enumeration);
    CHECK_THROWS_AS(small_ball_exact(std::vector<double>(21, 0.1), 0.1), Error);
    CHECK_THROWS_AS(small_ball_exact(std::vector<double>{1.0}, 0.1, EntryLaw::gaussian()), Error);
}

TEST_CASE("exact small ball agrees with brute force and is monotone in delta") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 1 + seed % 10;
        auto x = gaussian_unit(n, seed);
        if (seed % 3 == 0) for (auto& t : x) t = std::round(t * 4.0) / 4.0;
        double prev = 0.0;
        for (double delta : {0.0, 0.05, 0.1, 0.25, 0.5, 1.0}) {
            const double rho = small_ball_exact(x, delta).estimate;
            CHECK(rho == doctest::Approx(rho_oracle(x, delta)));
            CHECK(rho >= prev - 1e-15);
            prev = rho;
        }
    }
}

TEST_CASE("centered Bernoulli enumeration weights atoms") {
    // one coordinate: atoms 1-p (mass p) and -p (mass 1-p)
    const auto e = small_ball_exact(std::vector<double>{1.0}, 0.1, EntryLaw::centered_bernoulli(0.3));
    CHECK(e.estimate == doctest::Approx(0.7));
    const auto both = small_ball_exact(std::vector<double>{1.0}, 0.5, EntryLaw::centered_bernoulli(0.3));
    CHECK(both.estimate == doctest::Approx(1.0));
}

TEST_CASE("restriction to a superset never increases the small ball probability") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto x = gaussian_unit(10, 100 + seed);
        for (std::size_t k = 1; k < 10; ++k) {
            const std::vector<double> small(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k));
            const std::vector<double> big(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k + 1));
            CHECK(small_ball_exact(big, 0.1).estimate <= small_ball_exact(small, 0.1).estimate + 1e-12);
        }
    }
}

TEST_CASE("Monte Carlo small ball tracks exact and gaussian oracles") {
    const auto a = small_ball(std::vector<double>{1.0}, 0.5, EntryLaw::rademacher(), 100000, 1);
    CHECK(std::abs(a.estimate - 0.5) <= 0.01);
    CHECK(a.half_width == doctest::Approx(std::sqrt(std::log(40.0) / 200000.0)));
    const auto b = small_ball(normalized({1, 2, 4}), 0.01, EntryLaw::rademacher(), 100000, 2);
    CHECK(std::abs(b.estimate - 0.125) <= 0.01);
    const auto g = small_ball(uniform_vector(100), 0.1, EntryLaw::gaussian(), 20000, 3);
    CHECK(std::abs(g.estimate - (2.0 * phi_cdf(0.1) - 1.0)) <= g.half_width);
    CHECK_THROWS_AS(small_ball(std::vector<double>{1.0}, 0.1, EntryLaw::rademacher(), 99, 0), Error);
}

TEST_CASE("Monte Carlo matches exact within the DKW radius on small vectors") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = gaussian_unit(2 + seed % 11, 500 + seed);
        const double exact = small_ball_exact(x, 0.1).estimate;
        const auto mc = small_ball(x, 0.1, EntryLaw::rademacher(), 5000, seed);
        if (std::abs(mc.estimate - exact) <= mc.half_width) ++hits;
    }
    CHECK(hits >= 19);
}

TEST_CASE("segmental small ball") {
    SegmentalStrategy exhaustive;
    exhaustive.exhaustive = true;
    const auto e = segmental_small_ball(std::vector<double>{1, 0, 0, 0}, 0.1, 0.5, exhaustive, 1000, 0);
    CHECK(e.estimate.estimate == doctest::Approx(0.5));
    CHECK(e.candidates == 6);
    CHECK(std::find(e.witness.begin(), e.witness.end(), std::size_t{0}) != e.witness.end());

    // exhaustive minimum equals the brute-force minimum over subsets
    const auto x = gaussian_unit(8, 9);
    const auto ex = segmental_small_ball(x, 0.1, 0.5, exhaustive, 1000, 0);
    double brute = 1.0;
    for (unsigned m = 0; m < 256; ++m) {
        if (__builtin_popcount(m) != 4) continue;
        std::vector<double> sub;
        for (unsigned i = 0; i < 8; ++i)
            if ((m >> i) & 1u) sub.push_back(x[i]);
        brute = std::min(brute, rho_oracle(sub, 0.1));
    }
    CHECK(ex.estimate.estimate == doctest::Approx(brute));

    // sorted windows plus random subsets give an upper bound on the exact minimum
    const auto heuristic = segmental_small_ball(x, 0.1, 0.5, SegmentalStrategy{}, 1000, 0);
    CHECK(heuristic.estimate.estimate >= ex.estimate.estimate - 1e-12);
    CHECK(small_ball_exact(x, 0.1).estimate <= heuristic.estimate.estimate + 1e-12);

    // constant vector: every subset is equivalent
    const auto u = uniform_vector(10);
    const auto cu = segmental_small_ball(u, 0.05, 0.4, SegmentalStrategy{}, 1000, 0);
    CHECK(cu.estimate.estimate == doctest::Approx(small_ball_exact(std::vector<double>(4, u[0]), 0.05).estimate));

    CHECK_THROWS_AS(segmental_small_ball(x, 0.1, 0.0, SegmentalStrategy{}, 1000, 0), Error);
    CHECK_THROWS_AS(segmental_small_ball(x, 0.1, 0.1, SegmentalStrategy{}, 1000, 0), Error);
}

TEST_CASE("compressibility classification") {
    std::vector<double> e1(100, 0.0);
    e1[0] = 1.0;
    CHECK(classify(e1, {0.1, 0.3}) == Compressibility::sparse);
    CHECK(classify(uniform_vector(100), {0.1, 0.3}) == Compressibility::incompressible);

    std::vector<double> c(100, 1e-4 / std::sqrt(90.0));
    for (int i = 0; i < 10; ++i) c[i] = (1.0 - 1e-8) / std::sqrt(10.0);
    c = normalized(c);
    CHECK(classify(c, {0.1, 0.3}) == Compressibility::compressible);

    CHECK_THROWS_AS(classify(std::vector<double>{1.0, 1.0}, {0.5, 0.5}), Error);
    CHECK_THROWS_AS(classify(e1, {1.0, 0.5}), Error);
}

TEST_CASE("spread set") {
    const CompressParams p{0.5, 0.5};
    for (std::size_t n : {32u, 64u, 100u, 400u}) {
        const auto s = spread_set(uniform_vector(n), p);
        const auto want = static_cast<std::size_t>(std::ceil(0.5 * 0.25 * static_cast<double>(n) / 4.0 - 1e-12));
        REQUIRE(s.size() == want);
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == i);
    }
    std::vector<double> e1(100, 0.0);
    e1[0] = 1.0;
    try {
        spread_set(e1, p);
        FAIL("expected InsufficientSpread");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientSpread);
    }
}

TEST_CASE("lcd of the constant vector is 1.9") {
    const std::vector<double> x(4, 0.5);
    const LcdParams p{0.1, 0.1, 0.0};
    const auto r = lcd(x, p);
    REQUIRE(r.bounded);
    CHECK(r.value == doctest::Approx(1.9).epsilon(1e-7));
    CHECK(r.witness == std::vector<std::int64_t>{1, 1, 1, 1});
    CHECK(lcd_grid_oracle(x, 0.1, 0.1, 10.0, 1e-4) == doctest::Approx(1.9).epsilon(2e-4));
    CHECK(lcd_admissible(r.value + 1e-6, x, p));
    CHECK_FALSE(lcd_admissible(r.value - 1e-6, x, p));
}

TEST_CASE("lcd of (0.6, 0.8) is the left end of its admissible interval") {
    // theta = 5 gives the lattice point (3, 4); dist < kappa already holds on (4.9, 5.1)
    const std::vector<double> x{0.6, 0.8};
    const LcdParams p{0.1, 0.1, 10.0};
    const auto r = lcd(x, p);
    REQUIRE(r.bounded);
    CHECK(r.value == doctest::Approx(4.9).epsilon(1e-7));
    CHECK(r.witness == std::vector<std::int64_t>{3, 4});
    CHECK(std::abs(lcd_grid_oracle(x, 0.1, 0.1, 10.0, 1e-4) - r.value) <= 2e-4);
    CHECK(lcd_admissible(r.value + 1e-6, x, p));
    CHECK_FALSE(lcd_admissible(r.value - 1e-6, x, p));
}

TEST_CASE("lcd agrees with the grid oracle and is signed-permutation invariant") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        auto x = gaussian_unit(2 + seed % 4, 40 + seed);
        const LcdParams p{0.3, 0.3, 30.0};
        const auto r = lcd(x, p);
        const double oracle = lcd_grid_oracle(x, 0.3, 0.3, 30.0, 1e-4);
        if (!r.bounded) {
            CHECK(std::isinf(oracle));
            continue;
        }
        CHECK(r.value <= oracle + 1e-9);
        CHECK(oracle - r.value <= 1.1e-4);
        CHECK(r.achieved_distance <= std::min(0.3 * r.value, 0.3) + 1e-6);

        auto y = x;
        std::reverse(y.begin(), y.end());
        y[0] = -y[0];
        const auto ry = lcd(y, p);
        CHECK(ry.value == doctest::Approx(r.value).epsilon(1e-8));
        for (auto& t : y) t = -t;
        CHECK(lcd(y, p).value == doctest::Approx(r.value).epsilon(1e-8));
    }
}

TEST_CASE("lcd reports unbounded past theta_max and rejects bad input") {
    const std::vector<double> x{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0) * std::numbers::sqrt3 / std::sqrt(3.0)};
    const auto r = lcd(normalized({1.0, std::numbers::sqrt2}), {0.01, 0.01, 3.0});
    CHECK_FALSE(r.bounded);
    CHECK(r.value == 3.0);
    CHECK_THROWS_AS(lcd(std::vector<double>{0.0, 0.0}, {0.1, 0.1, 0.0}), Error);
    CHECK_THROWS_AS(lcd(x, {0.1, 1.0, 0.0}), Error);
    CHECK_THROWS_AS(lcd(x, {0.0, 0.1, 0.0}), Error);
}

TEST_CASE("regularized lcd") {
    const CompressParams cp{0.5, 0.5};
    const LcdParams p{0.5, 0.25, 0.0};
    const std::size_t n = 400;
    const double alpha = 0.0075;  // ceil(alpha n) = 3, spread size 13

    // constant vector: all subsets give the same normalized constant vector
    const auto u = regularized_lcd(uniform_vector(n), alpha, p, cp, 20, 1);
    const auto direct = lcd(std::vector<double>(3, 1.0 / std::sqrt(3.0)), p);
    CHECK(u.value == doctest::Approx(direct.value));
    CHECK(u.witness.size() == 3);

    // permuting coordinates inside and outside the spread set moves the witness with them
    std::vector<double> x(n);
    Engine rng = make_engine(3);
    std::uniform_real_distribution<double> mag(0.75, 1.25);
    for (auto& t : x) t = mag(rng) * ((rng() & 1u) ? 1.0 : -1.0);
    x = normalized(x);
    const auto base = regularized_lcd(x, alpha, p, cp, 1000, 5);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::reverse(perm.begin(), perm.begin() + 13);
    std::reverse(perm.begin() + 13, perm.end());
    std::vector<double> px(n);
    for (std::size_t i = 0; i < n; ++i) px[perm[i]] = x[i];
    const auto moved = regularized_lcd(px, alpha, p, cp, 1000, 5);
    CHECK(moved.value == doctest::Approx(base.value).epsilon(1e-9));
    std::vector<std::size_t> mapped;
    for (std::size_t i : base.witness) mapped.push_back(perm[i]);
    std::sort(mapped.begin(), mapped.end());
    CHECK(moved.witness == mapped);

    // random candidates only add to the lowest-index one
    const auto low = regularized_lcd(x, alpha, p, cp, 0, 5);
    CHECK(low.candidates == 1);
    CHECK(base.value >= low.value);

    CHECK_THROWS_AS(regularized_lcd(x, 0.2, p, cp, 10, 0), Error);
    std::vector<double> e1(n, 0.0);
    e1[0] = 1.0;
    try {
        regularized_lcd(e1, alpha, p, cp, 10, 0);
        FAIL("expected InsufficientSpread");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientSpread);
    }
}

TEST_CASE("two-dimensional lcd") {
    const std::vector<double> v{0.6, 0.8, 0.0, 0.0};
    const std::vector<double> w{0.0, 0.0, 0.6, 0.8};
    const LcdParams p{0.1, 0.1, 10.0};
    const double val = lcd_2d(v, w, p, 64);
    CHECK(val <= std::min(lcd(v, p).value, lcd(w, p).value) + 1e-9);

    // rotated basis of the same plane
    const double a = 0.3;
    std::vector<double> v2(4), w2(4);
    for (int i = 0; i < 4; ++i) {
        v2[i] = std::cos(a) * v[i] + std::sin(a) * w[i];
        w2[i] = -std::sin(a) * v[i] + std::cos(a) * w[i];
    }
    CHECK(std::abs(lcd_2d(v2, w2, p, 64) - val) <= 1e-3);

    // non-orthogonal input is orthogonalized
    std::vector<double> w3(4);
    for (int i = 0; i < 4; ++i) w3[i] = w[i] + 0.5 * v[i];
    CHECK(lcd_2d(v, w3, p, 64) == doctest::Approx(val));
    CHECK_THROWS_AS(lcd_2d(v, v, p, 64), Error);
}

TEST_CASE("erdos check examples") {
    std::vector<double> e1(10, 0.0);
    e1[0] = 1.0;
    const auto a = erdos_check(e1, 0.1, 0.2);
    CHECK(a.holds);
    CHECK(a.rho == doctest::Approx(0.5));
    CHECK(a.large_coordinates == 1);

    const auto u = uniform_vector(16);
    CHECK(erdos_check(u, 2.0 / 4.0, 0.1).holds);
    CHECK(erdos_check(u, 2.0 / 4.0, 0.1).large_coordinates == 0);

    std::vector<double> pw;
    for (int k = 0; k < 10; ++k) pw.push_back(std::ldexp(1.0, k));
    pw = normalized(pw);
    const auto c = erdos_check(pw, 1e-4, 0.2);
    CHECK(c.rho == doctest::Approx(1.0 / 1024.0));
    CHECK(c.rho < c.threshold);
    CHECK(c.holds);
}

TEST_CASE("GAP enumeration and structured vectors") {
    CHECK(gap_points({{1.0}, {2}}) == std::vector<double>{-2, -1, 0, 1, 2});
    const Gap g2{{1.0, 7.0}, {2, 1}};
    CHECK(g2.volume() == 15.0);
    CHECK(gap_points(g2).size() == 15);
    const auto irr = gap_points({{1.0, std::numbers::sqrt2}, {1, 1}});
    CHECK(irr.size() == 9);
    CHECK(gap_points({{1.0, 1.0}, {1, 1}}).size() == 5);
    CHECK(gap_points({{}, {}}) == std::vector<double>{0.0});
    CHECK_THROWS_AS(gap_points({{1.0, 1.0}, {1000, 1000}}), Error);

    const auto v = gap_vector({{1.0}, {2}}, 50, 7, 0.0);
    double s = 0.0;
    for (double t : v) s += t * t;
    CHECK(s == doctest::Approx(1.0));
    // unjittered coordinates are integer multiples of a common step
    double step = 0.0;
    for (double t : v) step = std::max(step, std::abs(t));
    for (double t : v) {
        const double q = t / step * 2.0;
        CHECK(std::abs(q - std::round(q)) < 1e-9);
    }
}
