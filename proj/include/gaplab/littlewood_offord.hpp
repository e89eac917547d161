#pragma once

// Anti-concentration toolkit for weighted sums S = sum_i xi_i x_i of iid
// variables: small-ball probabilities rho_delta(x) = sup_a P(|S - a| <= delta),
// their segmental variant, compressibility, spread sets, the least common
// denominator (LCD) of a vector in one and two dimensions, the regularized
// LCD, and generalized arithmetic progressions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gaplab/ensembles.hpp"

namespace gaplab {

// ---------------------------------------------------------------------------
// Small-ball probabilities

enum class SmallBallMethod { exact_enumeration, monte_carlo };

struct SmallBallEstimate {
    double delta = 0.0;
    double estimate = 0.0;
    std::uint64_t trials = 0;  // 2^n for exact enumeration
    double half_width = 0.0;   // DKW 95% radius; 0 for exact
    SmallBallMethod method = SmallBallMethod::exact_enumeration;
};

/// sqrt(ln(2/0.05) / (2 trials)).
double dkw_half_width(std::uint64_t trials);

/// Largest total weight of the sorted atoms `values` falling in any closed
/// window of length `width`. Weights default to 1 each.
double max_window_mass(std::span<const double> sorted_values, double width,
                       std::span<const double> weights = {});

/// Exact rho_delta for a two-point law (rademacher or centered_bernoulli)
/// by enumerating all 2^n outcomes. TooLarge above n = 20; InvalidConfig
/// for continuous laws.
SmallBallEstimate small_ball_exact(std::span<const double> x, double delta,
                                   const EntryLaw& law = EntryLaw::rademacher());

/// Empirical sup-window estimate from `trials` sampled sums (>= 100).
SmallBallEstimate small_ball(std::span<const double> x, double delta, const EntryLaw& law, std::uint64_t trials,
                             std::uint64_t seed);

struct SegmentalStrategy {
    bool exhaustive = false;        // enumerate all floor(alpha n)-subsets
    std::size_t random_subsets = 32;
    EntryLaw law = EntryLaw::rademacher();
};

struct SegmentalEstimate {
    SmallBallEstimate estimate;      // upper bound on rho_{delta, alpha}(v)
    std::vector<std::size_t> witness;
    std::size_t candidates = 0;
};

/// min over a candidate family of floor(alpha n)-subsets I of rho_delta(v_I).
/// Each candidate is evaluated exactly when the law is two-point and
/// |I| <= 20, otherwise by Monte Carlo with `trials` draws from `seed`.
SegmentalEstimate segmental_small_ball(std::span<const double> v, double delta, double alpha,
                                       const SegmentalStrategy& strategy, std::uint64_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Compressibility and spread

struct CompressParams {
    double c0 = 0.5;
    double c1 = 0.5;
    double c_prime() const { return c0 * c1 * c1 / 4.0; }
    void validate() const;
};

enum class Compressibility { sparse, compressible, incompressible };

/// Requires ||x|| = 1 within 1e-10.
Compressibility classify(std::span<const double> x, const CompressParams& params);

/// The ceil(c' n) lowest indices k with c1/sqrt(2n) <= |x_k| <= 1/sqrt(c0 n).
/// InsufficientSpread when fewer qualify.
std::vector<std::size_t> spread_set(std::span<const double> x, const CompressParams& params);

// ---------------------------------------------------------------------------
// Least common denominator

struct LcdParams {
    double kappa = 0.5;
    double gamma = 0.5;
    double theta_max = 0.0;  // <= 0 selects 8 sqrt(n) / gamma
    void validate() const;
    double theta_max_for(std::size_t n) const;
};

struct LcdResult {
    bool bounded = false;
    double value = 0.0;  // bracket lower endpoint; theta_max when unbounded
    double achieved_distance = 0.0;
    std::vector<std::int64_t> witness;  // nearest lattice point at the admissible end of the bracket
};

/// Euclidean distance from theta x to Z^n (ties round to even).
double lattice_distance(double theta, std::span<const double> x);

/// dist(theta x, Z^n) < min(gamma ||theta x||, kappa), compared with 1e-12 slack.
bool lcd_admissible(double theta, std::span<const double> x, const LcdParams& params);

/// inf{theta > 0 : dist(theta x, Z^n) < min(gamma ||theta x||, kappa)}, found by
/// a Lipschitz-certified scan up to theta_max followed by bisection to 1e-9.
LcdResult lcd(std::span<const double> x, const LcdParams& params);

struct RegularizedLcd {
    bool bounded = true;
    double value = 0.0;  // lower bound on the maximum over the full family
    std::vector<std::size_t> witness;
    std::size_t candidates = 0;
};

/// max over |I| = ceil(alpha n), I within spread(x), of lcd(x_I / ||x_I||).
/// The candidates are the lowest-index subset plus `budget` random subsets,
/// or every subset when there are at most budget + 1 of them. Requires
/// 0 < alpha < c'/4.
RegularizedLcd regularized_lcd(std::span<const double> x, double alpha, const LcdParams& params,
                               const CompressParams& compress, std::size_t budget, std::uint64_t seed);

/// inf over unit x in span{v, w} of lcd(x): uniform grid of angular_steps
/// angles in [0, pi), then golden-section refinement around the best one.
double lcd_2d(std::span<const double> v, std::span<const double> w, const LcdParams& params,
              std::size_t angular_steps);

// ---------------------------------------------------------------------------
// Erdos-type inverse Littlewood-Offord check

struct ErdosCheck {
    bool holds = false;
    double rho = 0.0;        // exact, or Monte Carlo minus its half width
    double threshold = 0.0;  // n^{-1/2 + eps}
    std::size_t large_coordinates = 0;
};

/// Evaluates "rho_delta(v) >= n^{-1/2+eps} implies #{i : |v_i| > delta} <= eps n"
/// on one unit vector. Exact enumeration for n <= 20, else Monte Carlo.
ErdosCheck erdos_check(std::span<const double> v, double delta, double eps, std::uint64_t trials = 100000,
                       std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Generalized arithmetic progressions

struct Gap {
    std::vector<double> generators;
    std::vector<std::int64_t> dims;

    std::size_t rank() const { return generators.size(); }
    /// prod (2 N_i + 1)
    double volume() const;
    void validate() const;
};

/// Sorted distinct points of the progression; TooLarge above volume 10^6.
std::vector<double> gap_points(const Gap& g);

/// Unit vector whose unnormalized coordinates are uniform draws from the
/// progression plus independent uniform jitter in [-jitter, jitter].
std::vector<double> gap_vector(const Gap& g, std::size_t n, std::uint64_t seed, double jitter);

}  // namespace gaplab
