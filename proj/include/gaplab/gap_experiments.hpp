#pragma once

// Monte Carlo estimates of eigenvalue-gap tail probabilities
// P(lambda_{i+l} - lambda_i <= delta / sqrt(n)), minimum-gap floors and
// simple-spectrum frequencies. Trial t always draws from the stream
// derive_seed(master_seed, t), so every result is independent of the worker
// count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaplab/ensembles.hpp"

namespace gaplab {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Exponent c_l = ((3l + 3 - 2^{d+1}) 2^d - 1) / 3 with d = floor(log2 l),
/// reduced to lowest terms. Requires 1 <= l <= 2^20.
Rational c_exponent(std::uint32_t l);

enum class IndexModeKind { single, bulk_average, all_min };

struct IndexMode {
    IndexModeKind kind = IndexModeKind::bulk_average;
    std::size_t index = 0;   // single: 0-based i, event on lambda[i+l] - lambda[i]
    double epsilon = 0.25;   // bulk_average: 1-based indices in [eps n, (1-eps) n]

    static IndexMode single(std::size_t i) { return {IndexModeKind::single, i, 0.25}; }
    static IndexMode bulk(double eps) { return {IndexModeKind::bulk_average, 0, eps}; }
    static IndexMode all_min() { return {IndexModeKind::all_min, 0, 0.25}; }

    /// "single(3)", "bulk(0.25)", "all_min"
    std::string label() const;
};

struct ExperimentConfig {
    EnsembleSpec ensemble;
    std::size_t trials = 1000;
    std::size_t l = 1;
    std::vector<double> delta_grid;
    IndexMode index_mode;
    std::uint64_t master_seed = 0;
    std::size_t workers = 1;

    void validate() const;
};

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// 95% Wilson score interval.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

struct TailPoint {
    double delta = 0.0;
    std::uint64_t trials = 0;     // pooled events: samples x indices in bulk mode
    std::uint64_t successes = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
};

struct TailCurve {
    std::size_t n = 0;
    std::size_t l = 1;
    IndexMode index_mode;
    std::uint64_t seed = 0;
    std::vector<TailPoint> points;
};

/// Produces the ascending eigenvalues for one trial.
using SpectrumSampler = std::function<std::vector<double>(std::uint64_t trial, std::uint64_t seed)>;

SpectrumSampler ensemble_sampler(const EnsembleSpec& spec);

TailCurve run_tail_experiment(const ExperimentConfig& config);
/// Same harness over an arbitrary spectrum source (config.ensemble.n gives n).
TailCurve run_tail_experiment(const ExperimentConfig& config, const SpectrumSampler& sampler);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;       // sum of squared log residuals
    double slope_stderr = 0.0;   // 0 when only two points were used
    double delta_min = 0.0;
    double delta_max = 0.0;
    std::vector<double> used;
    std::vector<double> excluded;  // zero-success points inside the range
};

/// Least-squares slope of log p_hat against log delta over grid points in
/// [delta_min, delta_max] with at least one success. InsufficientData when
/// fewer than two remain.
ExponentFit fit_exponent(const TailCurve& curve, double delta_min, double delta_max);

struct MinGapRecord {
    std::uint64_t trial = 0;
    std::size_t n = 0;
    double min_gap = 0.0;
    double min_gap_scaled = 0.0;  // min_gap * n^{3/2}
    std::size_t index = 0;
    std::uint64_t seed = 0;
};

struct MinGapSummary {
    std::vector<MinGapRecord> records;
    // order statistics of min_gap_scaled
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

MinGapSummary min_gap_experiment(const EnsembleSpec& ensemble, std::size_t trials, std::size_t workers = 1);
MinGapSummary min_gap_experiment(std::size_t n, std::size_t trials, std::uint64_t master_seed,
                                 const SpectrumSampler& sampler, std::size_t workers = 1);

struct SimpleRecord {
    std::uint64_t trial = 0;
    double min_gap = 0.0;
    bool is_simple = false;
    std::uint64_t seed = 0;
};

struct SimpleSpectrumResult {
    double fraction = 0.0;
    double tol = 0.0;
    std::vector<SimpleRecord> records;
};

SimpleSpectrumResult simple_spectrum_experiment(const EnsembleSpec& ensemble, std::size_t trials, double tol,
                                                std::size_t workers = 1);
SimpleSpectrumResult simple_spectrum_experiment(std::size_t trials, double tol, std::uint64_t master_seed,
                                                const SpectrumSampler& sampler, std::size_t workers = 1);

/// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace gaplab
