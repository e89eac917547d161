#include "gaplab/gap_experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gaplab/error.hpp"
#include "gaplab/parallel.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab {
namespace {

constexpr double kWilsonZ = 1.959963984540054;

std::vector<double> sample_checked(const SpectrumSampler& sampler, std::uint64_t trial, std::uint64_t seed,
                                   std::size_t n) {
    std::vector<double> ev;
    try {
        ev = sampler(trial, seed);
    } catch (const Error& e) {
        throw Error(e.kind(), "trial " + std::to_string(trial) + " (seed " + std::to_string(seed) + "): " + e.what());
    }
    if (ev.size() != n)
        throw Error(ErrorKind::DimensionMismatch, "trial " + std::to_string(trial) + " returned " +
                                                      std::to_string(ev.size()) + " eigenvalues, expected " +
                                                      std::to_string(n));
    return ev;
}

// 0-based half-open range of i whose l-gap enters the bulk average.
std::pair<std::size_t, std::size_t> bulk_range(std::size_t n, std::size_t l, double eps) {
    const double nn = static_cast<double>(n);
    const auto first = static_cast<std::size_t>(std::max(1.0, std::ceil(eps * nn)));
    const auto last = std::min(static_cast<std::size_t>(std::floor((1.0 - eps) * nn)), n - l);
    if (last < first) throw Error(ErrorKind::InvalidConfig, "bulk index range is empty");
    return {first - 1, last};
}

}  // namespace

Rational c_exponent(std::uint32_t l) {
    if (l < 1 || l > (1u << 20)) throw Error(ErrorKind::OutOfRange, "c_exponent needs 1 <= l <= 2^20");
    const int d = std::bit_width(l) - 1;
    const std::int64_t two_d = std::int64_t{1} << d;
    const std::int64_t num = (3 * std::int64_t{l} + 3 - 2 * two_d) * two_d - 1;
    const std::int64_t g = std::gcd(num, std::int64_t{3});
    return {num / g, 3 / g};
}

std::string IndexMode::label() const {
    std::ostringstream os;
    switch (kind) {
        case IndexModeKind::single: os << "single(" << index << ")"; break;
        case IndexModeKind::bulk_average: os << "bulk(" << epsilon << ")"; break;
        case IndexModeKind::all_min: os << "all_min"; break;
    }
    return os.str();
}

void ExperimentConfig::validate() const {
    ensemble.validate();
    const std::size_t n = ensemble.n;
    if (trials == 0) throw Error(ErrorKind::InvalidConfig, "trials must be at least 1");
    if (l < 1 || l >= n) throw Error(ErrorKind::InvalidConfig, "l must satisfy 1 <= l <= n-1");
    if (delta_grid.empty()) throw Error(ErrorKind::InvalidConfig, "delta_grid is empty");
    for (std::size_t k = 0; k < delta_grid.size(); ++k) {
        if (!(delta_grid[k] > 0.0) || !std::isfinite(delta_grid[k]))
            throw Error(ErrorKind::InvalidConfig, "delta_grid entries must be positive");
        if (k > 0 && !(delta_grid[k] > delta_grid[k - 1]))
            throw Error(ErrorKind::InvalidConfig, "delta_grid must be strictly ascending");
    }
    switch (index_mode.kind) {
        case IndexModeKind::single:
            if (index_mode.index + l >= n) throw Error(ErrorKind::InvalidConfig, "single index out of range");
            break;
        case IndexModeKind::bulk_average:
            if (!(index_mode.epsilon >= 0.0 && index_mode.epsilon < 0.5))
                throw Error(ErrorKind::InvalidConfig, "bulk epsilon must lie in [0, 0.5)");
            bulk_range(n, l, index_mode.epsilon);
            break;
        case IndexModeKind::all_min: break;
    }
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

SpectrumSampler ensemble_sampler(const EnsembleSpec& spec) {
    return [spec](std::uint64_t, std::uint64_t seed) { return eigenvalues(sample(spec, seed)); };
}

TailCurve run_tail_experiment(const ExperimentConfig& config) {
    config.validate();
    return run_tail_experiment(config, ensemble_sampler(config.ensemble));
}

TailCurve run_tail_experiment(const ExperimentConfig& config, const SpectrumSampler& sampler) {
    config.validate();
    const std::size_t n = config.ensemble.n;
    const std::size_t l = config.l;
    const std::size_t grid = config.delta_grid.size();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    std::size_t lo = 0, hi = 0;
    if (config.index_mode.kind == IndexModeKind::bulk_average)
        std::tie(lo, hi) = bulk_range(n, l, config.index_mode.epsilon);

    // successes[t * grid + k] for trial t, grid point k; events per trial are fixed
    std::vector<std::uint64_t> successes(config.trials * grid, 0);
    std::uint64_t events_per_trial = 1;
    if (config.index_mode.kind == IndexModeKind::bulk_average) events_per_trial = hi - lo;

    parallel_for(config.trials, config.workers, [&](std::size_t t) {
        const std::uint64_t seed = derive_seed(config.master_seed, t);
        const auto ev = sample_checked(sampler, t, seed, n);
        std::vector<double> g;
        switch (config.index_mode.kind) {
            case IndexModeKind::single: {
                const std::size_t i = config.index_mode.index;
                g.push_back(ev[i + l] - ev[i]);
                break;
            }
            case IndexModeKind::bulk_average:
                for (std::size_t i = lo; i < hi; ++i) g.push_back(ev[i + l] - ev[i]);
                break;
            case IndexModeKind::all_min: {
                double m = ev[l] - ev[0];
                for (std::size_t i = 1; i + l < n; ++i) m = std::min(m, ev[i + l] - ev[i]);
                g.push_back(m);
                break;
            }
        }
        std::sort(g.begin(), g.end());
        for (std::size_t k = 0; k < grid; ++k) {
            const double threshold = config.delta_grid[k] * inv_sqrt_n;
            successes[t * grid + k] = static_cast<std::uint64_t>(std::upper_bound(g.begin(), g.end(), threshold) - g.begin());
        }
    });

    TailCurve curve{n, l, config.index_mode, config.master_seed, {}};
    for (std::size_t k = 0; k < grid; ++k) {
        TailPoint pt;
        pt.delta = config.delta_grid[k];
        pt.trials = events_per_trial * config.trials;
        for (std::size_t t = 0; t < config.trials; ++t) pt.successes += successes[t * grid + k];
        pt.p_hat = static_cast<double>(pt.successes) / static_cast<double>(pt.trials);
        const auto ci = wilson_interval(pt.successes, pt.trials);
        pt.ci_lo = ci.lo;
        pt.ci_hi = ci.hi;
        curve.points.push_back(pt);
    }
    return curve;
}

ExponentFit fit_exponent(const TailCurve& curve, double delta_min, double delta_max) {
    ExponentFit fit;
    fit.delta_min = delta_min;
    fit.delta_max = delta_max;
    std::vector<double> xs, ys;
    for (const TailPoint& pt : curve.points) {
        if (pt.delta < delta_min || pt.delta > delta_max) continue;
        if (pt.successes == 0) {
            fit.excluded.push_back(pt.delta);
            continue;
        }
        fit.used.push_back(pt.delta);
        xs.push_back(std::log(pt.delta));
        ys.push_back(std::log(pt.p_hat));
    }
    if (xs.size() < 2) throw Error(ErrorKind::InsufficientData, "fewer than two usable grid points in range");

    const double k = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        fit.residual += r * r;
    }
    if (xs.size() > 2) fit.slope_stderr = std::sqrt(fit.residual / (k - 2.0) / sxx);
    return fit;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto below = static_cast<std::size_t>(std::floor(pos));
    const std::size_t above = std::min(below + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(below);
    return sorted[below] + frac * (sorted[above] - sorted[below]);
}

MinGapSummary min_gap_experiment(const EnsembleSpec& ensemble, std::size_t trials, std::size_t workers) {
    ensemble.validate();
    return min_gap_experiment(ensemble.n, trials, ensemble.master_seed, ensemble_sampler(ensemble), workers);
}

MinGapSummary min_gap_experiment(std::size_t n, std::size_t trials, std::uint64_t master_seed,
                                 const SpectrumSampler& sampler, std::size_t workers) {
    if (trials == 0) throw Error(ErrorKind::InvalidConfig, "trials must be at least 1");
    MinGapSummary summary;
    summary.records.resize(trials);
    const double scale = std::pow(static_cast<double>(n), 1.5);
    parallel_for(trials, workers, [&](std::size_t t) {
        const std::uint64_t seed = derive_seed(master_seed, t);
        const auto ev = sample_checked(sampler, t, seed, n);
        const MinGap mg = min_gap(ev);
        summary.records[t] = {t, n, mg.value, mg.value * scale, mg.index, seed};
    });
    std::vector<double> scaled;
    scaled.reserve(trials);
    for (const auto& r : summary.records) scaled.push_back(r.min_gap_scaled);
    std::sort(scaled.begin(), scaled.end());
    summary.min = scaled.front();
    summary.q1 = quantile_sorted(scaled, 0.25);
    summary.median = quantile_sorted(scaled, 0.5);
    summary.q3 = quantile_sorted(scaled, 0.75);
    summary.max = scaled.back();
    return summary;
}

SimpleSpectrumResult simple_spectrum_experiment(const EnsembleSpec& ensemble, std::size_t trials, double tol,
                                                std::size_t workers) {
    ensemble.validate();
    return simple_spectrum_experiment(trials, tol, ensemble.master_seed, ensemble_sampler(ensemble), workers);
}

SimpleSpectrumResult simple_spectrum_experiment(std::size_t trials, double tol, std::uint64_t master_seed,
                                                const SpectrumSampler& sampler, std::size_t workers) {
    if (trials == 0) throw Error(ErrorKind::InvalidConfig, "trials must be at least 1");
    if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidConfig, "tol must be >= 0");
    SimpleSpectrumResult result;
    result.tol = tol;
    result.records.resize(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
        const std::uint64_t seed = derive_seed(master_seed, t);
        std::vector<double> ev;
        try {
            ev = sampler(t, seed);
        } catch (const Error& e) {
            throw Error(e.kind(), "trial " + std::to_string(t) + " (seed " + std::to_string(seed) + "): " + e.what());
        }
        const double mg = min_gap(ev).value;
        result.records[t] = {t, mg, mg > tol, seed};
    });
    const auto simple = std::count_if(result.records.begin(), result.records.end(),
                                      [](const SimpleRecord& r) { return r.is_simple; });
    result.fraction = static_cast<double>(simple) / static_cast<double>(trials);
    return result;
}

}  // namespace gaplab
