#include "gaplab/littlewood_offord.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <utility>

#include "gaplab/error.hpp"
#include "gaplab/simd/kernels.hpp"

namespace gaplab {
namespace {

constexpr double kAdmissibleSlack = 1e-12;
constexpr double kBracketWidth = 1e-9;
constexpr std::size_t kMaxExactDim = 20;

struct Atom {
    double value;
    double weight;
};

std::pair<Atom, Atom> two_point_atoms(const EntryLaw& law) {
    switch (law.kind) {
        case LawKind::rademacher: return {{-1.0, 0.5}, {1.0, 0.5}};
        case LawKind::centered_bernoulli: return {{-law.p, 1.0 - law.p}, {1.0 - law.p, law.p}};
        default: break;
    }
    throw Error(ErrorKind::InvalidConfig, "exact enumeration needs a two-point law, got " + std::string(law_name(law.kind)));
}

void check_delta(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw Error(ErrorKind::InvalidConfig, "delta must be finite and >= 0");
}

double norm2(std::span<const double> x) { return std::sqrt(simd::dot(x, x)); }

// ceil(v) that ignores representation error just above an integer
std::size_t ceil_count(double v) { return static_cast<std::size_t>(std::ceil(v - 1e-9)); }

std::vector<double> gather(std::span<const double> x, const std::vector<std::size_t>& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(x[i]);
    return out;
}

double choose(std::size_t n, std::size_t k) {
    double c = 1.0;
    for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return c;
}

// Advances a sorted k-combination of {0..n-1}; false after the last one.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, Engine& rng) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

SmallBallEstimate evaluate_small_ball(std::span<const double> x, double delta, const EntryLaw& law,
                                      std::uint64_t trials, std::uint64_t seed) {
    if (law.discrete() && x.size() <= kMaxExactDim) return small_ball_exact(x, delta, law);
    return small_ball(x, delta, law, trials, seed);
}

class LcdSearch {
public:
    LcdSearch(std::span<const double> x, const LcdParams& p)
        : x_(x), p_(p), norm_(norm2(x)), lipschitz_(norm_ * (1.0 + p.gamma)) {}

    double norm() const { return norm_; }

    // dist(theta x, Z^n) - min(gamma theta ||x||, kappa)
    double f(double theta) const {
        return std::sqrt(simd::lattice_dist2(theta, x_)) - std::min(p_.gamma * theta * norm_, p_.kappa);
    }
    bool admissible(double theta) const { return f(theta) < kAdmissibleSlack; }

    // Leftmost admissible point of [a, b] to within kBracketWidth, returned as
    // (inadmissible lo, admissible hi). Cells whose Lipschitz lower bound is
    // positive are discarded without further evaluation.
    std::optional<std::pair<double, double>> refine(double a, double b) const {
        if (admissible(a)) return std::pair{a, a};
        const double c = 0.5 * (a + b);
        const double fc = f(c);
        if (fc - 0.5 * lipschitz_ * (b - a) >= kAdmissibleSlack) return std::nullopt;
        if (b - a < kBracketWidth) {
            if (fc < kAdmissibleSlack) return std::pair{a, c};
            if (admissible(b)) return std::pair{c, b};
            return std::nullopt;
        }
        if (auto left = refine(a, c)) return left;
        return refine(c, b);
    }

private:
    std::span<const double> x_;
    LcdParams p_;
    double norm_;
    double lipschitz_;
};

}  // namespace

// ---------------------------------------------------------------------------

double dkw_half_width(std::uint64_t trials) {
    if (trials == 0) return 1.0;
    return std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(trials)));
}

double max_window_mass(std::span<const double> sorted_values, double width, std::span<const double> weights) {
    if (!weights.empty() && weights.size() != sorted_values.size())
        throw Error(ErrorKind::DimensionMismatch, "weights and values differ in length");
    if (sorted_values.empty()) return 0.0;
    const double scale = std::max(std::abs(sorted_values.front()), std::abs(sorted_values.back()));
    const double reach = width + 1e-12 * (1.0 + scale);
    auto w = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

    double best = 0.0, mass = 0.0;
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < sorted_values.size(); ++lo) {
        while (hi < sorted_values.size() && sorted_values[hi] - sorted_values[lo] <= reach) mass += w(hi++);
        best = std::max(best, mass);
        mass -= w(lo);
    }
    return best;
}

SmallBallEstimate small_ball_exact(std::span<const double> x, double delta, const EntryLaw& law) {
    check_delta(delta);
    if (x.size() > kMaxExactDim)
        throw Error(ErrorKind::TooLarge, "exact enumeration is limited to n <= 20, got " + std::to_string(x.size()));
    const auto [lo_atom, hi_atom] = two_point_atoms(law);
    const std::size_t count = std::size_t{1} << x.size();

    std::vector<std::pair<double, double>> outcomes(count);
    double base = 0.0, base_w = 1.0;
    for (double xi : x) {
        base += lo_atom.value * xi;
        base_w *= lo_atom.weight;
    }
    outcomes[0] = {base, base_w};
    const double ratio = hi_atom.weight / lo_atom.weight;
    for (std::size_t b = 0; b < x.size(); ++b) {
        const std::size_t top = std::size_t{1} << b;
        const double step = (hi_atom.value - lo_atom.value) * x[b];
        for (std::size_t m = 0; m < top; ++m)
            outcomes[top + m] = {outcomes[m].first + step, outcomes[m].second * ratio};
    }
    std::sort(outcomes.begin(), outcomes.end());
    std::vector<double> values(count), weights(count);
    for (std::size_t i = 0; i < count; ++i) std::tie(values[i], weights[i]) = outcomes[i];

    SmallBallEstimate est;
    est.delta = delta;
    est.estimate = std::min(1.0, max_window_mass(values, 2.0 * delta, weights));
    est.trials = count;
    est.half_width = 0.0;
    est.method = SmallBallMethod::exact_enumeration;
    return est;
}

SmallBallEstimate small_ball(std::span<const double> x, double delta, const EntryLaw& law, std::uint64_t trials,
                             std::uint64_t seed) {
    check_delta(delta);
    if (trials < 100) throw Error(ErrorKind::InvalidConfig, "small_ball needs at least 100 trials");
    Engine rng = make_engine(seed);
    EntrySampler draw(law);
    std::vector<double> sums(trials);
    for (auto& s : sums) {
        double acc = 0.0;
        for (double xi : x) acc += draw(rng) * xi;
        s = acc;
    }
    std::sort(sums.begin(), sums.end());

    SmallBallEstimate est;
    est.delta = delta;
    est.estimate = max_window_mass(sums, 2.0 * delta) / static_cast<double>(trials);
    est.trials = trials;
    est.half_width = dkw_half_width(trials);
    est.method = SmallBallMethod::monte_carlo;
    return est;
}

SegmentalEstimate segmental_small_ball(std::span<const double> v, double delta, double alpha,
                                       const SegmentalStrategy& strategy, std::uint64_t trials, std::uint64_t seed) {
    check_delta(delta);
    const std::size_t n = v.size();
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidConfig, "alpha must lie in (0, 1]");
    const auto k = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) + 1e-9));
    if (k < 1) throw Error(ErrorKind::InvalidConfig, "floor(alpha n) must be at least 1");

    SegmentalEstimate best;
    best.estimate.estimate = std::numeric_limits<double>::infinity();
    auto consider = [&](const std::vector<std::size_t>& subset) {
        const auto sub = gather(v, subset);
        const auto est = evaluate_small_ball(sub, delta, strategy.law, trials, seed);
        ++best.candidates;
        if (est.estimate < best.estimate.estimate) {
            best.estimate = est;
            best.witness = subset;
        }
    };

    if (strategy.exhaustive) {
        if (choose(n, k) > 1e6) throw Error(ErrorKind::TooLarge, "exhaustive subset family exceeds 10^6 members");
        std::vector<std::size_t> c(k);
        std::iota(c.begin(), c.end(), std::size_t{0});
        do consider(c);
        while (next_combination(c, n));
        return best;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(v[a]) < std::abs(v[b]); });
    for (std::size_t start = 0; start + k <= n; ++start) {
        std::vector<std::size_t> w(order.begin() + static_cast<std::ptrdiff_t>(start),
                                   order.begin() + static_cast<std::ptrdiff_t>(start + k));
        std::sort(w.begin(), w.end());
        consider(w);
    }
    Engine rng = make_engine(mix64(seed ^ 0x5E6D3A1ULL));
    for (std::size_t r = 0; r < strategy.random_subsets; ++r) consider(random_subset(n, k, rng));
    return best;
}

// ---------------------------------------------------------------------------

void CompressParams::validate() const {
    if (!(c0 > 0.0 && c0 < 1.0)) throw Error(ErrorKind::InvalidConfig, "c0 must lie in (0, 1)");
    if (!(c1 > 0.0 && c1 < 1.0)) throw Error(ErrorKind::InvalidConfig, "c1 must lie in (0, 1)");
}

Compressibility classify(std::span<const double> x, const CompressParams& params) {
    params.validate();
    const std::size_t n = x.size();
    if (n == 0 || std::abs(norm2(x) - 1.0) > 1e-10) throw Error(ErrorKind::InvalidConfig, "classify needs a unit vector");

    const double nn = static_cast<double>(n);
    const auto support = static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](double t) { return std::abs(t) > 1e-14; }));
    if (static_cast<double>(support) <= params.c0 * nn) return Compressibility::sparse;

    std::vector<double> mag(n);
    std::transform(x.begin(), x.end(), mag.begin(), [](double t) { return std::abs(t); });
    std::sort(mag.begin(), mag.end(), std::greater<>());
    const auto keep = std::min(n, static_cast<std::size_t>(std::floor(params.c0 * nn + 1e-9)));
    double tail = 0.0;
    for (std::size_t i = keep; i < n; ++i) tail += mag[i] * mag[i];
    return std::sqrt(tail) <= params.c1 ? Compressibility::compressible : Compressibility::incompressible;
}

std::vector<std::size_t> spread_set(std::span<const double> x, const CompressParams& params) {
    params.validate();
    const std::size_t n = x.size();
    if (n == 0) throw Error(ErrorKind::InvalidConfig, "spread_set of an empty vector");
    const double nn = static_cast<double>(n);
    const std::size_t want = std::max<std::size_t>(1, ceil_count(params.c_prime() * nn));
    const double lower = params.c1 / std::sqrt(2.0 * nn);
    const double upper = 1.0 / std::sqrt(params.c0 * nn);

    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n && out.size() < want; ++i) {
        const double a = std::abs(x[i]);
        if (a >= lower && a <= upper) out.push_back(i);
    }
    if (out.size() < want)
        throw Error(ErrorKind::InsufficientSpread, "only " + std::to_string(out.size()) + " coordinates in the spread band, need " +
                                                        std::to_string(want));
    return out;
}

// ---------------------------------------------------------------------------

void LcdParams::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw Error(ErrorKind::InvalidConfig, "kappa must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::InvalidConfig, "gamma must lie in (0, 1)");
    if (std::isnan(theta_max)) throw Error(ErrorKind::InvalidConfig, "theta_max is NaN");
}

double LcdParams::theta_max_for(std::size_t n) const {
    return theta_max > 0.0 ? theta_max : 8.0 * std::sqrt(static_cast<double>(n)) / gamma;
}

double lattice_distance(double theta, std::span<const double> x) { return std::sqrt(simd::lattice_dist2(theta, x)); }

bool lcd_admissible(double theta, std::span<const double> x, const LcdParams& params) {
    const double limit = std::min(params.gamma * theta * norm2(x), params.kappa);
    return lattice_distance(theta, x) - limit < kAdmissibleSlack;
}

LcdResult lcd(std::span<const double> x, const LcdParams& params) {
    params.validate();
    if (x.empty()) throw Error(ErrorKind::InvalidConfig, "lcd of an empty vector");
    double max_abs = 0.0;
    for (double t : x) {
        if (!std::isfinite(t)) throw Error(ErrorKind::InvalidConfig, "lcd input is not finite");
        max_abs = std::max(max_abs, std::abs(t));
    }
    if (max_abs == 0.0) throw Error(ErrorKind::InvalidConfig, "lcd of the zero vector");

    const LcdSearch search(x, params);
    const double theta_max = params.theta_max_for(x.size());
    // Below 1/(2 max|x_i|) every coordinate rounds to 0, so dist = ||theta x||
    // exceeds gamma ||theta x|| and nothing there is admissible.
    double theta = 0.5 / max_abs;

    LcdResult result;
    while (theta < theta_max) {
        const double h = std::min(params.gamma * theta * search.norm(), params.kappa) / 8.0;
        const double next = std::min(theta + h, theta_max);
        if (auto bracket = search.refine(theta, next)) {
            const double lo = bracket->first, hi = bracket->second;
            result.bounded = true;
            result.value = lo;
            result.achieved_distance = lattice_distance(hi, x);
            result.witness.reserve(x.size());
            for (double t : x) result.witness.push_back(static_cast<std::int64_t>(std::nearbyint(hi * t)));
            return result;
        }
        theta = next;
    }
    result.bounded = false;
    result.value = theta_max;
    result.achieved_distance = lattice_distance(theta_max, x);
    return result;
}

RegularizedLcd regularized_lcd(std::span<const double> x, double alpha, const LcdParams& params,
                               const CompressParams& compress, std::size_t budget, std::uint64_t seed) {
    params.validate();
    compress.validate();
    const double cp = compress.c_prime();
    if (!(alpha > 0.0 && alpha < cp / 4.0))
        throw Error(ErrorKind::InvalidConfig, "alpha must lie in (0, c'/4) = (0, " + std::to_string(cp / 4.0) + ")");
    const auto spread = spread_set(x, compress);
    const std::size_t k = std::max<std::size_t>(1, ceil_count(alpha * static_cast<double>(x.size())));
    if (k > spread.size()) throw Error(ErrorKind::InsufficientSpread, "spread set smaller than ceil(alpha n)");

    RegularizedLcd best;
    best.bounded = true;
    best.value = -1.0;
    auto consider = [&](const std::vector<std::size_t>& local) {
        std::vector<std::size_t> subset;
        subset.reserve(local.size());
        for (std::size_t i : local) subset.push_back(spread[i]);
        auto y = gather(x, subset);
        const double nrm = norm2(y);
        for (double& t : y) t /= nrm;
        const LcdResult r = lcd(y, params);
        ++best.candidates;
        const bool better = best.value < 0.0 || (!r.bounded && best.bounded) ||
                            (r.bounded == best.bounded && r.value > best.value);
        if (better) {
            best.bounded = r.bounded;
            best.value = r.value;
            best.witness = subset;
        }
    };

    std::vector<std::size_t> c(k);
    std::iota(c.begin(), c.end(), std::size_t{0});
    if (choose(spread.size(), k) <= static_cast<double>(budget) + 1.0) {
        do consider(c);
        while (next_combination(c, spread.size()));
        return best;
    }
    consider(c);
    Engine rng = make_engine(seed);
    for (std::size_t r = 0; r < budget; ++r) consider(random_subset(spread.size(), k, rng));
    return best;
}

double lcd_2d(std::span<const double> v, std::span<const double> w, const LcdParams& params, std::size_t angular_steps) {
    params.validate();
    if (v.size() != w.size()) throw Error(ErrorKind::DimensionMismatch, "lcd_2d vectors differ in length");
    if (angular_steps == 0) throw Error(ErrorKind::InvalidConfig, "angular_steps must be positive");
    const std::size_t n = v.size();

    std::vector<double> e1(v.begin(), v.end()), e2(w.begin(), w.end());
    const double nv = norm2(e1), nw = norm2(e2);
    if (nv == 0.0 || nw == 0.0) throw Error(ErrorKind::InvalidConfig, "lcd_2d needs nonzero vectors");
    for (double& t : e1) t /= nv;
    for (double& t : e2) t /= nw;
    const double proj = simd::dot(e1, e2);
    if (std::abs(proj) > 1e-10) {
        for (std::size_t i = 0; i < n; ++i) e2[i] -= proj * e1[i];
        const double r = norm2(e2);
        if (r < 1e-8) throw Error(ErrorKind::InvalidConfig, "lcd_2d vectors are parallel");
        for (double& t : e2) t /= r;
    }

    std::vector<double> x(n);
    auto g = [&](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        for (std::size_t i = 0; i < n; ++i) x[i] = c * e1[i] + s * e2[i];
        return lcd(x, params).value;
    };

    const double step = std::numbers::pi / static_cast<double>(angular_steps);
    double best = std::numeric_limits<double>::infinity();
    double best_phi = 0.0;
    for (std::size_t j = 0; j < angular_steps; ++j) {
        const double phi = step * static_cast<double>(j);
        const double val = g(phi);
        if (val < best) {
            best = val;
            best_phi = phi;
        }
    }

    // golden-section search around the best grid angle; g has period pi
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best_phi - step, b = best_phi + step;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double gc = g(c), gd = g(d);
    best = std::min({best, gc, gd});
    for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
        if (gc <= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
            best = std::min(best, gc);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
            best = std::min(best, gd);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------

ErdosCheck erdos_check(std::span<const double> v, double delta, double eps, std::uint64_t trials, std::uint64_t seed) {
    check_delta(delta);
    const std::size_t n = v.size();
    if (n == 0 || std::abs(norm2(v) - 1.0) > 1e-10) throw Error(ErrorKind::InvalidConfig, "erdos_check needs a unit vector");
    if (!(eps > 0.0 && eps < 0.5)) throw Error(ErrorKind::InvalidConfig, "eps must lie in (0, 1/2)");

    ErdosCheck out;
    if (n <= kMaxExactDim) {
        out.rho = small_ball_exact(v, delta).estimate;
    } else {
        const auto est = small_ball(v, delta, EntryLaw::rademacher(), trials, seed);
        out.rho = est.estimate - est.half_width;
    }
    const double nn = static_cast<double>(n);
    out.threshold = std::pow(nn, -0.5 + eps);
    out.large_coordinates = static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](double t) { return std::abs(t) > delta; }));
    const bool hypothesis = out.rho >= out.threshold;
    const bool conclusion = static_cast<double>(out.large_coordinates) <= eps * nn;
    out.holds = !hypothesis || conclusion;
    return out;
}

// ---------------------------------------------------------------------------

double Gap::volume() const {
    double vol = 1.0;
    for (auto d : dims) vol *= 2.0 * static_cast<double>(d) + 1.0;
    return vol;
}

void Gap::validate() const {
    if (generators.size() != dims.size()) throw Error(ErrorKind::DimensionMismatch, "GAP generators and dims differ in length");
    for (auto d : dims)
        if (d < 1) throw Error(ErrorKind::InvalidConfig, "GAP dimensions must be positive");
    for (double w : generators)
        if (!std::isfinite(w)) throw Error(ErrorKind::InvalidConfig, "GAP generators must be finite");
}

std::vector<double> gap_points(const Gap& g) {
    g.validate();
    if (g.volume() > 1e6) throw Error(ErrorKind::TooLarge, "GAP volume exceeds 10^6");
    std::vector<double> pts{0.0};
    for (std::size_t i = 0; i < g.rank(); ++i) {
        std::vector<double> next;
        next.reserve(pts.size() * static_cast<std::size_t>(2 * g.dims[i] + 1));
        for (double p : pts)
            for (std::int64_t a = -g.dims[i]; a <= g.dims[i]; ++a) next.push_back(p + static_cast<double>(a) * g.generators[i]);
        pts = std::move(next);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<double> gap_vector(const Gap& g, std::size_t n, std::uint64_t seed, double jitter) {
    g.validate();
    if (n == 0) throw Error(ErrorKind::InvalidConfig, "gap_vector needs n >= 1");
    if (!(jitter >= 0.0)) throw Error(ErrorKind::InvalidConfig, "jitter must be >= 0");
    Engine rng = make_engine(seed);
    std::uniform_real_distribution<double> noise(-jitter, jitter);
    std::vector<double> x(n);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (auto& xi : x) {
            double s = 0.0;
            for (std::size_t i = 0; i < g.rank(); ++i) {
                std::uniform_int_distribution<std::int64_t> coef(-g.dims[i], g.dims[i]);
                s += static_cast<double>(coef(rng)) * g.generators[i];
            }
            xi = s + (jitter > 0.0 ? noise(rng) : 0.0);
        }
        const double nrm = norm2(x);
        if (nrm > 0.0) {
            for (auto& xi : x) xi /= nrm;
            return x;
        }
    }
    throw Error(ErrorKind::InvalidConfig, "GAP draws are identically zero");
}

}  // namespace gaplab
