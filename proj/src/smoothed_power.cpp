#include "gaplab/smoothed_power.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "gaplab/error.hpp"
#include "gaplab/simd/kernels.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab {
namespace {

bool gershgorin_psd(const SymmetricMatrix& a) {
    for (std::size_t i = 0; i < a.n(); ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < a.n(); ++j)
            if (j != i) off += std::abs(a(i, j));
        if (a(i, i) - off < 0.0) return false;
    }
    return true;
}

double norm2(std::span<const double> x) { return std::sqrt(simd::dot(x, x)); }

// Orthonormal basis (column-major, n x k) of the eigenspace at lambda_max.
std::vector<double> top_eigenspace(const SymmetricMatrix& a, std::size_t& k) {
    const Spectrum s = eigen_decompose(a);
    const std::size_t n = s.n();
    double scale = 0.0;
    for (double v : s.values()) scale = std::max(scale, std::abs(v));
    const double cluster = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
    const double top = s.value(n - 1);
    std::vector<double> basis;
    k = 0;
    for (std::size_t j = n; j-- > 0 && s.value(j) >= top - cluster;) {
        const auto v = s.vector(j);
        basis.insert(basis.end(), v.begin(), v.end());
        ++k;
    }
    return basis;
}

}  // namespace

PowerTrace power_iterate(const SymmetricMatrix& a, std::span<const double> u0, double tol, std::size_t max_iter) {
    PowerOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    return power_iterate(a, u0, o);
}

PowerTrace power_iterate(const SymmetricMatrix& a, std::span<const double> u0, const PowerOptions& options) {
    const std::size_t n = a.n();
    if (u0.size() != n) throw Error(ErrorKind::DimensionMismatch, "start vector length differs from the matrix order");
    if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidConfig, "tol must be positive");
    if (std::abs(norm2(u0) - 1.0) > 1e-10) throw Error(ErrorKind::InvalidConfig, "start vector must be a unit vector");
    if (!a.all_finite()) throw Error(ErrorKind::InvalidConfig, "matrix has non-finite entries");

    const auto& k = simd::active();
    const std::vector<double> dense = a.to_dense();

    PowerTrace trace;
    switch (options.shift) {
        case ShiftPolicy::never: break;
        case ShiftPolicy::always: trace.shift = 1.1 * a.max_row_sum(); break;
        case ShiftPolicy::automatic:
            if (!gershgorin_psd(a)) trace.shift = 1.1 * a.max_row_sum();
            break;
    }

    std::size_t top_dim = 0;
    std::vector<double> basis;
    const bool want_error = options.criterion == ConvergenceCriterion::eigenvector_error;
    if (want_error) basis = top_eigenspace(a, top_dim);

    std::vector<double> u(u0.begin(), u0.end()), w(n), y(n), p(n);
    for (;;) {
        k.gemv(dense.data(), n, u.data(), w.data(), n, n);
        for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + trace.shift * u[i];
        const double ny = norm2(y);
        if (!(ny > 0.0))
            throw Error(ErrorKind::Breakdown, "zero image at iteration " + std::to_string(trace.iterations));

        const double lambda = k.dot(u.data(), w.data(), n);
        for (std::size_t i = 0; i < n; ++i) p[i] = w[i] - lambda * u[i];
        const double r = norm2(p);
        trace.residuals.push_back(r);
        bool done = r <= options.tol;
        if (want_error) {
            p = u;
            for (std::size_t j = 0; j < top_dim; ++j) {
                const double* b = basis.data() + j * n;
                k.axpy(-k.dot(b, u.data(), n), b, p.data(), n);
            }
            const double e = norm2(p);
            trace.errors.push_back(e);
            done = done && e <= options.tol;
        }

        trace.lambda = lambda;
        trace.image_norm = norm2(w);
        if (done || trace.iterations >= options.max_iter) {
            trace.converged = done;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) u[i] = y[i] / ny;
        ++trace.iterations;
    }
    trace.u = std::move(u);
    return trace;
}

std::uint64_t predicted_iterations(double lambda_top, double lambda_second, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidConfig, "eps must lie in (0, 1)");
    if (lambda_top == lambda_second) throw Error(ErrorKind::GapZero, "top gap is zero; the prediction is infinite");
    if (!(lambda_top > lambda_second && lambda_second >= 0.0))
        throw Error(ErrorKind::InvalidConfig, "need lambda_top > lambda_second >= 0");
    const double pred = std::ceil(lambda_top / (lambda_top - lambda_second) * std::log(1.0 / eps));
    if (pred >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(pred);
}

std::vector<double> start_vector(std::size_t n, std::uint64_t seed) {
    Engine rng = make_engine(mix64(seed ^ 0x7A3C5E9B1D2F4861ULL));
    std::normal_distribution<double> z;
    std::vector<double> u(n);
    double s = 0.0;
    while (s == 0.0) {
        for (auto& t : u) t = z(rng);
        s = norm2(u);
    }
    for (auto& t : u) t /= s;
    return u;
}

double default_sigma(const SymmetricMatrix& f) { return 1e-2 * spectral_norm(f); }

SmoothedResult smoothed_solve(const SymmetricMatrix& f, double sigma, const PowerOptions& options, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::InvalidConfig, "sigma must be finite and >= 0");
    const std::size_t n = f.n();
    if (n < 2) throw Error(ErrorKind::InvalidConfig, "smoothed_solve needs n >= 2");

    const SymmetricMatrix x = sample_wigner(n, EntryLaw::gaussian(), EntryLaw::gaussian(), seed);
    const SymmetricMatrix m =
        sample_perturbed(f, n, EntryLaw::gaussian(), EntryLaw::gaussian(), sigma, seed);

    SmoothedResult res;
    res.sigma = sigma;
    res.trace = power_iterate(m, start_vector(n, seed), options);
    res.perturbation_norm = spectral_norm(x);
    res.weyl_bound = sigma * res.perturbation_norm;
    const auto ev = eigenvalues(m);
    res.gap_perturbed = ev[n - 1] - ev[n - 2];
    res.lambda_max_f = eigenvalues(f).back();
    // the Rayleigh quotient carries rounding of order eps ||F||
    const double slack = 1e-12 * (1.0 + std::abs(res.lambda_max_f));
    res.certificate_holds =
        std::abs(res.trace.lambda - res.lambda_max_f) <= res.weyl_bound + res.trace.residuals.back() + slack;
    return res;
}

}  // namespace gaplab
