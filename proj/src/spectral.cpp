#include "gaplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gaplab/error.hpp"
#include "gaplab/simd/kernels.hpp"

namespace gaplab {
namespace {

constexpr int kMaxSweepsPerEigenvalue = 64;

// Row-major work matrix `a` is reduced in place to tridiagonal form; d holds
// the diagonal and e[k] = T(k, k+1). When w is non-null it receives Q^T
// (row-major), where A = Q T Q^T.
void tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& d, std::vector<double>& e,
                    std::vector<double>* w) {
    const simd::KernelTable& k = simd::active();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    std::vector<std::vector<double>> reflectors;
    if (w) reflectors.reserve(n > 2 ? n - 2 : 0);
    std::vector<double> v(n), p(n), t(n);

    for (std::size_t col = 0; col + 2 < n; ++col) {
        const std::size_t m = n - col - 1;
        const double* x = a.data() + col * n + col + 1;
        d[col] = a[col * n + col];
        const double sigma = std::sqrt(k.dot(x, x, m));
        if (sigma == 0.0) {
            e[col] = 0.0;
            if (w) reflectors.emplace_back();
            continue;
        }
        const double alpha = x[0] >= 0.0 ? -sigma : sigma;
        std::copy(x, x + m, v.begin());
        v[0] -= alpha;
        const double vnorm = std::sqrt(k.dot(v.data(), v.data(), m));
        for (std::size_t i = 0; i < m; ++i) v[i] /= vnorm;

        double* block = a.data() + (col + 1) * n + col + 1;
        k.gemv(block, n, v.data(), p.data(), m, m);
        const double kappa = k.dot(v.data(), p.data(), m);
        for (std::size_t i = 0; i < m; ++i) p[i] -= kappa * v[i];
        for (std::size_t i = 0; i < m; ++i) k.rank2(2.0 * v[i], p.data(), 2.0 * p[i], v.data(), block + i * n, m);

        e[col] = alpha;
        if (w) reflectors.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
    }
    if (n >= 2) {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 2) * n + n - 1];
    }
    d[n - 1] = a[(n - 1) * n + n - 1];
    e[n - 1] = 0.0;

    if (!w) return;
    w->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) (*w)[i * n + i] = 1.0;
    for (std::size_t col = 0; col < reflectors.size(); ++col) {
        const std::vector<double>& r = reflectors[col];
        if (r.empty()) continue;
        std::fill(t.begin(), t.end(), 0.0);
        for (std::size_t i = 0; i < r.size(); ++i) k.axpy(r[i], w->data() + (col + 1 + i) * n, t.data(), n);
        for (std::size_t i = 0; i < r.size(); ++i) k.axpy(-2.0 * r[i], t.data(), w->data() + (col + 1 + i) * n, n);
    }
}

// Implicit-shift QL on the tridiagonal (d, e). Rotations are applied to the
// rows of w (each row one eigenvector) when w is non-null.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>* w) {
    const std::size_t n = d.size();
    const simd::KernelTable& k = simd::active();
    const double eps = std::numeric_limits<double>::epsilon();
    double f = 0.0;
    double tst1 = 0.0;

    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > kMaxSweepsPerEigenvalue)
                    throw Error(ErrorKind::NumericalFailure,
                                "QL iteration did not converge for eigenvalue " + std::to_string(l));
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);
                    if (w) k.rotate(w->data() + ii * n, w->data() + (ii + 1) * n, c, s, n);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

std::vector<std::size_t> ascending_order(const std::vector<double>& d) {
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    return order;
}

void check_input(const SymmetricMatrix& a) {
    if (a.n() == 0) throw Error(ErrorKind::InvalidConfig, "empty matrix");
    if (!a.all_finite()) throw Error(ErrorKind::InvalidConfig, "matrix has non-finite entries");
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values, std::vector<double> vectors_colmajor)
    : values_(std::move(values)), vectors_(std::move(vectors_colmajor)) {
    if (vectors_.size() != values_.size() * values_.size())
        throw Error(ErrorKind::DimensionMismatch, "eigenvector storage is not n x n");
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {}

Spectrum eigen_decompose(const SymmetricMatrix& a) {
    check_input(a);
    const std::size_t n = a.n();
    std::vector<double> work = a.to_dense();
    std::vector<double> d, e, w;
    tridiagonalize(work, n, d, e, &w);
    tridiagonal_ql(d, e, &w);

    const auto order = ascending_order(d);
    std::vector<double> values(n), vectors(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        values[j] = d[order[j]];
        const double* src = w.data() + order[j] * n;
        double* dst = vectors.data() + j * n;
        std::copy(src, src + n, dst);
        const auto lead = std::find_if(dst, dst + n, [](double x) { return std::abs(x) > 1e-12; });
        if (lead != dst + n && *lead < 0)
            for (std::size_t i = 0; i < n; ++i) dst[i] = -dst[i];
    }
    return Spectrum(std::move(values), std::move(vectors));
}

std::vector<double> eigenvalues(const SymmetricMatrix& a) {
    check_input(a);
    std::vector<double> work = a.to_dense();
    std::vector<double> d, e;
    tridiagonalize(work, a.n(), d, e, nullptr);
    tridiagonal_ql(d, e, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

GapVector gaps(std::span<const double> eigenvalues, std::size_t l) {
    const std::size_t n = eigenvalues.size();
    if (l < 1 || l >= n) throw Error(ErrorKind::OutOfRange, "gap order l must satisfy 1 <= l <= n-1");
    GapVector g{l, std::vector<double>(n - l)};
    for (std::size_t i = 0; i + l < n; ++i) g.values[i] = eigenvalues[i + l] - eigenvalues[i];
    return g;
}

MinGap min_gap(std::span<const double> eigenvalues) {
    if (eigenvalues.size() < 2) throw Error(ErrorKind::OutOfRange, "min_gap needs at least two eigenvalues");
    MinGap best{eigenvalues[1] - eigenvalues[0], 0};
    for (std::size_t i = 1; i + 1 < eigenvalues.size(); ++i) {
        const double g = eigenvalues[i + 1] - eigenvalues[i];
        if (g < best.value) best = {g, i};
    }
    return best;
}

SymmetricMatrix principal_minor(const SymmetricMatrix& a, std::size_t k) {
    const std::size_t n = a.n();
    if (n < 2 || k >= n) throw Error(ErrorKind::OutOfRange, "minor index out of range");
    SymmetricMatrix m(n - 1);
    for (std::size_t i = 0, si = 0; i < n; ++i) {
        if (i == k) continue;
        for (std::size_t j = i, sj = si; j < n; ++j) {
            if (j == k) continue;
            m.set(si, sj, a(i, j));
            ++sj;
        }
        ++si;
    }
    return m;
}

bool check_interlacing(std::span<const double> outer, std::span<const double> inner, double tol) {
    if (inner.size() + 1 != outer.size())
        throw Error(ErrorKind::DimensionMismatch, "inner spectrum must have dimension n - 1");
    for (std::size_t i = 0; i < inner.size(); ++i) {
        if (outer[i] > inner[i] + tol) return false;
        if (inner[i] > outer[i + 1] + tol) return false;
    }
    return true;
}

bool spectrum_in_range(std::span<const double> eigenvalues, double c) {
    if (!(c > 0)) throw Error(ErrorKind::InvalidConfig, "range constant must be positive");
    const double bound = c * std::sqrt(static_cast<double>(eigenvalues.size()));
    return std::all_of(eigenvalues.begin(), eigenvalues.end(), [&](double x) { return std::abs(x) <= bound; });
}

double spectral_norm(const SymmetricMatrix& a) {
    const auto ev = eigenvalues(a);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double orthogonality_error(const Spectrum& s) {
    const std::size_t n = s.n();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double g = simd::dot(s.vector(i), s.vector(j)) - (i == j ? 1.0 : 0.0);
            worst = std::max(worst, std::abs(g));
        }
    return worst;
}

double residual_norm(const SymmetricMatrix& a, const Spectrum& s) {
    const std::size_t n = s.n();
    const std::vector<double> dense = a.to_dense();
    std::vector<double> av(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto vj = s.vector(j);
        simd::active().gemv(dense.data(), n, vj.data(), av.data(), n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = av[i] - s.value(j) * vj[i];
            total += r * r;
        }
    }
    return std::sqrt(total);
}

}  // namespace gaplab
