#include "gaplab/simd/kernels.hpp"

#include <cmath>

namespace gaplab::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void rank2_scalar(double a, const double* u, double b, const double* v, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] -= a * u[i] + b * v[i];
}

void rotate_scalar(double* x, double* y, double c, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

double lattice_dist2_scalar(double theta, const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = theta * x[i];
        const double r = t - std::nearbyint(t);
        s += r * r;
    }
    return s;
}

void gemv_scalar(const double* a, std::size_t lda, const double* x, double* y, std::size_t rows,
                 std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * lda, x, cols);
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{Isa::scalar,  dot_scalar,           axpy_scalar, rank2_scalar,
                                   rotate_scalar, lattice_dist2_scalar, gemv_scalar};
    return table;
}

}  // namespace gaplab::simd
