#include "gaplab/simd/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace gaplab::simd {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void rank2_neon(double a, const double* u, double b, const double* v, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vb = vdupq_n_f64(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t t = vfmaq_f64(vmulq_f64(vb, vld1q_f64(v + i)), va, vld1q_f64(u + i));
        vst1q_f64(y + i, vsubq_f64(vld1q_f64(y + i), t));
    }
    for (; i < n; ++i) y[i] -= a * u[i] + b * v[i];
}

void rotate_neon(double* x, double* y, double c, double s, std::size_t n) {
    const float64x2_t vc = vdupq_n_f64(c);
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xi = vld1q_f64(x + i);
        const float64x2_t yi = vld1q_f64(y + i);
        vst1q_f64(x + i, vfmsq_f64(vmulq_f64(vc, xi), vs, yi));
        vst1q_f64(y + i, vfmaq_f64(vmulq_f64(vc, yi), vs, xi));
    }
    for (; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

double lattice_dist2_neon(double theta, const double* x, std::size_t n) {
    const float64x2_t vt = vdupq_n_f64(theta);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t t = vmulq_f64(vt, vld1q_f64(x + i));
        // vrndnq: round to nearest, ties to even
        const float64x2_t r = vsubq_f64(t, vrndnq_f64(t));
        acc = vfmaq_f64(acc, r, r);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double t = theta * x[i];
        const double r = t - std::nearbyint(t);
        s += r * r;
    }
    return s;
}

void gemv_neon(const double* a, std::size_t lda, const double* x, double* y, std::size_t rows,
               std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot_neon(a + r * lda, x, cols);
}

}  // namespace

const KernelTable* neon_kernels() {
    static const KernelTable table{Isa::neon,  dot_neon,           axpy_neon, rank2_neon,
                                   rotate_neon, lattice_dist2_neon, gemv_neon};
    return &table;
}

}  // namespace gaplab::simd
