#pragma once

// Data-parallel inner loops shared by the eigensolver, the power iteration
// and the lattice-distance scans. Every kernel has a scalar reference
// implementation; AVX2 (x86-64) and NEON (aarch64) variants are selected at
// runtime and must agree with the reference up to floating-point
// reassociation.

#include <cstddef>
#include <span>
#include <string_view>

namespace gaplab::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
    Isa isa;
    // sum_i x[i] * y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // y[i] -= a * u[i] + b * v[i]
    void (*rank2)(double a, const double* u, double b, const double* v, double* y, std::size_t n);
    // x' = c x - s y ; y' = s x + c y
    void (*rotate)(double* x, double* y, double c, double s, std::size_t n);
    // sum_i (theta x[i] - nearest_int(theta x[i]))^2, ties to even
    double (*lattice_dist2)(double theta, const double* x, std::size_t n);
    // y[r] = sum_c a[r*lda + c] * x[c]
    void (*gemv)(const double* a, std::size_t lda, const double* x, double* y, std::size_t rows,
                 std::size_t cols);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Best available table. GAPLAB_SIMD=scalar|avx2|neon in the environment pins
// the choice at first use; force_isa() overrides it afterwards.
const KernelTable& active();
Isa active_isa();
bool force_isa(Isa isa);

inline double dot(std::span<const double> x, std::span<const double> y) {
    return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    active().axpy(a, x.data(), y.data(), x.size());
}

inline double lattice_dist2(double theta, std::span<const double> x) {
    return active().lattice_dist2(theta, x.data(), x.size());
}

}  // namespace gaplab::simd
