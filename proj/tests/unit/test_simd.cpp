#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "gaplab/simd/kernels.hpp"

using namespace gaplab::simd;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    std::vector<double> v(n);
    for (double& x : v) x = g(rng);
    return v;
}

std::vector<const KernelTable*> vector_tables() {
    std::vector<const KernelTable*> out;
    if (const KernelTable* t = avx2_kernels()) out.push_back(t);
    if (const KernelTable* t = neon_kernels()) out.push_back(t);
    return out;
}

double abs_dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] * y[i]);
    return s;
}

}  // namespace

TEST_CASE("every vector kernel table agrees with the scalar reference") {
    const KernelTable& ref = scalar_kernels();
    std::mt19937_64 rng(12345);
    const auto tables = vector_tables();
    MESSAGE("vector ISAs available: " << tables.size() << ", active: " << isa_name(active_isa()));

    for (const KernelTable* t : tables) {
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 64u, 257u}) {
            CAPTURE(n);
            const auto x = random_vector(n, rng);
            const auto y = random_vector(n, rng);
            const double bound = 1e-14 * (abs_dot(x, y) + 1.0);

            CHECK(std::abs(t->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <= bound);

            auto ya = y, yb = y;
            t->axpy(0.37, x.data(), ya.data(), n);
            ref.axpy(0.37, x.data(), yb.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(ya[i] == doctest::Approx(yb[i]).epsilon(1e-14));

            ya = y, yb = y;
            t->rank2(1.5, x.data(), -0.25, y.data(), ya.data(), n);
            ref.rank2(1.5, x.data(), -0.25, y.data(), yb.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ya[i] - yb[i]) <= 1e-14 * (std::abs(yb[i]) + 4));

            auto xa = x, xb = x;
            ya = y, yb = y;
            t->rotate(xa.data(), ya.data(), 0.6, 0.8, n);
            ref.rotate(xb.data(), yb.data(), 0.6, 0.8, n);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(std::abs(xa[i] - xb[i]) <= 1e-14 * (std::abs(x[i]) + std::abs(y[i])));
                CHECK(std::abs(ya[i] - yb[i]) <= 1e-14 * (std::abs(x[i]) + std::abs(y[i])));
            }

            for (double theta : {0.3, 1.0, 7.25, 123.456}) {
                const double a = t->lattice_dist2(theta, x.data(), n);
                const double b = ref.lattice_dist2(theta, x.data(), n);
                CHECK(std::abs(a - b) <= 1e-13 * (b + 1.0));
            }
        }

        const std::size_t rows = 13, cols = 29;
        const auto a = random_vector(rows * 32, rng);
        const auto v = random_vector(cols, rng);
        std::vector<double> ya(rows), yb(rows);
        t->gemv(a.data(), 32, v.data(), ya.data(), rows, cols);
        ref.gemv(a.data(), 32, v.data(), yb.data(), rows, cols);
        for (std::size_t r = 0; r < rows; ++r) CHECK(ya[r] == doctest::Approx(yb[r]).epsilon(1e-13));
    }
}

TEST_CASE("lattice distance rounds half-way points to even on every ISA") {
    // 0.5 -> 0 and 1.5 -> 2: both leave residual 0.5; 2.5 -> 2 leaves 0.5.
    const std::vector<double> x{0.5, 1.5, 2.5, -0.5, 0.25};
    const double expected = 4 * 0.25 + 0.0625;
    CHECK(scalar_kernels().lattice_dist2(1.0, x.data(), x.size()) == expected);
    for (const KernelTable* t : vector_tables()) CHECK(t->lattice_dist2(1.0, x.data(), x.size()) == expected);
}

TEST_CASE("forcing the scalar table switches the active dispatch") {
    const Isa before = active_isa();
    REQUIRE(force_isa(Isa::scalar));
    CHECK(active_isa() == Isa::scalar);
    CHECK(force_isa(before));
    CHECK(active_isa() == before);
}
