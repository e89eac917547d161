#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gaplab/ensembles.hpp"

namespace gaplab {

/// Ascending eigenvalues and the matching orthonormal eigenvectors of one
/// symmetric matrix. Eigenvectors are stored column-major: vector(j) is the
/// unit eigenvector of value(j), with its first coordinate of magnitude
/// above 1e-12 made positive.
class Spectrum {
public:
    Spectrum() = default;
    Spectrum(std::vector<double> values, std::vector<double> vectors_colmajor);
    /// Eigenvalues only; vector() must not be called.
    explicit Spectrum(std::vector<double> values);

    std::size_t n() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double value(std::size_t j) const { return values_[j]; }

    bool has_vectors() const { return !vectors_.empty(); }
    std::span<const double> vector(std::size_t j) const { return {vectors_.data() + j * n(), n()}; }
    double v(std::size_t i, std::size_t j) const { return vectors_[j * n() + i]; }

private:
    std::vector<double> values_;
    std::vector<double> vectors_;
};

/// Householder tridiagonalization followed by implicit-shift QL. At most 64
/// QL sweeps per eigenvalue; NumericalFailure otherwise.
Spectrum eigen_decompose(const SymmetricMatrix& a);

/// Same algorithm without eigenvector accumulation; ascending.
std::vector<double> eigenvalues(const SymmetricMatrix& a);

/// Values lambda[i + l] - lambda[i] for i in [0, n - l).
struct GapVector {
    std::size_t l = 1;
    std::vector<double> values;
};

GapVector gaps(std::span<const double> eigenvalues, std::size_t l);
inline GapVector gaps(const Spectrum& s, std::size_t l) { return gaps(s.values(), l); }

struct MinGap {
    double value = 0.0;
    std::size_t index = 0;  // 0-based: the gap between eigenvalues index and index+1
};

MinGap min_gap(std::span<const double> eigenvalues);
inline MinGap min_gap(const Spectrum& s) { return min_gap(s.values()); }

/// Deletes row and column k (0-based).
SymmetricMatrix principal_minor(const SymmetricMatrix& a, std::size_t k);

/// Cauchy interlacing outer[i] <= inner[i] <= outer[i+1], each up to tol.
bool check_interlacing(std::span<const double> outer, std::span<const double> inner, double tol);
inline bool check_interlacing(const Spectrum& outer, const Spectrum& inner, double tol) {
    return check_interlacing(outer.values(), inner.values(), tol);
}

/// True iff every |lambda_i| <= c * sqrt(n).
bool spectrum_in_range(std::span<const double> eigenvalues, double c = 10.0);

/// Largest |eigenvalue|.
double spectral_norm(const SymmetricMatrix& a);

/// ||V^T V - I||_max and ||A V - V Lambda||_F for a computed decomposition.
double orthogonality_error(const Spectrum& s);
double residual_norm(const SymmetricMatrix& a, const Spectrum& s);

}  // namespace gaplab
