#pragma once

// Seed-reproducible samplers for the three random symmetric models: Wigner
// matrices, adjacency matrices of G(n, p), and deterministic matrices plus
// Wigner noise.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaplab/rng.hpp"

namespace gaplab {

enum class LawKind { gaussian, rademacher, centered_bernoulli, uniform };

/// Law of a single matrix entry. All kinds have mean zero; all but
/// centered_bernoulli have unit variance.
struct EntryLaw {
    LawKind kind = LawKind::gaussian;
    double p = 0.5;  // centered_bernoulli only: values {1-p, -p}

    static EntryLaw gaussian() { return {LawKind::gaussian, 0.5}; }
    static EntryLaw rademacher() { return {LawKind::rademacher, 0.5}; }
    static EntryLaw centered_bernoulli(double p) { return {LawKind::centered_bernoulli, p}; }
    static EntryLaw uniform() { return {LawKind::uniform, 0.5}; }

    double mean() const { return 0.0; }
    double variance() const;
    bool discrete() const { return kind == LawKind::rademacher || kind == LawKind::centered_bernoulli; }

    friend bool operator==(const EntryLaw&, const EntryLaw&) = default;
};

std::string_view law_name(LawKind kind);
std::optional<LawKind> parse_law(std::string_view name);

/// Stateful sampler for one law; cheap to construct.
class EntrySampler {
public:
    explicit EntrySampler(const EntryLaw& law) : law_(law) {}
    double operator()(Engine& rng);

private:
    EntryLaw law_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

/// Real symmetric matrix kept as packed upper triangle plus diagonal, so
/// a(i, j) == a(j, i) holds by construction.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * (n + 1) / 2, 0.0) {}

    static SymmetricMatrix identity(std::size_t n);
    static SymmetricMatrix diagonal(std::span<const double> d);
    /// Throws InvalidConfig unless `a` is n x n, finite and exactly symmetric.
    static SymmetricMatrix from_dense(std::size_t n, std::span<const double> a);

    std::size_t n() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }
    void set(std::size_t i, std::size_t j, double v) { data_[index(i, j)] = v; }

    /// Row-major n x n copy.
    std::vector<double> to_dense() const;
    std::span<const double> packed() const { return data_; }

    double frobenius_norm() const;
    /// max_i sum_j |a_ij|, an upper bound on the spectral radius.
    double max_row_sum() const;
    bool all_finite() const;

    friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return i * n_ - i * (i - 1) / 2 + (j - i);
    }

    std::size_t n_ = 0;
    std::vector<double> data_;
};

enum class EnsembleKind { wigner, adjacency, perturbed };

std::string_view ensemble_name(EnsembleKind kind);
std::optional<EnsembleKind> parse_ensemble(std::string_view name);

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::wigner;
    std::size_t n = 2;
    EntryLaw off_diag = EntryLaw::gaussian();
    std::optional<EntryLaw> diag = EntryLaw::gaussian();  // nullopt: zero diagonal
    double p = 0.5;                                      // adjacency only
    std::optional<SymmetricMatrix> deterministic_part;   // perturbed only; zero if absent
    double sigma = 1.0;                                  // perturbed only: scale of the noise
    std::uint64_t master_seed = 0;

    /// Throws InvalidConfig on n < 2, p outside (0, 1) for adjacency, or a
    /// deterministic part of the wrong size.
    void validate() const;
};

SymmetricMatrix sample_wigner(std::size_t n, const EntryLaw& off_diag, const std::optional<EntryLaw>& diag,
                              std::uint64_t seed);

/// Endpoints p = 0 and p = 1 are accepted here (deterministic graphs).
SymmetricMatrix sample_adjacency(std::size_t n, double p, std::uint64_t seed);

/// F + sigma * X with X drawn exactly as sample_wigner(n, noise, diag_noise, seed).
SymmetricMatrix sample_perturbed(const SymmetricMatrix& f, std::size_t n, const EntryLaw& noise,
                                 const std::optional<EntryLaw>& diag_noise, double sigma, std::uint64_t seed);

/// Draws the model described by `spec` with the given stream seed.
SymmetricMatrix sample(const EnsembleSpec& spec, std::uint64_t seed);

}  // namespace gaplab
