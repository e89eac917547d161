#include "gaplab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaplab/error.hpp"

namespace gaplab {

double EntryLaw::variance() const {
    return kind == LawKind::centered_bernoulli ? p * (1.0 - p) : 1.0;
}

std::string_view law_name(LawKind kind) {
    switch (kind) {
        case LawKind::gaussian: return "gaussian";
        case LawKind::rademacher: return "rademacher";
        case LawKind::centered_bernoulli: return "centered_bernoulli";
        case LawKind::uniform: return "uniform";
    }
    return "unknown";
}

std::optional<LawKind> parse_law(std::string_view name) {
    for (LawKind k : {LawKind::gaussian, LawKind::rademacher, LawKind::centered_bernoulli, LawKind::uniform})
        if (name == law_name(k)) return k;
    return std::nullopt;
}

double EntrySampler::operator()(Engine& rng) {
    switch (law_.kind) {
        case LawKind::gaussian: return normal_(rng);
        case LawKind::rademacher: return (rng() >> 63) ? 1.0 : -1.0;
        case LawKind::centered_bernoulli: return unit_(rng) < law_.p ? 1.0 - law_.p : -law_.p;
        case LawKind::uniform: {
            static const double half_width = std::sqrt(3.0);
            return half_width * (2.0 * unit_(rng) - 1.0);
        }
    }
    return 0.0;
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> d) {
    SymmetricMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
    return m;
}

SymmetricMatrix SymmetricMatrix::from_dense(std::size_t n, std::span<const double> a) {
    if (a.size() != n * n) throw Error(ErrorKind::DimensionMismatch, "dense matrix is not n x n");
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = a[i * n + j];
            if (!std::isfinite(v)) throw Error(ErrorKind::InvalidConfig, "non-finite matrix entry");
            if (v != a[j * n + i]) throw Error(ErrorKind::InvalidConfig, "matrix is not symmetric");
            m.set(i, j, v);
        }
    }
    return m;
}

std::vector<double> SymmetricMatrix::to_dense() const {
    std::vector<double> out(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
            const double v = (*this)(i, j);
            out[i * n_ + j] = v;
            out[j * n_ + i] = v;
        }
    }
    return out;
}

double SymmetricMatrix::frobenius_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
            const double v = (*this)(i, j);
            s += (i == j ? 1.0 : 2.0) * v * v;
        }
    }
    return std::sqrt(s);
}

double SymmetricMatrix::max_row_sum() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

bool SymmetricMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

std::string_view ensemble_name(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::wigner: return "wigner";
        case EnsembleKind::adjacency: return "adjacency";
        case EnsembleKind::perturbed: return "perturbed";
    }
    return "unknown";
}

std::optional<EnsembleKind> parse_ensemble(std::string_view name) {
    for (EnsembleKind k : {EnsembleKind::wigner, EnsembleKind::adjacency, EnsembleKind::perturbed})
        if (name == ensemble_name(k)) return k;
    return std::nullopt;
}

void EnsembleSpec::validate() const {
    if (n < 2) throw Error(ErrorKind::InvalidConfig, "n must be at least 2");
    auto check_law = [](const EntryLaw& law, const char* field) {
        if (law.kind == LawKind::centered_bernoulli && !(law.p > 0.0 && law.p < 1.0))
            throw Error(ErrorKind::InvalidConfig, std::string(field) + ": bernoulli p must lie in (0, 1)");
    };
    check_law(off_diag, "off_diag");
    if (diag) check_law(*diag, "diag");
    if (kind == EnsembleKind::adjacency && !(p > 0.0 && p < 1.0))
        throw Error(ErrorKind::InvalidConfig, "p must lie in (0, 1)");
    if (kind == EnsembleKind::perturbed) {
        if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::InvalidConfig, "sigma must be >= 0");
        if (deterministic_part && deterministic_part->n() != n)
            throw Error(ErrorKind::DimensionMismatch, "deterministic_part has the wrong dimension");
        if (deterministic_part && !deterministic_part->all_finite())
            throw Error(ErrorKind::InvalidConfig, "deterministic_part has non-finite entries");
    }
}

SymmetricMatrix sample_wigner(std::size_t n, const EntryLaw& off_diag, const std::optional<EntryLaw>& diag,
                              std::uint64_t seed) {
    Engine rng = make_engine(seed);
    EntrySampler off(off_diag);
    EntrySampler on(diag.value_or(off_diag));
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, diag ? on(rng) : 0.0);
        for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, off(rng));
    }
    return m;
}

SymmetricMatrix sample_adjacency(std::size_t n, double p, std::uint64_t seed) {
    Engine rng = make_engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, unit(rng) < p ? 1.0 : 0.0);
    return m;
}

SymmetricMatrix sample_perturbed(const SymmetricMatrix& f, std::size_t n, const EntryLaw& noise,
                                 const std::optional<EntryLaw>& diag_noise, double sigma, std::uint64_t seed) {
    if (f.n() != n) throw Error(ErrorKind::DimensionMismatch, "deterministic part does not have dimension n");
    if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidConfig, "sigma must be >= 0");
    if (sigma == 0.0) return f;
    SymmetricMatrix m = sample_wigner(n, noise, diag_noise, seed);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m.set(i, j, f(i, j) + sigma * m(i, j));
    return m;
}

SymmetricMatrix sample(const EnsembleSpec& spec, std::uint64_t seed) {
    switch (spec.kind) {
        case EnsembleKind::wigner: return sample_wigner(spec.n, spec.off_diag, spec.diag, seed);
        case EnsembleKind::adjacency: return sample_adjacency(spec.n, spec.p, seed);
        case EnsembleKind::perturbed: {
            const SymmetricMatrix zero(spec.n);
            const SymmetricMatrix& f = spec.deterministic_part ? *spec.deterministic_part : zero;
            return sample_perturbed(f, spec.n, spec.off_diag, spec.diag, spec.sigma, seed);
        }
    }
    throw Error(ErrorKind::InvalidConfig, "unknown ensemble kind");
}

}  // namespace gaplab
