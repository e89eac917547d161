#pragma once

// Coordinate-level diagnostics of eigenvectors: how many coordinates are
// large, how much mass a few coordinates can hold, how small the smallest
// coordinate gets, and the sign-connected (nodal) domains of graph
// eigenvectors.

#include <cstddef>
#include <span>
#include <vector>

#include "gaplab/ensembles.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab {

/// #{i : |v_i| >= threshold}. InvalidConfig unless threshold > 0.
std::size_t delocalization_count(std::span<const double> v, double threshold);

struct DelocalizationProfile {
    double threshold = 0.0;
    std::vector<std::size_t> counts;  // one per eigenvector, ascending eigenvalue order
    std::size_t min_count = 0;
};

DelocalizationProfile delocalization_profile(const Spectrum& s, double threshold);

/// Largest sum of v_i^2 over floor(fraction n) coordinates.
double mass_concentration(std::span<const double> v, double fraction);

struct MinAbsCoordinate {
    double value = 0.0;
    std::size_t index = 0;  // smallest attaining index, 0-based
};

MinAbsCoordinate min_abs_coordinate(std::span<const double> v);

enum class NodalMode { strong, weak };

using VertexSet = std::vector<std::size_t>;

/// Strong: components of the graph induced on {v > tol} and on {v < -tol}.
/// Weak: components induced on {v >= -tol} and on {v <= tol}, duplicates
/// removed, as are sets nested inside another (all-zero components). Each
/// set is ascending; the list is ordered lexicographically.
/// InvalidConfig unless `adjacency` is 0/1 with zero diagonal.
std::vector<VertexSet> nodal_domains(const SymmetricMatrix& adjacency, std::span<const double> v, NodalMode mode,
                                     double zero_tol);

struct EigenvectorNodal {
    std::size_t index = 0;
    double eigenvalue = 0.0;
    MinAbsCoordinate min_abs;
    std::vector<VertexSet> strong;
    std::vector<VertexSet> weak;

    std::size_t strong_count() const { return strong.size(); }
    std::size_t weak_count() const { return weak.size(); }
};

struct NodalReport {
    double zero_tol = 0.0;
    std::vector<EigenvectorNodal> eigenvectors;  // ascending eigenvalue order
};

/// Default zero tolerance 1e-10 sqrt(n).
double default_zero_tol(std::size_t n);

NodalReport nodal_report(const SymmetricMatrix& adjacency, const Spectrum& s);
NodalReport nodal_report(const SymmetricMatrix& adjacency, const Spectrum& s, double zero_tol);

/// Strong domains are pairwise disjoint and each lies inside exactly one weak
/// domain of the same sign.
bool domains_consistent(const EigenvectorNodal& e, std::span<const double> v, double zero_tol);

}  // namespace gaplab
