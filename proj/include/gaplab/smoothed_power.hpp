#pragma once

// Power iteration for the top eigenpair of a symmetric matrix, its
// gap-based iteration-count prediction, and the smoothed variant that adds a
// small Wigner perturbation before iterating.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gaplab/ensembles.hpp"

namespace gaplab {

enum class ConvergenceCriterion {
    residual,           // ||A u - lambda u|| <= tol
    eigenvector_error,  // residual <= tol and dist(u, top eigenspace of A) <= tol
};

enum class ShiftPolicy {
    automatic,  // shift unless Gershgorin discs certify A >= 0
    never,
    always,
};

struct PowerOptions {
    double tol = 1e-6;
    std::size_t max_iter = 10000;
    ConvergenceCriterion criterion = ConvergenceCriterion::residual;
    ShiftPolicy shift = ShiftPolicy::automatic;
};

struct PowerTrace {
    std::size_t iterations = 0;      // matrix-vector products applied to u0
    std::vector<double> residuals;   // ||A u_k - lambda_k u_k|| for k = 0..iterations
    std::vector<double> errors;      // eigenvector_error criterion only
    double lambda = 0.0;             // Rayleigh quotient u^T A u (shift removed)
    double image_norm = 0.0;         // ||A u|| at the final iterate
    double shift = 0.0;              // c in (A + c I), 0 if unshifted
    std::vector<double> u;
    bool converged = false;
};

/// Iterates u <- (A + cI) u / ||(A + cI) u|| from unit u0. Convergence is
/// tested before each product, so an eigenvector u0 stops at iteration 0.
/// Breakdown when the shifted image vanishes.
PowerTrace power_iterate(const SymmetricMatrix& a, std::span<const double> u0, const PowerOptions& options);
PowerTrace power_iterate(const SymmetricMatrix& a, std::span<const double> u0, double tol, std::size_t max_iter);

/// ceil(top / (top - second) * ln(1/eps)). GapZero when top == second.
std::uint64_t predicted_iterations(double lambda_top, double lambda_second, double eps);

struct SmoothedResult {
    PowerTrace trace;
    double sigma = 0.0;
    double perturbation_norm = 0.0;  // ||X||_2
    double gap_perturbed = 0.0;      // lambda_n - lambda_{n-1} of F + sigma X
    double weyl_bound = 0.0;         // sigma ||X||_2
    double lambda_max_f = 0.0;
    bool certificate_holds = false;  // |lambda - lambda_max(F)| <= weyl_bound + final residual
};

/// Start vector used by smoothed_solve: a gaussian unit vector from `seed`.
std::vector<double> start_vector(std::size_t n, std::uint64_t seed);

/// Draws a gaussian Wigner X from `seed`, runs power iteration on F + sigma X
/// from start_vector(n, seed) and certifies the result with Weyl's bound.
/// sigma = 0 iterates on F itself.
SmoothedResult smoothed_solve(const SymmetricMatrix& f, double sigma, const PowerOptions& options, std::uint64_t seed);

/// 1e-2 ||F||_2, the default smoothing scale.
double default_sigma(const SymmetricMatrix& f);

}  // namespace gaplab
