/// @file  solvers.hpp
/// @brief The three estimation algorithms: rank-d projected gradient
///        descent, nuclear-norm-ball projected gradient descent, and its
///        debiased variant, plus their spectral projection primitives and a
///        factored (non-convex) gradient descent baseline.

#pragma once

#include <ordembed/risk.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace ordembed {

struct SolverConfig {
    int max_iters = 2000;
    double initial_step = 1.0;
    double backtracking_shrink = 0.5;
    double armijo_constant = 1e-4;
    double rel_tol = 1e-6;
    std::uint64_t seed = 0;
};

struct SolveResult {
    Eigen::MatrixXd G_hat;
    std::vector<double> objective_trace; // value after each accepted step
    int iterations = 0;
    bool converged = false;
};

/// Frobenius-nearest positive semidefinite matrix: eigendecompose and clamp
/// negative eigenvalues to zero.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M);

/// Keeps the d algebraically largest eigenvalues, zeroes the rest, and
/// clamps retained negatives to zero (the domain is PSD). Output has
/// rank <= d.
Eigen::MatrixXd project_rank_d(const Eigen::MatrixXd& M, int d);

/// Euclidean projection of v onto { s : s >= 0, sum(s) <= lambda }.
Eigen::VectorXd simplex_cap_projection(const Eigen::VectorXd& v, double lambda);

/// Projection onto { G PSD : ||G||_* <= lambda }: eigendecompose and apply
/// simplex_cap_projection to the eigenvalue vector.
Eigen::MatrixXd project_nuclear_ball_psd(const Eigen::MatrixXd& M, double lambda);

using Projector = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

Projector rank_projector(int d);
Projector nuclear_projector(double lambda);

/// Projected gradient descent on the logistic empirical risk from G0 = 0,
/// with Armijo backtracking (re-projection after every trial step). Stops at
/// max_iters or when the objective decrease falls below rel_tol relative to
/// the current value. Throws on non-finite objective or gradient, naming the
/// iteration.
SolveResult pgd(const Dataset& data, const Projector& project,
                const SolverConfig& config);

/// Re-fits the eigenvalue magnitudes of G_biased in its fixed top-d
/// eigenbasis: solves min over s >= 0 of the empirical risk of
/// U diag(s) U^T by projected gradient with the same line search. The
/// nonnegativity constraint keeps the output PSD.
SolveResult debias(const Eigen::MatrixXd& G_biased, int d, const Dataset& data,
                   const SolverConfig& config);

/// Gradient descent on the factored objective R(U U^T) with U in R^{n x d},
/// random small initialization from config.seed. Baseline only; shares the
/// line-search and stopping rules of pgd.
SolveResult factored_gd(const Dataset& data, int d, const SolverConfig& config);

} // namespace ordembed
