/// @file  edm.hpp
/// @brief Distance/Gram matrix representations and conversions, the
///        kernel-orthogonal decomposition of distance matrices, and the
///        second-eigenvalue recovery of the kernel component.

#pragma once

#include <Eigen/Dense>

#include <string>

namespace ordembed {

/// n x d centered point configuration: each coordinate sums to zero across
/// the n points (translation ambiguity removed).
struct Embedding {
    Eigen::MatrixXd points;

    Eigen::Index n() const { return points.rows(); }
    Eigen::Index d() const { return points.cols(); }
};

/// V = I - (1/n) 11^T, the projector onto the mean-zero subspace.
Eigen::MatrixXd centering_matrix(Eigen::Index n);

/// J = 11^T - I: the hollow all-ones matrix spanning the kernel of the
/// comparison operator.
Eigen::MatrixXd hollow_ones(Eigen::Index n);

/// Subtracts per-coordinate means. Any finite input is centerable.
Embedding center_embedding(const Eigen::MatrixXd& raw_points);

/// G = X X^T for centered points (rows of X); PSD, centered, rank <= d.
Eigen::MatrixXd gram_from_embedding(const Embedding& X);

/// D = diag(G) 1^T - 2G + 1 diag(G)^T; hollow and symmetric.
Eigen::MatrixXd distance_from_gram(const Eigen::MatrixXd& G);

/// G = -1/2 V D V: the inverse of distance_from_gram on centered Gram
/// matrices. PSD whenever D is a valid squared-distance matrix.
Eigen::MatrixXd gram_from_distance(const Eigen::MatrixXd& D);

/// Orthogonal decomposition D = C + sigma * J with trace(C J) = 0.
/// sigma is the mean off-diagonal entry (the average squared distance).
struct CenteredDistanceComponent {
    Eigen::MatrixXd C;
    double sigma;
};

CenteredDistanceComponent centered_component(const Eigen::MatrixXd& D);

/// Eigenvalues of a symmetric matrix sorted in descending order.
/// (Eigen's solver reports ascending; all spectral code here re-sorts to
/// descending once, through this helper.)
Eigen::VectorXd eigenvalues_descending(const Eigen::MatrixXd& M);

/// Second entry of the descending eigenvalue list, with multiplicity.
/// Requires n >= 2.
double second_largest_eigenvalue(const Eigen::MatrixXd& M);

/// Result of reconstructing a distance or Gram matrix from the centered
/// component alone. lambda2 is the recovered kernel coefficient; when the
/// input came from a valid configuration with n > d+2 it equals the mean
/// squared distance. lambda2 < 0 signals that the input was not close to a
/// centered component of any distance matrix.
struct KernelRecovery {
    Eigen::MatrixXd matrix;
    double lambda2;
    Eigen::Index negative_offdiag;

    bool lambda2_negative() const { return lambda2 < 0.0; }
};

/// D = C + lambda2(C) * J. Exact whenever C is the centered component of a
/// distance matrix of n > d+2 points. Negative off-diagonal entries of the
/// output are counted, not clamped.
KernelRecovery recover_distance(const Eigen::MatrixXd& C);

/// G = -1/2 V (C + lambda2(C) J) V: recover_distance composed with
/// gram_from_distance.
KernelRecovery recover_gram(const Eigen::MatrixXd& C);

/// Eigenvalue sign census of a candidate distance matrix. A valid matrix of
/// rank r has exactly one positive eigenvalue, n-r zeros, r-1 negatives, and
/// is negative semidefinite on the subspace orthogonal to the ones vector.
struct EdmValidity {
    int positive_count = 0;
    int zero_count = 0;
    int negative_count = 0;
    bool nsd_on_ones_perp = false;

    bool valid() const { return positive_count <= 1 && nsd_on_ones_perp; }
};

EdmValidity edm_validity(const Eigen::MatrixXd& D);

/// Invariant checks used by tests and input validation. Each returns an
/// empty string when the invariant holds, else a short description.
std::string gram_invariant_violation(const Eigen::MatrixXd& G);
std::string distance_invariant_violation(const Eigen::MatrixXd& D);

} // namespace ordembed
