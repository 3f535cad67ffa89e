/// @file  oracles.hpp
/// @brief Executable verifiers for the closed-form spectral facts the
///        library relies on: comparison-operator norms, the spectrum of the
///        difference operator's normal matrix, the restricted isometry
///        sandwich, and the empirical isometry-constant study.

#pragma once

#include <ordembed/edm.hpp>
#include <ordembed/rng.hpp>
#include <ordembed/triplet.hpp>

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ordembed::oracles {

/// Max deviation of any ||L_t||_2 from sqrt(3) over all canonical triplets.
struct LtNormReport {
    int n;
    double max_abs_deviation;
};

LtNormReport lt_norm_check(int n);

/// E_t[L_t^2] compared against its closed form (6/n) I - (6/(n(n-1))) J,
/// whose spectral norm is 6/(n-1).
struct MeanLtSquaredReport {
    int n;
    Eigen::MatrixXd matrix;
    double norm;
    double norm_deviation;
    double max_entry_deviation;
};

MeanLtSquaredReport mean_lt_squared(int n);

/// Column index of the unordered pair (i, j), i < j, in the lexicographic
/// upper-triangle ordering of C(n,2) pairs.
Eigen::Index pair_index(int i, int j, int n);

/// The difference operator as an explicit n*C(n-1,2) x C(n,2) matrix over
/// the unit upper-triangle vectorization of symmetric hollow matrices.
/// Each row has exactly two nonzeros, +1 and -1.
Eigen::MatrixXd delta_matrix(int n);

/// Basis matrix of the eigenvalue-n eigenspace of the normal matrix:
/// concentrated on row/column i, -n(e_i 1^T + 1 e_i^T - 2 e_i e_i^T) + 2J.
Eigen::MatrixXd delta_eigenbasis_matrix(int n, int i);

/// Closed-form action of the normal matrix on a symmetric hollow D:
/// entry (i,j) becomes 2(n-1) D_ij - sum_m D_im - sum_m D_jm.
Eigen::MatrixXd delta_row_action(const Eigen::MatrixXd& D);

struct SpectrumCluster {
    double value;
    Eigen::Index multiplicity;
};

/// Verifies that the normal matrix's spectrum clusters exactly into
/// {0 x 1, n x (n-1), 2(n-1) x (C(n,2)-n)} and that each basis matrix of the
/// middle eigenspace maps to n times itself.
struct DeltaGramSpectrumReport {
    int n;
    bool ok;
    std::vector<SpectrumCluster> expected;
    Eigen::VectorXd eigenvalues; // descending
    double max_eigenvector_residual;
    std::string message;
};

DeltaGramSpectrumReport delta_gram_spectrum(int n);

/// Restricted isometry sandwich for a pair of distance matrices:
///   n ||C - C'||^2 <= ||Delta(D) - Delta(D')||^2 <= 2(n-1) ||C - C'||^2,
/// where ||.||^2 on centered components is the upper-triangle vectorization
/// norm (each unordered pair counted once; half the full-matrix Frobenius
/// square). Slacks are signed; nonnegative up to roundoff when both inputs
/// are distance matrices.
struct RipReport {
    double lower_slack;
    double upper_slack;
};

RipReport rip_check(const Eigen::MatrixXd& D1, const Eigen::MatrixXd& D2);

/// One pair's contribution to the isometry study. Degenerate pairs
/// (D1 == D2) define no ratio and are skipped by the study.
struct IsometrySample {
    bool degenerate;
    double delta_sq;    // ||Delta(D1) - Delta(D2)||^2
    double raw_sq;      // ||D1 - D2||_F^2, full matrix
    double centered_sq; // ||C1 - C2||_F^2, full matrix
    double ratio_raw;
    double ratio_centered;
};

IsometrySample isometry_sample(const Eigen::MatrixXd& D1, const Eigen::MatrixXd& D2);

/// Empirical isometry constants over random configuration pairs:
/// c1 = min, c2 = max of ||Delta(D) - Delta(D')||^2 / ||D - D'||_F^2.
/// Reported against both the raw difference (full-matrix Frobenius) and the
/// centered components, since the two normalizations differ by the kernel
/// component.
struct IsometryRow {
    int n;
    int pairs_used;
    double c1_raw, c2_raw, ratio_raw;
    double c1_centered, c2_centered, ratio_centered;
};

std::vector<IsometryRow> isometry_ratio_study(const std::vector<int>& n_values,
                                              int d, int trials, Rng& rng);

} // namespace ordembed::oracles
