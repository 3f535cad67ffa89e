/// @file  edm.cpp

#include <ordembed/edm.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ordembed {

Eigen::MatrixXd centering_matrix(Eigen::Index n) {
    if (n < 1) throw std::domain_error("centering_matrix requires n >= 1");
    return Eigen::MatrixXd::Identity(n, n) -
           Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

Eigen::MatrixXd hollow_ones(Eigen::Index n) {
    if (n < 1) throw std::domain_error("hollow_ones requires n >= 1");
    return Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
}

Embedding center_embedding(const Eigen::MatrixXd& raw_points) {
    if (raw_points.rows() < 1) {
        throw std::domain_error("center_embedding requires at least one point");
    }
    Eigen::RowVectorXd mean = raw_points.colwise().mean();
    return Embedding{raw_points.rowwise() - mean};
}

Eigen::MatrixXd gram_from_embedding(const Embedding& X) {
    return X.points * X.points.transpose();
}

Eigen::MatrixXd distance_from_gram(const Eigen::MatrixXd& G) {
    const Eigen::Index n = G.rows();
    Eigen::VectorXd diag = G.diagonal();
    Eigen::MatrixXd D = diag.replicate(1, n) + diag.transpose().replicate(n, 1) - 2.0 * G;
    D.diagonal().setZero();
    return D;
}

Eigen::MatrixXd gram_from_distance(const Eigen::MatrixXd& D) {
    Eigen::MatrixXd V = centering_matrix(D.rows());
    return -0.5 * V * D * V;
}

CenteredDistanceComponent centered_component(const Eigen::MatrixXd& D) {
    const Eigen::Index n = D.rows();
    if (n < 2) throw std::domain_error("centered_component requires n >= 2");
    // trace(D J) / ||J||_F^2 reduces to the mean off-diagonal entry
    double sigma = (D.sum() - D.trace()) / static_cast<double>(n * (n - 1));
    return CenteredDistanceComponent{D - sigma * hollow_ones(n), sigma};
}

Eigen::VectorXd eigenvalues_descending(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }
    return solver.eigenvalues().reverse();
}

double second_largest_eigenvalue(const Eigen::MatrixXd& M) {
    if (M.rows() < 2) {
        throw std::domain_error("second_largest_eigenvalue requires n >= 2");
    }
    return eigenvalues_descending(M)(1);
}

KernelRecovery recover_distance(const Eigen::MatrixXd& C) {
    double lambda2 = second_largest_eigenvalue(C);
    Eigen::MatrixXd D = C + lambda2 * hollow_ones(C.rows());
    Eigen::Index negatives = 0;
    for (Eigen::Index r = 0; r < D.rows(); ++r) {
        for (Eigen::Index c = 0; c < D.cols(); ++c) {
            if (r != c && D(r, c) < 0.0) ++negatives;
        }
    }
    return KernelRecovery{std::move(D), lambda2, negatives};
}

KernelRecovery recover_gram(const Eigen::MatrixXd& C) {
    KernelRecovery rec = recover_distance(C);
    rec.matrix = gram_from_distance(rec.matrix);
    return rec;
}

EdmValidity edm_validity(const Eigen::MatrixXd& D) {
    const Eigen::Index n = D.rows();
    Eigen::VectorXd eigs = eigenvalues_descending(D);
    double scale = std::max(std::abs(eigs(0)), std::abs(eigs(n - 1)));
    double tol = 1e-8 * scale;

    EdmValidity report;
    for (Eigen::Index idx = 0; idx < n; ++idx) {
        if (eigs(idx) > tol) {
            ++report.positive_count;
        } else if (eigs(idx) < -tol) {
            ++report.negative_count;
        } else {
            ++report.zero_count;
        }
    }

    // Restrict D to the orthogonal complement of the ones vector: P has
    // orthonormal columns spanning 1-perp, taken from the centering matrix.
    if (n >= 2) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> vsolver(centering_matrix(n));
        Eigen::MatrixXd P = vsolver.eigenvectors().rightCols(n - 1);
        Eigen::MatrixXd restricted = P.transpose() * D * P;
        double max_eig = eigenvalues_descending(restricted)(0);
        report.nsd_on_ones_perp = max_eig <= tol;
    } else {
        report.nsd_on_ones_perp = true;
    }
    return report;
}

std::string gram_invariant_violation(const Eigen::MatrixXd& G) {
    if (G.rows() != G.cols()) return "not square";
    const Eigen::Index n = G.rows();
    double scale = G.cwiseAbs().maxCoeff();
    if (scale == 0.0) return {};

    double asym = (G - G.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) return "not symmetric";

    Eigen::VectorXd eigs = eigenvalues_descending(0.5 * (G + G.transpose()));
    if (eigs(n - 1) < -1e-8 * std::max(eigs(0), 0.0)) {
        return "not positive semidefinite";
    }

    double max_row_sum = G.rowwise().sum().cwiseAbs().maxCoeff();
    if (max_row_sum > 1e-8 * scale * static_cast<double>(n)) {
        return "not centered";
    }
    return {};
}

std::string distance_invariant_violation(const Eigen::MatrixXd& D) {
    if (D.rows() != D.cols()) return "not square";
    if (D.diagonal().cwiseAbs().maxCoeff() != 0.0) return "not hollow";
    double scale = D.cwiseAbs().maxCoeff();
    if (scale == 0.0) return {};
    if ((D - D.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        return "not symmetric";
    }
    if (D.minCoeff() < 0.0) return "negative entry";
    return {};
}

} // namespace ordembed
