/// @file  oracles.cpp

#include <ordembed/oracles.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ordembed::oracles {

namespace {

double spectral_norm(const Eigen::MatrixXd& M) {
    Eigen::VectorXd eigs = eigenvalues_descending(M);
    return std::max(std::abs(eigs(0)), std::abs(eigs(eigs.size() - 1)));
}

// Upper-triangle vectorization norm: each unordered pair counted once.
double ut_squared_norm(const Eigen::MatrixXd& M) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = i + 1; j < M.cols(); ++j) total += M(i, j) * M(i, j);
    return total;
}

double delta_difference_squared(const Eigen::MatrixXd& D1,
                                const Eigen::MatrixXd& D2) {
    const int n = static_cast<int>(D1.rows());
    double total = 0.0;
    for (const Triplet& t : enumerate_triplets(n)) {
        double diff = delta_apply(t, D1) - delta_apply(t, D2);
        total += diff * diff;
    }
    return total;
}

} // namespace

LtNormReport lt_norm_check(int n) {
    if (n < 3) throw std::domain_error("lt_norm_check requires n >= 3");
    const double root3 = std::sqrt(3.0);
    double worst = 0.0;
    for (const Triplet& t : enumerate_triplets(n)) {
        double norm = spectral_norm(Eigen::MatrixXd(lt_matrix(t, n)));
        worst = std::max(worst, std::abs(norm - root3));
    }
    return LtNormReport{n, worst};
}

MeanLtSquaredReport mean_lt_squared(int n) {
    if (n < 3) throw std::domain_error("mean_lt_squared requires n >= 3");
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
    for (const Triplet& t : enumerate_triplets(n)) {
        Eigen::MatrixXd L(lt_matrix(t, n));
        total += L * L;
    }
    Eigen::MatrixXd mean = total / static_cast<double>(triplet_count(n));

    Eigen::MatrixXd closed_form =
        (6.0 / n) * Eigen::MatrixXd::Identity(n, n) -
        (6.0 / (static_cast<double>(n) * (n - 1))) * hollow_ones(n);
    double norm = spectral_norm(mean);
    return MeanLtSquaredReport{
        n, mean, norm, std::abs(norm - 6.0 / (n - 1)),
        (mean - closed_form).cwiseAbs().maxCoeff()};
}

Eigen::Index pair_index(int i, int j, int n) {
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
        throw std::out_of_range("pair indices must be distinct and in range");
    }
    if (i > j) std::swap(i, j);
    // pairs (0,1),(0,2),...,(0,n-1),(1,2),... in lexicographic order
    return static_cast<Eigen::Index>(i) * n - static_cast<Eigen::Index>(i) * (i + 1) / 2 +
           (j - i - 1);
}

Eigen::MatrixXd delta_matrix(int n) {
    if (n < 3) throw std::domain_error("delta_matrix requires n >= 3");
    const Eigen::Index rows = triplet_count(n);
    const Eigen::Index cols = static_cast<Eigen::Index>(n) * (n - 1) / 2;
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::Index row = 0;
    for (const Triplet& t : enumerate_triplets(n)) {
        delta(row, pair_index(t.i, t.j, n)) += 1.0;
        delta(row, pair_index(t.i, t.k, n)) -= 1.0;
        ++row;
    }
    return delta;
}

Eigen::MatrixXd delta_eigenbasis_matrix(int n, int i) {
    if (i < 0 || i >= n) throw std::out_of_range("basis index out of range");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    return -static_cast<double>(n) *
               (e * ones.transpose() + ones * e.transpose() - 2.0 * e * e.transpose()) +
           2.0 * hollow_ones(n);
}

Eigen::MatrixXd delta_row_action(const Eigen::MatrixXd& D) {
    const Eigen::Index n = D.rows();
    Eigen::VectorXd row_sums = D.rowwise().sum(); // hollow, so self-terms vanish
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = i == j ? 0.0
                               : 2.0 * static_cast<double>(n - 1) * D(i, j) -
                                     row_sums(i) - row_sums(j);
        }
    }
    return out;
}

DeltaGramSpectrumReport delta_gram_spectrum(int n) {
    if (n < 4) throw std::domain_error("delta_gram_spectrum requires n >= 4");
    Eigen::MatrixXd delta = delta_matrix(n);
    Eigen::MatrixXd normal = delta.transpose() * delta;
    Eigen::VectorXd eigs = eigenvalues_descending(normal);

    const Eigen::Index pairs = normal.rows();
    DeltaGramSpectrumReport report;
    report.n = n;
    report.eigenvalues = eigs;
    report.expected = {
        {2.0 * (n - 1), pairs - n},
        {static_cast<double>(n), n - 1},
        {0.0, 1},
    };

    double tol = 1e-8 * eigs.cwiseAbs().maxCoeff();
    report.ok = true;
    Eigen::Index cursor = 0;
    std::ostringstream message;
    for (const auto& cluster : report.expected) {
        for (Eigen::Index c = 0; c < cluster.multiplicity; ++c, ++cursor) {
            if (std::abs(eigs(cursor) - cluster.value) > tol) {
                report.ok = false;
            }
        }
    }
    if (!report.ok) {
        message << "spectrum does not cluster into {";
        for (const auto& cluster : report.expected) {
            message << cluster.value << " x " << cluster.multiplicity << ", ";
        }
        message << "}; got:";
        for (Eigen::Index idx = 0; idx < eigs.size(); ++idx) message << ' ' << eigs(idx);
        report.message = message.str();
    }

    // J spans the kernel and each basis matrix of the middle eigenspace maps
    // to n times itself, both checked against the explicit normal matrix.
    auto ut_vectorize = [n](const Eigen::MatrixXd& M) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(n) * (n - 1) / 2);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) v(pair_index(i, j, n)) = M(i, j);
        return v;
    };
    double worst_residual =
        (normal * ut_vectorize(hollow_ones(n))).cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd basis = ut_vectorize(delta_eigenbasis_matrix(n, i));
        worst_residual = std::max(
            worst_residual,
            (normal * basis - static_cast<double>(n) * basis).cwiseAbs().maxCoeff());
    }
    report.max_eigenvector_residual = worst_residual;
    if (worst_residual > 1e-8 * n) report.ok = false;
    return report;
}

RipReport rip_check(const Eigen::MatrixXd& D1, const Eigen::MatrixXd& D2) {
    if (D1.rows() != D2.rows()) {
        throw std::invalid_argument("rip_check requires matching sizes");
    }
    const auto n = static_cast<double>(D1.rows());
    double delta2 = delta_difference_squared(D1, D2);
    Eigen::MatrixXd diff = centered_component(D1).C - centered_component(D2).C;
    double centered2 = ut_squared_norm(diff);
    return RipReport{delta2 - n * centered2, 2.0 * (n - 1.0) * centered2 - delta2};
}

IsometrySample isometry_sample(const Eigen::MatrixXd& D1, const Eigen::MatrixXd& D2) {
    if (D1.rows() != D2.rows()) {
        throw std::invalid_argument("isometry_sample requires matching sizes");
    }
    IsometrySample sample{};
    sample.raw_sq = (D1 - D2).squaredNorm();
    if (sample.raw_sq == 0.0) {
        sample.degenerate = true;
        return sample;
    }
    sample.delta_sq = delta_difference_squared(D1, D2);
    sample.centered_sq =
        (centered_component(D1).C - centered_component(D2).C).squaredNorm();
    sample.ratio_raw = sample.delta_sq / sample.raw_sq;
    sample.ratio_centered =
        sample.centered_sq > 0.0 ? sample.delta_sq / sample.centered_sq
                                 : std::numeric_limits<double>::infinity();
    return sample;
}

std::vector<IsometryRow> isometry_ratio_study(const std::vector<int>& n_values,
                                              int d, int trials, Rng& rng) {
    std::vector<IsometryRow> rows;
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sigma = 1.0 / std::sqrt(2.0 * d);
    for (int n : n_values) {
        IsometryRow row{};
        row.n = n;
        row.c1_raw = row.c1_centered = std::numeric_limits<double>::infinity();
        row.c2_raw = row.c2_centered = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            auto random_distance = [&]() {
                Eigen::MatrixXd pts(n, d);
                for (Eigen::Index r = 0; r < n; ++r)
                    for (int c = 0; c < d; ++c) pts(r, c) = sigma * gauss(rng);
                return distance_from_gram(
                    gram_from_embedding(center_embedding(pts)));
            };
            IsometrySample sample = isometry_sample(random_distance(), random_distance());
            if (sample.degenerate) continue;
            row.c1_raw = std::min(row.c1_raw, sample.ratio_raw);
            row.c2_raw = std::max(row.c2_raw, sample.ratio_raw);
            if (std::isfinite(sample.ratio_centered)) {
                row.c1_centered = std::min(row.c1_centered, sample.ratio_centered);
                row.c2_centered = std::max(row.c2_centered, sample.ratio_centered);
            }
            ++row.pairs_used;
        }
        if (row.pairs_used > 0) {
            row.ratio_raw = row.c2_raw / row.c1_raw;
            row.ratio_centered = row.c2_centered / row.c1_centered;
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace ordembed::oracles
