/// @file  solvers.cpp

#include <ordembed/solvers.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace ordembed {

namespace {

constexpr int kMaxBacktracks = 60;

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> decompose(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }
    return solver;
}

double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

// Shared Armijo backtracking: steps from `point` along -gradient, maps the
// trial through `advance` (which applies any projection), and accepts on the
// sufficient-decrease test f(trial) <= f - (c/eta) * ||trial - point||^2.
// Returns false when no step length gives sufficient decrease.
template <typename Matrix, typename Advance, typename Objective>
bool armijo_step(const Matrix& point, double objective, const Advance& advance,
                 const Objective& evaluate, const SolverConfig& config,
                 Matrix& next, double& next_objective) {
    double eta = config.initial_step;
    for (int attempt = 0; attempt < kMaxBacktracks; ++attempt, eta *= config.backtracking_shrink) {
        Matrix trial = advance(eta);
        double trial_objective = evaluate(trial);
        if (!std::isfinite(trial_objective)) continue;
        double required = objective -
            config.armijo_constant / eta * (trial - point).squaredNorm();
        if (trial_objective <= required) {
            next = std::move(trial);
            next_objective = trial_objective;
            return true;
        }
    }
    return false;
}

} // namespace

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M) {
    auto solver = decompose(M);
    Eigen::VectorXd eigs = solver.eigenvalues().cwiseMax(0.0);
    return solver.eigenvectors() * eigs.asDiagonal() *
           solver.eigenvectors().transpose();
}

Eigen::MatrixXd project_rank_d(const Eigen::MatrixXd& M, int d) {
    const Eigen::Index n = M.rows();
    if (d < 1 || d > n) throw std::domain_error("rank must satisfy 1 <= d <= n");
    auto solver = decompose(M);
    Eigen::VectorXd eigs = solver.eigenvalues(); // ascending
    for (Eigen::Index idx = 0; idx < n - d; ++idx) eigs(idx) = 0.0;
    eigs = eigs.cwiseMax(0.0);
    return solver.eigenvectors() * eigs.asDiagonal() *
           solver.eigenvectors().transpose();
}

Eigen::VectorXd simplex_cap_projection(const Eigen::VectorXd& v, double lambda) {
    if (lambda <= 0.0) throw std::domain_error("radius must be positive");
    Eigen::VectorXd clamped = v.cwiseMax(0.0);
    if (clamped.sum() <= lambda) return clamped;

    // Water-filling: theta solves sum(max(v - theta, 0)) = lambda.
    std::vector<double> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        double candidate = (cumulative - lambda) / static_cast<double>(k + 1);
        if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
            theta = candidate;
            break;
        }
    }
    return (v.array() - theta).cwiseMax(0.0);
}

Eigen::MatrixXd project_nuclear_ball_psd(const Eigen::MatrixXd& M, double lambda) {
    auto solver = decompose(M);
    Eigen::VectorXd eigs = simplex_cap_projection(solver.eigenvalues(), lambda);
    return solver.eigenvectors() * eigs.asDiagonal() *
           solver.eigenvectors().transpose();
}

Projector rank_projector(int d) {
    return [d](const Eigen::MatrixXd& M) { return project_rank_d(M, d); };
}

Projector nuclear_projector(double lambda) {
    return [lambda](const Eigen::MatrixXd& M) {
        return project_nuclear_ball_psd(M, lambda);
    };
}

SolveResult pgd(const Dataset& data, const Projector& project,
                const SolverConfig& config) {
    if (data.observations.empty()) {
        throw std::domain_error("pgd requires a nonempty dataset");
    }
    const Eigen::Index n = data.n;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);

    auto objective = [&](const Eigen::MatrixXd& M) {
        return empirical_risk(data, M, LossKind::logistic);
    };

    SolveResult result;
    double obj = objective(G);
    result.objective_trace.push_back(obj);

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        Eigen::MatrixXd grad = empirical_risk_gradient(data, G, LossKind::logistic);
        if (!grad.allFinite()) {
            throw std::runtime_error("non-finite gradient at iteration " +
                                     std::to_string(iter));
        }
        auto advance = [&](double eta) -> Eigen::MatrixXd {
            return project(G - eta * grad);
        };
        Eigen::MatrixXd next;
        double next_obj = 0.0;
        if (!armijo_step(G, obj, advance, objective, config, next, next_obj)) {
            result.converged = true; // no step length makes progress
            break;
        }
        double decrease = obj - next_obj;
        G = std::move(next);
        obj = next_obj;
        result.objective_trace.push_back(obj);
        result.iterations = iter;
        if (decrease <= config.rel_tol * std::max(std::abs(obj), 1e-12)) {
            result.converged = true;
            break;
        }
    }
    if (!std::isfinite(obj)) {
        throw std::runtime_error("non-finite objective after iteration " +
                                 std::to_string(result.iterations));
    }
    result.G_hat = std::move(G);
    return result;
}

SolveResult debias(const Eigen::MatrixXd& G_biased, int d, const Dataset& data,
                   const SolverConfig& config) {
    if (data.observations.empty()) {
        throw std::domain_error("debias requires a nonempty dataset");
    }
    const Eigen::Index n = G_biased.rows();
    if (d < 1 || d > n) throw std::domain_error("rank must satisfy 1 <= d <= n");

    auto solver = decompose(G_biased);
    Eigen::MatrixXd U = solver.eigenvectors().rightCols(d); // top-d eigenvectors
    Eigen::VectorXd s = solver.eigenvalues().tail(d).cwiseMax(0.0);

    double eig_scale = solver.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::Index numerical_rank =
        (solver.eigenvalues().array() > 1e-10 * eig_scale).count();
    if (numerical_rank < d) {
        std::cerr << "debias: requested rank " << d << " exceeds numerical rank "
                  << numerical_rank << "; surplus directions stay near zero\n";
    }

    // Margins are linear in s: <L_t, U diag(s) U^T> = sum_r s_r * a_{t,r}.
    const auto m = static_cast<Eigen::Index>(data.observations.size());
    Eigen::MatrixXd features(m, d);
    Eigen::VectorXd labels(m);
    for (Eigen::Index row = 0; row < m; ++row) {
        const auto& obs = data.observations[static_cast<std::size_t>(row)];
        const Triplet& t = obs.triplet;
        for (int r = 0; r < d; ++r) {
            double ui = U(t.i, r), uj = U(t.j, r), uk = U(t.k, r);
            features(row, r) = uj * uj - 2.0 * ui * uj - uk * uk + 2.0 * ui * uk;
        }
        labels(row) = obs.y;
    }

    auto objective = [&](const Eigen::VectorXd& weights) {
        Eigen::VectorXd margins = labels.cwiseProduct(features * weights);
        double total = 0.0;
        for (Eigen::Index row = 0; row < m; ++row) total += softplus(-margins(row));
        return total / static_cast<double>(m);
    };
    auto gradient = [&](const Eigen::VectorXd& weights) -> Eigen::VectorXd {
        Eigen::VectorXd margins = labels.cwiseProduct(features * weights);
        Eigen::VectorXd coeff(m);
        for (Eigen::Index row = 0; row < m; ++row) {
            coeff(row) = -labels(row) / (1.0 + std::exp(margins(row)));
        }
        return features.transpose() * coeff / static_cast<double>(m);
    };

    SolveResult result;
    double obj = objective(s);
    result.objective_trace.push_back(obj);
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        Eigen::VectorXd grad = gradient(s);
        if (!grad.allFinite()) {
            throw std::runtime_error("non-finite gradient at iteration " +
                                     std::to_string(iter));
        }
        auto advance = [&](double eta) -> Eigen::VectorXd {
            return (s - eta * grad).cwiseMax(0.0);
        };
        Eigen::VectorXd next;
        double next_obj = 0.0;
        if (!armijo_step(s, obj, advance, objective, config, next, next_obj)) {
            result.converged = true;
            break;
        }
        double decrease = obj - next_obj;
        s = std::move(next);
        obj = next_obj;
        result.objective_trace.push_back(obj);
        result.iterations = iter;
        if (decrease <= config.rel_tol * std::max(std::abs(obj), 1e-12)) {
            result.converged = true;
            break;
        }
    }
    result.G_hat = U * s.asDiagonal() * U.transpose();
    return result;
}

SolveResult factored_gd(const Dataset& data, int d, const SolverConfig& config) {
    if (data.observations.empty()) {
        throw std::domain_error("factored_gd requires a nonempty dataset");
    }
    const Eigen::Index n = data.n;
    if (d < 1 || d > n) throw std::domain_error("rank must satisfy 1 <= d <= n");

    // Zero is a stationary point of the factored objective, so start from a
    // small random configuration at the generative scale.
    Rng rng = make_rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0 * d));
    Eigen::MatrixXd U(n, d);
    for (Eigen::Index r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) U(r, c) = gauss(rng);

    auto objective = [&](const Eigen::MatrixXd& pts) {
        return empirical_risk(data, pts * pts.transpose(), LossKind::logistic);
    };

    SolveResult result;
    double obj = objective(U);
    result.objective_trace.push_back(obj);
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        Eigen::MatrixXd gram_grad =
            empirical_risk_gradient(data, U * U.transpose(), LossKind::logistic);
        Eigen::MatrixXd grad = 2.0 * gram_grad * U;
        if (!grad.allFinite()) {
            throw std::runtime_error("non-finite gradient at iteration " +
                                     std::to_string(iter));
        }
        auto advance = [&](double eta) -> Eigen::MatrixXd { return U - eta * grad; };
        Eigen::MatrixXd next;
        double next_obj = 0.0;
        if (!armijo_step(U, obj, advance, objective, config, next, next_obj)) {
            result.converged = true;
            break;
        }
        double decrease = obj - next_obj;
        U = std::move(next);
        obj = next_obj;
        result.objective_trace.push_back(obj);
        result.iterations = iter;
        if (decrease <= config.rel_tol * std::max(std::abs(obj), 1e-12)) {
            result.converged = true;
            break;
        }
    }
    result.G_hat = U * U.transpose();
    return result;
}

} // namespace ordembed
