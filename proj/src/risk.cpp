/// @file  risk.cpp

#include <ordembed/risk.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ordembed {

namespace {

// log(1 + e^x) without overflow for large |x|
double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

void require_nonempty(const Dataset& data, const char* op) {
    if (data.observations.empty()) {
        throw std::domain_error(std::string(op) + " requires a nonempty dataset");
    }
}

} // namespace

double loss_value(LossKind kind, double margin) {
    switch (kind) {
        case LossKind::zero_one: return margin <= 0.0 ? 1.0 : 0.0;
        case LossKind::hinge: return std::max(0.0, 1.0 - margin);
        case LossKind::logistic: return softplus(-margin);
    }
    throw std::invalid_argument("unknown loss kind");
}

double empirical_risk(const Dataset& data, const Eigen::MatrixXd& G, LossKind kind) {
    require_nonempty(data, "empirical_risk");
    double total = 0.0;
    for (const auto& obs : data.observations) {
        total += loss_value(kind, obs.y * lt_apply(obs.triplet, G));
    }
    return total / static_cast<double>(data.observations.size());
}

Eigen::MatrixXd empirical_risk_gradient(const Dataset& data,
                                        const Eigen::MatrixXd& G, LossKind kind) {
    require_nonempty(data, "empirical_risk_gradient");
    if (kind == LossKind::zero_one) {
        throw std::invalid_argument("zero_one loss has no usable gradient");
    }
    const Eigen::Index n = G.rows();
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, n);
    for (const auto& obs : data.observations) {
        const Triplet& t = obs.triplet;
        double margin = obs.y * lt_apply(t, G);
        double coeff; // d loss / d <L_t, G>
        if (kind == LossKind::logistic) {
            coeff = -obs.y / (1.0 + std::exp(margin));
        } else {
            coeff = margin < 1.0 ? -static_cast<double>(obs.y) : 0.0;
        }
        if (coeff == 0.0) continue;
        grad(t.j, t.j) += coeff;
        grad(t.k, t.k) -= coeff;
        grad(t.i, t.j) -= coeff;
        grad(t.j, t.i) -= coeff;
        grad(t.i, t.k) += coeff;
        grad(t.k, t.i) += coeff;
    }
    grad /= static_cast<double>(data.observations.size());
    return grad;
}

double true_risk(const Eigen::MatrixXd& G, const Eigen::MatrixXd& G_star,
                 const LinkFunction& link, LossKind kind) {
    const int n = static_cast<int>(G.rows());
    double total = 0.0;
    for (const Triplet& t : enumerate_triplets(n)) {
        double p = link.value(lt_apply(t, G_star));
        double m = lt_apply(t, G);
        total += p * loss_value(kind, -m) + (1.0 - p) * loss_value(kind, m);
    }
    return total / static_cast<double>(triplet_count(n));
}

double true_nll_risk(const Eigen::MatrixXd& G, const Eigen::MatrixXd& G_star,
                     const LinkFunction& link) {
    const int n = static_cast<int>(G.rows());
    double total = 0.0;
    for (const Triplet& t : enumerate_triplets(n)) {
        double p = link.value(lt_apply(t, G_star));
        double m = lt_apply(t, G);
        total += p * nll_loss(link, -1, m) + (1.0 - p) * nll_loss(link, 1, m);
    }
    return total / static_cast<double>(triplet_count(n));
}

double bayes_error(const Eigen::MatrixXd& G_star, const LinkFunction& link) {
    const int n = static_cast<int>(G_star.rows());
    double total = 0.0;
    for (const Triplet& t : enumerate_triplets(n)) {
        double p = link.value(lt_apply(t, G_star));
        total += std::min(p, 1.0 - p);
    }
    return total / static_cast<double>(triplet_count(n));
}

double nll_loss(const LinkFunction& link, int y, double margin) {
    if (y != -1 && y != 1) throw std::invalid_argument("label must be -1 or +1");
    // margins can reach +-6*gamma; clamp so the log stays finite
    constexpr double kTiny = 1e-300;
    double q = y == -1 ? link.value(margin) : link.one_minus(margin);
    return -std::log(std::max(q, kTiny));
}

double min_abs_link_slope(const Eigen::MatrixXd& G, const Eigen::MatrixXd& G_star,
                          const LinkFunction& link) {
    const int n = static_cast<int>(G.rows());
    double best = std::numeric_limits<double>::infinity();
    for (const Triplet& t : enumerate_triplets(n)) {
        best = std::min(best, std::abs(link.derivative(lt_apply(t, G))));
        best = std::min(best, std::abs(link.derivative(lt_apply(t, G_star))));
    }
    return best;
}

ExcessRiskGap excess_risk_gap(const Eigen::MatrixXd& G,
                              const Eigen::MatrixXd& G_star,
                              const LinkFunction& link,
                              const ConstraintSet& constraints) {
    const int n = static_cast<int>(G.rows());
    double c_f = 0.25 * std::exp(-6.0 * constraints.gamma);
    double dist2 = (l_vector(G) - l_vector(G_star)).squaredNorm();
    double lhs = 2.0 * c_f * c_f * dist2 / static_cast<double>(triplet_count(n));
    double rhs = true_nll_risk(G, G_star, link) - true_nll_risk(G_star, G_star, link);
    return ExcessRiskGap{lhs, rhs, c_f};
}

double prediction_error(const Eigen::MatrixXd& G, const Dataset& holdout) {
    require_nonempty(holdout, "prediction_error");
    std::int64_t errors = 0;
    for (const auto& obs : holdout.observations) {
        if (obs.y * lt_apply(obs.triplet, G) <= 0.0) ++errors;
    }
    return static_cast<double>(errors) /
           static_cast<double>(holdout.observations.size());
}

} // namespace ordembed
