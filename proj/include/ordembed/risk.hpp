/// @file  risk.hpp
/// @brief Loss functions, empirical and population risk, gradients, Bayes
///        error, and the excess-risk / operator-distance diagnostic.

#pragma once

#include <ordembed/triplet.hpp>

#include <Eigen/Dense>

#include <vector>

namespace ordembed {

enum class LossKind { zero_one, hinge, logistic };

/// A collection of labelled triplet observations over n items.
struct Dataset {
    int n = 0;
    std::vector<TripletObservation> observations;
};

/// Feasible-set parameters: nuclear-norm radius and entrywise bound.
struct ConstraintSet {
    double lambda;
    double gamma;
};

/// zero_one: 1 if margin <= 0 else 0 (ties count as errors).
/// hinge: max(0, 1 - margin). logistic: log(1 + e^-margin), evaluated on the
/// stable branch max(-m, 0) + log1p(e^-|m|).
double loss_value(LossKind kind, double margin);

/// (1/|S|) sum of loss(y_t <L_t, G>). Summation runs in observation order so
/// results are deterministic. Requires a nonempty dataset.
double empirical_risk(const Dataset& data, const Eigen::MatrixXd& G, LossKind kind);

/// Analytic gradient of the empirical risk with respect to G (hinge uses the
/// subgradient that is 0 at margin exactly 1). zero_one is unsupported.
Eigen::MatrixXd empirical_risk_gradient(const Dataset& data,
                                        const Eigen::MatrixXd& G, LossKind kind);

/// Population risk under the link model: expectation over a uniform triplet
/// and its noisy label. Enumerates all triplets; intended for desk-scale n.
double true_risk(const Eigen::MatrixXd& G, const Eigen::MatrixXd& G_star,
                 const LinkFunction& link, LossKind kind);

/// Population risk of G under the negative log-likelihood loss induced by
/// the link. For the logistic link this equals true_risk with logistic loss.
double true_nll_risk(const Eigen::MatrixXd& G, const Eigen::MatrixXd& G_star,
                     const LinkFunction& link);

/// (1/|T|) sum of min(p_t, 1 - p_t): the floor for holdout prediction error.
double bayes_error(const Eigen::MatrixXd& G_star, const LinkFunction& link);

/// Negative log-likelihood of one observation: y=-1 -> -log f(margin),
/// y=+1 -> -log(1 - f(margin)). Link outputs are clamped away from {0, 1}.
double nll_loss(const LinkFunction& link, int y, double margin);

/// Smallest |f'| over the margins that G and G_star induce; a sampled
/// estimate of the link-inversion constant (the closed form is a lower
/// bound on this for the logistic link).
double min_abs_link_slope(const Eigen::MatrixXd& G, const Eigen::MatrixXd& G_star,
                          const LinkFunction& link);

/// Diagnostic relating operator-space distance to excess risk. The model
/// guarantees lhs <= rhs:
///   lhs = (2 c_f^2 / |T|) ||L(G) - L(G_star)||^2,
///   rhs = true_nll_risk(G) - true_nll_risk(G_star),
/// with c_f the closed-form logistic slope bound (1/4) e^(-6 gamma).
struct ExcessRiskGap {
    double lhs;
    double rhs;
    double c_f;
};

ExcessRiskGap excess_risk_gap(const Eigen::MatrixXd& G,
                              const Eigen::MatrixXd& G_star,
                              const LinkFunction& link,
                              const ConstraintSet& constraints);

/// Fraction of holdout observations with y_t <L_t, G> <= 0.
double prediction_error(const Eigen::MatrixXd& G, const Dataset& holdout);

} // namespace ordembed
