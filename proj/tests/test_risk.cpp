#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ordembed/risk.hpp>
#include <ordembed/triplet.hpp>

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace ordembed;
using namespace ordembed::testing;

namespace {

Dataset random_dataset(int n, int m, const Eigen::MatrixXd& G_star,
                       const LinkFunction& link, Rng& rng) {
    Dataset data;
    data.n = n;
    for (const Triplet& t : sample_triplets(n, m, rng)) {
        data.observations.push_back(observe(t, G_star, link, rng));
    }
    return data;
}

// Clamp a Gram matrix into the entrywise box of radius gamma by scaling.
Eigen::MatrixXd scale_into_box(const Eigen::MatrixXd& G, double gamma) {
    double max_abs = G.cwiseAbs().maxCoeff();
    return max_abs > gamma ? Eigen::MatrixXd(G * (gamma / max_abs)) : G;
}

} // namespace

TEST_CASE("loss_value") {
    CHECK(loss_value(LossKind::logistic, 0.0) == doctest::Approx(std::log(2.0)));
    CHECK(loss_value(LossKind::hinge, 2.0) == 0.0);
    CHECK(loss_value(LossKind::hinge, -0.5) == doctest::Approx(1.5));
    CHECK(loss_value(LossKind::logistic, -3.0) ==
          doctest::Approx(std::log(1.0 + std::exp(3.0))));
    CHECK(loss_value(LossKind::zero_one, 0.0) == 1.0); // ties count as errors
    CHECK(loss_value(LossKind::zero_one, 1e-12) == 0.0);

    // the stable branch stays finite far outside the overflow range
    CHECK(loss_value(LossKind::logistic, -1000.0) == doctest::Approx(1000.0));
    CHECK(loss_value(LossKind::logistic, 1000.0) == 0.0);

    // hinge and logistic are 1-Lipschitz in the margin; zero-one is bounded
    Rng rng = make_rng(30);
    std::uniform_real_distribution<double> span(-8.0, 8.0);
    for (int rep = 0; rep < 200; ++rep) {
        double a = span(rng), b = span(rng);
        for (LossKind kind : {LossKind::hinge, LossKind::logistic}) {
            CHECK(std::abs(loss_value(kind, a) - loss_value(kind, b)) <=
                  std::abs(a - b) + 1e-12);
        }
        CHECK(loss_value(LossKind::zero_one, a) <= 1.0);
    }
}

TEST_CASE("empirical_risk") {
    Rng rng = make_rng(31);
    Eigen::MatrixXd G_star = random_centered_gram(6, 2, rng);
    Dataset data = random_dataset(6, 40, G_star, logistic_link(), rng);

    // all margins vanish at G = 0
    CHECK(empirical_risk(data, Eigen::MatrixXd::Zero(6, 6), LossKind::logistic) ==
          doctest::Approx(std::log(2.0)));

    Dataset single;
    single.n = 3;
    single.observations.emplace_back(Triplet(0, 1, 2), 1);
    Eigen::MatrixXd G(3, 3);
    G << 1, 0, -1, 0, 0, 0, -1, 0, 1; // margin = y * (-3)
    CHECK(empirical_risk(single, G, LossKind::logistic) ==
          doctest::Approx(loss_value(LossKind::logistic, -3.0)));

    // reference path through the explicit sparse operator matrices
    Eigen::MatrixXd G_rand = random_symmetric(6, rng);
    for (LossKind kind : {LossKind::zero_one, LossKind::hinge, LossKind::logistic}) {
        double reference = 0.0;
        for (const auto& obs : data.observations) {
            Eigen::MatrixXd L(lt_matrix(obs.triplet, 6));
            reference += loss_value(kind, obs.y * L.cwiseProduct(G_rand).sum());
        }
        reference /= static_cast<double>(data.observations.size());
        CHECK(empirical_risk(data, G_rand, kind) == doctest::Approx(reference).epsilon(1e-12));
    }

    // permutation invariance of the average
    Dataset shuffled = data;
    std::shuffle(shuffled.observations.begin(), shuffled.observations.end(), rng);
    CHECK(empirical_risk(shuffled, G_rand, LossKind::logistic) ==
          doctest::Approx(empirical_risk(data, G_rand, LossKind::logistic)).epsilon(1e-12));

    CHECK_THROWS_AS(empirical_risk(Dataset{6, {}}, G_rand, LossKind::logistic),
                    std::domain_error);
}

TEST_CASE("empirical_risk_gradient matches central differences") {
    Rng rng = make_rng(32);
    const int n = 8;
    Eigen::MatrixXd G_star = random_centered_gram(n, 2, rng);
    Dataset data = random_dataset(n, 50, G_star, logistic_link(), rng);
    Eigen::MatrixXd G = random_symmetric(n, rng);

    // central differences over the symmetric parameterization: perturb the
    // (r,c) and (c,r) entries together, so the quotient is <grad, E_rc> with
    // E_rc the symmetric basis matrix (2 * grad_rc off the diagonal)
    const double h = 1e-6;
    for (LossKind kind : {LossKind::logistic, LossKind::hinge}) {
        Eigen::MatrixXd analytic = empirical_risk_gradient(data, G, kind);
        Eigen::MatrixXd numeric(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = r; c < n; ++c) {
                Eigen::MatrixXd up = G, down = G;
                up(r, c) += h;
                down(r, c) -= h;
                if (c != r) {
                    up(c, r) += h;
                    down(c, r) -= h;
                }
                double slope =
                    (empirical_risk(data, up, kind) - empirical_risk(data, down, kind)) /
                    (2.0 * h);
                numeric(r, c) = numeric(c, r) = c == r ? slope : 0.5 * slope;
            }
        }
        double rel = (analytic - numeric).cwiseAbs().maxCoeff() /
                     std::max(analytic.cwiseAbs().maxCoeff(), 1e-12);
        CHECK(rel <= 1e-5);
    }

    CHECK_THROWS_AS(empirical_risk_gradient(data, G, LossKind::zero_one),
                    std::invalid_argument);
}

TEST_CASE("hinge subgradient at margin exactly one is zero") {
    Dataset data;
    data.n = 3;
    data.observations.emplace_back(Triplet(0, 1, 2), 1);
    // G_jj - 2 G_ij - G_kk + 2 G_ik = 2 - 0 - 1 + 0 = 1, so y * margin = 1
    Eigen::MatrixXd G = Eigen::Vector3d(0, 2, 1).asDiagonal();
    Eigen::MatrixXd grad = empirical_risk_gradient(data, G, LossKind::hinge);
    CHECK(grad.cwiseAbs().maxCoeff() == 0.0);

    // just inside the margin the term is active
    G(1, 1) = 2.0 - 1e-9;
    CHECK(empirical_risk_gradient(data, G, LossKind::hinge).cwiseAbs().maxCoeff() ==
          doctest::Approx(1.0));
}

TEST_CASE("gradient support is confined to observed index blocks") {
    Dataset data;
    data.n = 8;
    data.observations.emplace_back(Triplet(0, 1, 2), -1);
    data.observations.emplace_back(Triplet(3, 1, 2), 1);
    Eigen::MatrixXd grad =
        empirical_risk_gradient(data, Eigen::MatrixXd::Zero(8, 8), LossKind::logistic);
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            bool touched = (r <= 3 && c <= 3); // union of {0,1,2} and {1,2,3} blocks
            if (!touched) CHECK(grad(r, c) == 0.0);
        }
    }
}

TEST_CASE("gradient step at the truth does not increase risk") {
    Rng rng = make_rng(33);
    Eigen::MatrixXd G_star = random_centered_gram(8, 2, rng);
    Dataset data = random_dataset(8, 200, G_star, step_link(), rng);
    Eigen::MatrixXd grad = empirical_risk_gradient(data, G_star, LossKind::logistic);
    double base = empirical_risk(data, G_star, LossKind::logistic);
    CHECK(empirical_risk(data, G_star - 1e-3 * grad, LossKind::logistic) <= base + 1e-12);
}

TEST_CASE("true_risk") {
    Rng rng = make_rng(34);
    const int n = 6;
    Eigen::MatrixXd G_star = random_centered_gram(n, 2, rng);
    LinkFunction link = logistic_link();

    // the empirical risk is an unbiased estimator of the population risk
    double truth = true_risk(G_star, G_star, link, LossKind::logistic);
    const int resamples = 10000;
    double mean = 0.0, mean_sq = 0.0;
    for (int rep = 0; rep < resamples; ++rep) {
        Dataset data = random_dataset(n, 30, G_star, link, rng);
        double value = empirical_risk(data, G_star, LossKind::logistic);
        mean += value;
        mean_sq += value * value;
    }
    mean /= resamples;
    mean_sq /= resamples;
    double std_of_mean = std::sqrt((mean_sq - mean * mean) / resamples);
    CHECK(std::abs(mean - truth) < 3.0 * std_of_mean);

    // at the truth the zero-one population risk is the Bayes error
    CHECK(true_risk(G_star, G_star, link, LossKind::zero_one) ==
          doctest::Approx(bayes_error(G_star, link)).epsilon(1e-12));

    // noiseless labels are perfectly predicted by the truth
    CHECK(true_risk(G_star, G_star, step_link(), LossKind::zero_one) == 0.0);
}

TEST_CASE("bayes_error") {
    Rng rng = make_rng(35);
    Eigen::MatrixXd G_star = random_centered_gram(6, 2, rng);

    LinkFunction coin{"coin", [](double) { return 0.5; }, [](double) { return 0.0; },
                      [](double) { return 0.5; }};
    CHECK(bayes_error(G_star, coin) == doctest::Approx(0.5));
    CHECK(bayes_error(G_star, step_link()) == 0.0);

    Rng rng16 = make_rng(36);
    Eigen::MatrixXd G16 =
        random_centered_gram(16, 2, rng16, 1.0 / std::sqrt(4.0)); // N(0, I/(2d)), d = 2
    double value = bayes_error(G16, logistic_link());
    CHECK(value > 0.0);
    CHECK(value < 0.5);
    Rng rng16b = make_rng(36);
    CHECK(bayes_error(random_centered_gram(16, 2, rng16b, 0.5), logistic_link()) ==
          doctest::Approx(value)); // reproducible under the seed
}

TEST_CASE("nll_loss") {
    LinkFunction link = logistic_link();
    CHECK(nll_loss(link, -1, 0.0) == doctest::Approx(std::log(2.0)));
    CHECK(nll_loss(link, 1, 0.0) == doctest::Approx(std::log(2.0)));
    CHECK(nll_loss(link, -1, -3.0) == doctest::Approx(std::log(1.0 + std::exp(-3.0))));

    // the induced loss is exactly the margin loss for the logistic link
    for (int y : {-1, 1}) {
        for (double m = -30.0; m <= 30.0; m += 0.5) {
            CHECK(std::abs(nll_loss(link, y, m) - loss_value(LossKind::logistic, y * m)) <=
                  1e-12);
        }
    }
    CHECK_THROWS_AS(nll_loss(link, 0, 1.0), std::invalid_argument);
}

TEST_CASE("excess_risk_gap") {
    Rng rng = make_rng(37);
    const double gamma = 1.0;
    LinkFunction link = logistic_link();
    ConstraintSet constraints{6.0, gamma};

    Eigen::MatrixXd G_star = scale_into_box(random_centered_gram(8, 2, rng), gamma);
    ExcessRiskGap same = excess_risk_gap(G_star, G_star, link, constraints);
    CHECK(same.lhs == 0.0);
    CHECK(same.rhs == 0.0); // identical inputs make both risk sums identical

    for (int rep = 0; rep < 25; ++rep) {
        Eigen::MatrixXd G = scale_into_box(random_centered_gram(8, 1 + rep % 3, rng), gamma);
        ExcessRiskGap gap = excess_risk_gap(G, G_star, link, constraints);
        CHECK(gap.lhs <= gap.rhs + 1e-12);
        CHECK(gap.rhs >= -1e-12); // KL divergence is nonnegative

        // the closed form lower-bounds the sampled slope magnitude
        CHECK(gap.c_f <= min_abs_link_slope(G, G_star, link) + 1e-15);
    }
}

TEST_CASE("prediction_error") {
    Rng rng = make_rng(38);
    Eigen::MatrixXd G_star = random_centered_gram(8, 2, rng);

    Dataset clean = random_dataset(8, 2000, G_star, step_link(), rng);
    CHECK(prediction_error(G_star, clean) == 0.0);

    Dataset noisy = random_dataset(8, 10000, G_star, logistic_link(), rng);
    double coin_err = prediction_error(Eigen::MatrixXd::Zero(8, 8), noisy);
    CHECK(coin_err == 1.0); // zero margins all count as errors by the tie rule

    double bayes = bayes_error(G_star, logistic_link());
    double err = prediction_error(G_star, noisy);
    double sigma = std::sqrt(bayes * (1.0 - bayes) / 10000.0);
    CHECK(std::abs(err - bayes) < 3.0 * sigma + 0.01);

    CHECK_THROWS_AS(prediction_error(G_star, Dataset{8, {}}), std::domain_error);
}

TEST_CASE("margins stay inside the six-gamma box") {
    Rng rng = make_rng(39);
    const double gamma = 0.7;
    for (int rep = 0; rep < 10; ++rep) {
        Eigen::MatrixXd G = scale_into_box(random_symmetric(7, rng), gamma);
        for (const Triplet& t : enumerate_triplets(7)) {
            CHECK(std::abs(lt_apply(t, G)) <= 6.0 * gamma + 1e-12);
        }
    }
}
