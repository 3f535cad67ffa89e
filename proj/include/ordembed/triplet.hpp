/// @file  triplet.hpp
/// @brief Triplet index space, the comparison operators L_t / Delta_t,
///        uniform sampling, link functions, and the noisy label simulator.

#pragma once

#include <ordembed/rng.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ordembed {

/// A distance comparison query "is item i closer to item j or to item k?".
/// The canonical form orders j < k; constructors accept any distinct (i,j,k)
/// and canonicalize by swapping j and k.
struct Triplet {
    int i;
    int j;
    int k;

    Triplet(int i_, int j_, int k_);

    friend bool operator==(const Triplet& a, const Triplet& b) {
        return a.i == b.i && a.j == b.j && a.k == b.k;
    }
};

/// A triplet query together with its observed +-1 answer. Labels refer to the
/// canonical orientation (j < k): y = -1 is the likely answer when j is the
/// closer item.
struct TripletObservation {
    Triplet triplet;
    int y;

    TripletObservation(Triplet t, int label);
};

/// Maps a margin D_ij - D_ik to the probability of observing y = -1.
/// Any link must satisfy f(0) = 1/2 and be (weakly) decreasing: the more
/// j wins the comparison, the likelier the y = -1 answer. complement is
/// 1 - f evaluated without cancellation; leave it empty to fall back to
/// 1 - value(x).
struct LinkFunction {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::function<double(double)> complement;

    double one_minus(double x) const {
        return complement ? complement(x) : 1.0 - value(x);
    }
};

/// Logistic link f(x) = 1 / (1 + e^x) with derivative -e^x / (1 + e^x)^2.
LinkFunction logistic_link();

/// Deterministic noiseless limit: f(x) = 1 for x < 0, 1/2 at 0, 0 for x > 0.
/// Weakly rather than strictly decreasing; labels carry no noise.
LinkFunction step_link();

LinkFunction link_from_name(const std::string& name);

/// Number of canonical triplets for n items: n * C(n-1, 2).
std::int64_t triplet_count(int n);

/// All canonical triplets in lexicographic order on (i, j, k). Requires n >= 3.
std::vector<Triplet> enumerate_triplets(int n);

/// <L_t, G> = G_jj - 2 G_ij - G_kk + 2 G_ik, which equals D_ij - D_ik for the
/// distance matrix induced by G.
double lt_apply(const Triplet& t, const Eigen::MatrixXd& G);

/// The comparison operator as an explicit sparse symmetric matrix: six
/// nonzero entries of magnitude 1 on the rows/columns of i, j, k.
Eigen::SparseMatrix<double> lt_matrix(const Triplet& t, int n);

/// Delta_t(D) = D_ij - D_ik.
double delta_apply(const Triplet& t, const Eigen::MatrixXd& D);

/// Stacks <L_t, G> over all canonical triplets in lexicographic order.
Eigen::VectorXd l_vector(const Eigen::MatrixXd& G);

/// m i.i.d. uniform draws from the canonical triplet set, with replacement.
std::vector<Triplet> sample_triplets(int n, std::int64_t m, Rng& rng);

/// Draws a noisy label for t: y = -1 with probability f(<L_t, G_star>).
TripletObservation observe(const Triplet& t, const Eigen::MatrixXd& G_star,
                           const LinkFunction& link, Rng& rng);

} // namespace ordembed
