/// @file  triplet.cpp
/// @brief Triplet operators, sampling, and the observation model.

#include <ordembed/triplet.hpp>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ordembed {

namespace {

void require_index_range(const Triplet& t, Eigen::Index n) {
    if (t.i < 0 || t.j < 0 || t.k < 0 || t.i >= n || t.j >= n || t.k >= n) {
        throw std::out_of_range("triplet index out of range for n = " +
                                std::to_string(n));
    }
}

} // namespace

Triplet::Triplet(int i_, int j_, int k_) : i(i_), j(j_), k(k_) {
    if (i == j || i == k || j == k) {
        throw std::invalid_argument("triplet indices must be distinct");
    }
    if (j > k) std::swap(j, k);
}

TripletObservation::TripletObservation(Triplet t, int label)
    : triplet(t), y(label) {
    if (y != -1 && y != 1) {
        throw std::invalid_argument("observation label must be -1 or +1");
    }
}

LinkFunction logistic_link() {
    return LinkFunction{
        "logistic",
        [](double x) { return 1.0 / (1.0 + std::exp(x)); },
        [](double x) {
            // -e^x / (1+e^x)^2, evaluated as -f(x) f(-x) to avoid overflow
            double p = 1.0 / (1.0 + std::exp(x));
            double q = 1.0 / (1.0 + std::exp(-x));
            return -p * q;
        },
        // 1 - f(x) = 1 / (1 + e^-x), free of cancellation for x << 0
        [](double x) { return 1.0 / (1.0 + std::exp(-x)); }};
}

LinkFunction step_link() {
    return LinkFunction{
        "step",
        [](double x) { return x < 0.0 ? 1.0 : (x > 0.0 ? 0.0 : 0.5); },
        [](double) { return 0.0; },
        [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); }};
}

LinkFunction link_from_name(const std::string& name) {
    if (name == "logistic") return logistic_link();
    if (name == "step" || name == "noiseless") return step_link();
    throw std::invalid_argument("unknown link function: " + name);
}

std::int64_t triplet_count(int n) {
    if (n < 3) throw std::domain_error("triplet_count requires n >= 3");
    std::int64_t m = n;
    return m * ((m - 1) * (m - 2) / 2);
}

std::vector<Triplet> enumerate_triplets(int n) {
    if (n < 3) throw std::domain_error("enumerate_triplets requires n >= 3");
    std::vector<Triplet> out;
    out.reserve(static_cast<std::size_t>(triplet_count(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int k = j + 1; k < n; ++k) {
                if (k == i) continue;
                out.emplace_back(i, j, k);
            }
        }
    }
    return out;
}

double lt_apply(const Triplet& t, const Eigen::MatrixXd& G) {
    require_index_range(t, G.rows());
    return G(t.j, t.j) - 2.0 * G(t.i, t.j) - G(t.k, t.k) + 2.0 * G(t.i, t.k);
}

Eigen::SparseMatrix<double> lt_matrix(const Triplet& t, int n) {
    require_index_range(t, n);
    Eigen::SparseMatrix<double> L(n, n);
    std::vector<Eigen::Triplet<double>> entries{
        {t.j, t.j, 1.0},  {t.k, t.k, -1.0}, {t.i, t.j, -1.0},
        {t.j, t.i, -1.0}, {t.i, t.k, 1.0},  {t.k, t.i, 1.0},
    };
    L.setFromTriplets(entries.begin(), entries.end());
    return L;
}

double delta_apply(const Triplet& t, const Eigen::MatrixXd& D) {
    require_index_range(t, D.rows());
    return D(t.i, t.j) - D(t.i, t.k);
}

Eigen::VectorXd l_vector(const Eigen::MatrixXd& G) {
    const int n = static_cast<int>(G.rows());
    if (n < 3) throw std::domain_error("l_vector requires n >= 3");
    Eigen::VectorXd out(triplet_count(n));
    Eigen::Index idx = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int k = j + 1; k < n; ++k) {
                if (k == i) continue;
                out(idx++) = G(j, j) - 2.0 * G(i, j) - G(k, k) + 2.0 * G(i, k);
            }
        }
    }
    return out;
}

std::vector<Triplet> sample_triplets(int n, std::int64_t m, Rng& rng) {
    if (n < 3) throw std::domain_error("sample_triplets requires n >= 3");
    if (m < 0) throw std::domain_error("sample count must be nonnegative");
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<Triplet> out;
    out.reserve(static_cast<std::size_t>(m));
    for (std::int64_t s = 0; s < m; ++s) {
        int i = pick(rng);
        int j = pick(rng);
        while (j == i) j = pick(rng);
        int k = pick(rng);
        while (k == i || k == j) k = pick(rng);
        out.emplace_back(i, j, k); // constructor canonicalizes j < k
    }
    return out;
}

TripletObservation observe(const Triplet& t, const Eigen::MatrixXd& G_star,
                           const LinkFunction& link, Rng& rng) {
    double p = link.value(lt_apply(t, G_star));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return TripletObservation(t, unit(rng) < p ? -1 : 1);
}

} // namespace ordembed
