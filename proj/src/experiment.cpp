/// @file  experiment.cpp

#include <ordembed/experiment.hpp>

#include <ordembed/risk.hpp>
#include <ordembed/triplet.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <stdexcept>
#include <thread>

namespace ordembed {

namespace {

constexpr std::uint64_t stream_tag(SeedStream stream) {
    return static_cast<std::uint64_t>(stream);
}

Dataset draw_dataset(int n, std::int64_t count, const Eigen::MatrixXd& G_star,
                     const LinkFunction& link, Rng& rng) {
    Dataset data;
    data.n = n;
    data.observations.reserve(static_cast<std::size_t>(count));
    for (const Triplet& t : sample_triplets(n, count, rng)) {
        data.observations.push_back(observe(t, G_star, link, rng));
    }
    return data;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    double pos = q * static_cast<double>(values.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    auto hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

int worker_count(int requested) {
    int workers = requested > 0 ? requested
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (const char* cap = std::getenv("ORDEMBED_WORKERS")) {
        int limit = std::atoi(cap);
        if (limit >= 1) workers = std::min(workers, limit);
    }
    return workers;
}

} // namespace

std::string solver_name(SolverKind kind) {
    switch (kind) {
        case SolverKind::rank_d_pgd: return "rank_d_pgd";
        case SolverKind::nuclear_pgd: return "nuclear_pgd";
        case SolverKind::nuclear_pgd_debiased: return "nuclear_pgd_debiased";
        case SolverKind::factored_gd: return "factored_gd";
    }
    throw std::invalid_argument("unknown solver kind");
}

SolverKind solver_from_name(const std::string& name) {
    if (name == "rank_d_pgd") return SolverKind::rank_d_pgd;
    if (name == "nuclear_pgd") return SolverKind::nuclear_pgd;
    if (name == "nuclear_pgd_debiased") return SolverKind::nuclear_pgd_debiased;
    if (name == "factored_gd") return SolverKind::factored_gd;
    throw std::invalid_argument("unknown solver: " + name);
}

Embedding generate_points(int n, int d, Rng& rng) {
    if (n < 1 || d < 1) throw std::domain_error("need n >= 1 and d >= 1");
    if (n < d + 3) {
        std::cerr << "generate_points: n = " << n << " <= d + 2 = " << d + 2
                  << "; kernel recovery is not identifiable at this size\n";
    }
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0 * d));
    Eigen::MatrixXd pts(n, d);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) pts(r, c) = gauss(rng);
    return center_embedding(pts);
}

Eigen::MatrixXd latent_gram(const TrialSpec& spec) {
    Rng rng = make_rng(derive_seed(spec.points_seed, stream_tag(SeedStream::points)));
    Embedding points = generate_points(spec.n, spec.d, rng);
    return spec.gram_scale * gram_from_embedding(points);
}

TrialResult run_trial(const TrialSpec& spec) {
    TrialResult row;
    row.solver = solver_name(spec.solver);
    row.sample_count = spec.sample_count;
    row.trial = spec.trial;
    row.seed = spec.data_seed;

    auto start = std::chrono::steady_clock::now();
    try {
        LinkFunction link = link_from_name(spec.link);
        Eigen::MatrixXd G_star = latent_gram(spec);

        Rng train_rng = make_rng(derive_seed(spec.data_seed, stream_tag(SeedStream::train)));
        Dataset train = draw_dataset(spec.n, spec.sample_count, G_star, link, train_rng);
        Rng holdout_rng = make_rng(derive_seed(spec.data_seed, stream_tag(SeedStream::holdout)));
        Dataset holdout =
            draw_dataset(spec.n, spec.holdout_size, G_star, link, holdout_rng);

        SolverConfig solver_config = spec.solver_config;
        solver_config.seed = derive_seed(spec.data_seed, stream_tag(SeedStream::solver));

        SolveResult solved;
        switch (spec.solver) {
            case SolverKind::rank_d_pgd:
                solved = pgd(train, rank_projector(spec.d), solver_config);
                break;
            case SolverKind::nuclear_pgd:
                solved = pgd(train, nuclear_projector(G_star.trace()), solver_config);
                break;
            case SolverKind::nuclear_pgd_debiased: {
                SolveResult biased =
                    pgd(train, nuclear_projector(G_star.trace()), solver_config);
                solved = debias(biased.G_hat, spec.d, train, solver_config);
                break;
            }
            case SolverKind::factored_gd:
                solved = factored_gd(train, spec.d, solver_config);
                break;
        }

        Eigen::MatrixXd G_hat = solved.G_hat;
        if (spec.kernel_correct) {
            Eigen::MatrixXd D_hat = distance_from_gram(G_hat);
            G_hat = recover_gram(centered_component(D_hat).C).matrix;
        }

        row.prediction_error = prediction_error(G_hat, holdout);
        row.gram_frobenius_error = (G_hat - G_star).norm();
        double scale = G_star.norm();
        row.relative_gram_error =
            scale > 0.0 ? row.gram_frobenius_error / scale : row.gram_frobenius_error;
    } catch (const std::exception& err) {
        row.status = std::string("failed: ") + err.what();
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

SweepResult run_sweep(const ExperimentConfig& config) {
    if (config.sample_grid.empty() || config.solvers.empty() || config.trials < 1) {
        throw std::invalid_argument("sweep needs solvers, a sample grid, and trials");
    }
    if (!std::is_sorted(config.sample_grid.begin(), config.sample_grid.end()) ||
        std::adjacent_find(config.sample_grid.begin(), config.sample_grid.end()) !=
            config.sample_grid.end()) {
        throw std::invalid_argument("sample grid must be strictly increasing");
    }

    std::vector<TrialSpec> specs;
    for (SolverKind solver : config.solvers) {
        for (std::size_t g = 0; g < config.sample_grid.size(); ++g) {
            for (int trial = 0; trial < config.trials; ++trial) {
                TrialSpec spec;
                spec.n = config.n;
                spec.d = config.d;
                spec.gram_scale = config.gram_scale;
                spec.link = config.link;
                spec.solver = solver;
                spec.sample_count = config.sample_grid[g];
                spec.holdout_size = config.holdout_size;
                spec.kernel_correct = config.kernel_correct;
                spec.points_seed = config.seed;
                // identical data for every solver within a (grid, trial) cell
                spec.data_seed = derive_seed(config.seed,
                                             1000003ULL * (g + 1) + static_cast<std::uint64_t>(trial));
                spec.trial = trial;
                spec.solver_config = config.solver;
                specs.push_back(std::move(spec));
            }
        }
    }

    SweepResult result;
    result.rows.resize(specs.size());
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        while (true) {
            std::size_t idx = cursor.fetch_add(1);
            if (idx >= specs.size()) return;
            result.rows[idx] = run_trial(specs[idx]);
        }
    };
    int workers = std::min<int>(worker_count(config.workers),
                                static_cast<int>(specs.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& thread : pool) thread.join();
    }

    result.summary = summarize(result.rows);
    return result;
}

std::vector<SweepSummaryRow> summarize(const std::vector<TrialResult>& rows) {
    std::map<std::pair<std::string, std::int64_t>, std::vector<const TrialResult*>> cells;
    for (const auto& row : rows) {
        cells[{row.solver, row.sample_count}].push_back(&row);
    }
    std::vector<SweepSummaryRow> summary;
    for (const auto& [key, cell] : cells) {
        SweepSummaryRow out;
        out.solver = key.first;
        out.sample_count = key.second;
        out.trials = static_cast<int>(cell.size());
        std::vector<double> pred, frob, rel;
        for (const TrialResult* row : cell) {
            if (!row->ok()) {
                ++out.failures;
                continue;
            }
            pred.push_back(row->prediction_error);
            frob.push_back(row->gram_frobenius_error);
            rel.push_back(row->relative_gram_error);
        }
        out.pred_err_q1 = quantile(pred, 0.25);
        out.pred_err_median = quantile(pred, 0.5);
        out.pred_err_q3 = quantile(pred, 0.75);
        out.frob_err_q1 = quantile(frob, 0.25);
        out.frob_err_median = quantile(frob, 0.5);
        out.frob_err_q3 = quantile(frob, 0.75);
        out.rel_err_q1 = quantile(rel, 0.25);
        out.rel_err_median = quantile(rel, 0.5);
        out.rel_err_q3 = quantile(rel, 0.75);
        summary.push_back(std::move(out));
    }
    return summary;
}

} // namespace ordembed
