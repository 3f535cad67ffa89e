/// @file  experiment.hpp
/// @brief Synthetic experiment protocol: point generation, per-trial solves
///        with holdout evaluation, and seeded sweeps over sample sizes.

#pragma once

#include <ordembed/edm.hpp>
#include <ordembed/rng.hpp>
#include <ordembed/solvers.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ordembed {

enum class SolverKind { rank_d_pgd, nuclear_pgd, nuclear_pgd_debiased, factored_gd };

std::string solver_name(SolverKind kind);
SolverKind solver_from_name(const std::string& name);

/// Stream tags for deriving a trial's independent generators from its seeds.
enum class SeedStream : std::uint64_t { points = 1, train = 2, holdout = 3, solver = 4 };

struct ExperimentConfig {
    int n = 64;
    int d = 2;
    std::vector<std::int64_t> sample_grid;
    int trials = 36;
    std::string link = "logistic";
    std::vector<SolverKind> solvers;
    std::int64_t holdout_size = 10000;
    std::uint64_t seed = 0;
    double gram_scale = 1.0; // alpha multiplier on the true Gram matrix
    bool kernel_correct = false;
    SolverConfig solver;
    int workers = 0; // 0: hardware concurrency, capped by ORDEMBED_WORKERS
};

struct TrialResult {
    std::string solver;
    std::int64_t sample_count = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double prediction_error = 0.0;
    double gram_frobenius_error = 0.0;
    double relative_gram_error = 0.0;
    double wall_time_s = 0.0;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

/// One cell of a sweep: everything run_trial needs, fully seeded. The same
/// spec always produces the same row. points_seed is shared across the
/// trials of a sweep (one latent configuration per sweep); data_seed varies
/// per (sample count, trial).
struct TrialSpec {
    int n = 0;
    int d = 0;
    double gram_scale = 1.0;
    std::string link = "logistic";
    SolverKind solver = SolverKind::rank_d_pgd;
    std::int64_t sample_count = 0;
    std::int64_t holdout_size = 10000;
    bool kernel_correct = false;
    std::uint64_t points_seed = 0;
    std::uint64_t data_seed = 0;
    int trial = 0;
    SolverConfig solver_config;
};

/// i.i.d. Gaussian coordinates with variance 1/(2d), then centered.
/// Warns on stderr when n < d + 3 (kernel recovery needs n > d + 2).
Embedding generate_points(int n, int d, Rng& rng);

/// Latent Gram matrix of a trial: gram_scale * (X X^T) for the points drawn
/// from points_seed.
Eigen::MatrixXd latent_gram(const TrialSpec& spec);

/// Runs one solve: draws training and holdout observations from independent
/// streams of data_seed, fits, optionally applies the kernel-correction
/// recovery, and scores against the latent Gram matrix. Solver failures are
/// recorded in the row status, not thrown.
TrialResult run_trial(const TrialSpec& spec);

struct SweepSummaryRow {
    std::string solver;
    std::int64_t sample_count = 0;
    int trials = 0;
    int failures = 0;
    double pred_err_q1 = 0.0, pred_err_median = 0.0, pred_err_q3 = 0.0;
    double frob_err_q1 = 0.0, frob_err_median = 0.0, frob_err_q3 = 0.0;
    double rel_err_q1 = 0.0, rel_err_median = 0.0, rel_err_q3 = 0.0;
};

struct SweepResult {
    std::vector<TrialResult> rows;       // every trial, always persisted
    std::vector<SweepSummaryRow> summary; // medians/quartiles per (solver, |S|)
};

/// Cartesian product of solvers x sample_grid x trials. All solvers of a
/// given (sample count, trial) cell see identical data. Trials run on a
/// worker pool; output order is deterministic.
SweepResult run_sweep(const ExperimentConfig& config);

/// Median/quartile aggregation of per-trial rows (failures counted, their
/// metrics excluded).
std::vector<SweepSummaryRow> summarize(const std::vector<TrialResult>& rows);

} // namespace ordembed
