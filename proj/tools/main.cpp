/// @file  main.cpp
/// @brief Command-line harness: synthetic data generation, fitting from
///        triplet files, holdout scoring, the spectral oracle suite, and
///        full experiment sweeps.

#include <ordembed/edm.hpp>
#include <ordembed/experiment.hpp>
#include <ordembed/io.hpp>
#include <ordembed/oracles.hpp>
#include <ordembed/risk.hpp>
#include <ordembed/solvers.hpp>
#include <ordembed/triplet.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace ordembed;
using nlohmann::json;

namespace {

Dataset draw_labelled(int n, std::int64_t count, const Eigen::MatrixXd& G_star,
                      const LinkFunction& link, Rng& rng) {
    Dataset data;
    data.n = n;
    data.observations.reserve(static_cast<std::size_t>(count));
    for (const Triplet& t : sample_triplets(n, count, rng)) {
        data.observations.push_back(observe(t, G_star, link, rng));
    }
    return data;
}

struct GenArgs {
    int n = 32;
    int d = 2;
    std::uint64_t seed = 0;
    double alpha = 1.0;
    std::string link = "logistic";
    std::int64_t samples = 0;
    std::int64_t holdout = 0;
    std::string out = "ordembed";
};

int run_gen(const GenArgs& args) {
    Rng points_rng =
        make_rng(derive_seed(args.seed, static_cast<std::uint64_t>(SeedStream::points)));
    Embedding points = generate_points(args.n, args.d, points_rng);
    Eigen::MatrixXd G_star = args.alpha * gram_from_embedding(points);

    io::save_matrix(args.out + "_points.json", points.points, "points", args.d);
    io::save_matrix(args.out + "_gram.json", G_star, "gram", args.d);

    LinkFunction link = link_from_name(args.link);
    json summary;
    summary["n"] = args.n;
    summary["d"] = args.d;
    summary["seed"] = args.seed;
    summary["alpha"] = args.alpha;
    summary["points"] = args.out + "_points.json";
    summary["gram"] = args.out + "_gram.json";
    if (args.samples > 0) {
        Rng rng =
            make_rng(derive_seed(args.seed, static_cast<std::uint64_t>(SeedStream::train)));
        io::save_triplets(args.out + "_train.csv",
                          draw_labelled(args.n, args.samples, G_star, link, rng));
        summary["train"] = args.out + "_train.csv";
        summary["train_samples"] = args.samples;
    }
    if (args.holdout > 0) {
        Rng rng = make_rng(
            derive_seed(args.seed, static_cast<std::uint64_t>(SeedStream::holdout)));
        io::save_triplets(args.out + "_holdout.csv",
                          draw_labelled(args.n, args.holdout, G_star, link, rng));
        summary["holdout"] = args.out + "_holdout.csv";
        summary["holdout_samples"] = args.holdout;
    }
    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct EmbedArgs {
    std::string triplets;
    int n = 0;
    int d = 2;
    std::string solver = "rank_d_pgd";
    double lambda = 0.0;
    double gamma = 0.0;
    bool kernel_correct = false;
    int max_iters = 2000;
    double rel_tol = 1e-6;
    std::uint64_t seed = 0;
    std::string out;
};

int run_embed(const EmbedArgs& args) {
    Dataset data = io::load_triplets(args.triplets, args.n);
    if (data.n < 3) throw std::runtime_error("dataset needs at least three items");

    SolverConfig config;
    config.max_iters = args.max_iters;
    config.rel_tol = args.rel_tol;
    config.seed = args.seed;

    SolverKind kind = solver_from_name(args.solver);
    double lambda = args.lambda;
    if (lambda <= 0.0 &&
        (kind == SolverKind::nuclear_pgd || kind == SolverKind::nuclear_pgd_debiased)) {
        if (args.gamma <= 0.0) {
            throw std::runtime_error(
                "nuclear solvers need --lambda, or --gamma to derive "
                "lambda = sqrt(d) * n * gamma");
        }
        lambda = std::sqrt(static_cast<double>(args.d)) * data.n * args.gamma;
    }

    SolveResult result;
    switch (kind) {
        case SolverKind::rank_d_pgd:
            result = pgd(data, rank_projector(args.d), config);
            break;
        case SolverKind::nuclear_pgd:
            result = pgd(data, nuclear_projector(lambda), config);
            break;
        case SolverKind::nuclear_pgd_debiased: {
            SolveResult biased = pgd(data, nuclear_projector(lambda), config);
            result = debias(biased.G_hat, args.d, data, config);
            break;
        }
        case SolverKind::factored_gd:
            result = factored_gd(data, args.d, config);
            break;
    }

    Eigen::MatrixXd G_hat = result.G_hat;
    if (args.kernel_correct) {
        G_hat = recover_gram(centered_component(distance_from_gram(G_hat)).C).matrix;
    }
    io::save_matrix(args.out, G_hat, "gram", args.d);

    json summary;
    summary["solver"] = args.solver;
    summary["n"] = data.n;
    summary["d"] = args.d;
    summary["observations"] = data.observations.size();
    summary["iterations"] = result.iterations;
    summary["converged"] = result.converged;
    summary["final_risk"] = result.objective_trace.back();
    summary["kernel_correct"] = args.kernel_correct;
    summary["out"] = args.out;
    if (lambda > 0.0) summary["lambda"] = lambda;
    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct EvalArgs {
    std::string gram;
    std::string triplets;
    std::string ref_gram;
};

int run_eval(const EvalArgs& args) {
    io::MatrixFile fitted = io::load_matrix(args.gram);
    if (fitted.kind != "gram") throw std::runtime_error("--gram must be a gram file");
    Dataset holdout = io::load_triplets(args.triplets, fitted.n);

    json summary;
    summary["gram"] = args.gram;
    summary["observations"] = holdout.observations.size();
    summary["prediction_error"] = prediction_error(fitted.matrix, holdout);
    if (!args.ref_gram.empty()) {
        io::MatrixFile ref = io::load_matrix(args.ref_gram);
        if (ref.kind != "gram" || ref.n != fitted.n) {
            throw std::runtime_error("--ref-gram must be a gram file of matching size");
        }
        double frob = (fitted.matrix - ref.matrix).norm();
        summary["frob_err"] = frob;
        double scale = ref.matrix.norm();
        summary["rel_frob_err"] = scale > 0.0 ? frob / scale : frob;
    }
    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct OracleArgs {
    std::string json_out;
    int trials = 50;
    std::uint64_t seed = 0;
};

int run_oracle(const OracleArgs& args) {
    bool all_pass = true;
    json report;

    auto emit = [&](const std::string& name, bool pass, const std::string& detail) {
        std::printf("%-4s %-44s %s\n", pass ? "PASS" : "FAIL", name.c_str(),
                    detail.c_str());
        json entry;
        entry["check"] = name;
        entry["pass"] = pass;
        entry["detail"] = detail;
        report["checks"].push_back(entry);
        all_pass = all_pass && pass;
    };

    double worst_norm = 0.0;
    for (int n = 3; n <= 10; ++n) {
        worst_norm = std::max(worst_norm, oracles::lt_norm_check(n).max_abs_deviation);
    }
    emit("operator norm = sqrt(3), n = 3..10", worst_norm <= 1e-10,
         "max deviation " + std::to_string(worst_norm));

    double worst_mean = 0.0;
    for (int n = 3; n <= 10; ++n) {
        auto mean = oracles::mean_lt_squared(n);
        worst_mean = std::max({worst_mean, mean.norm_deviation, mean.max_entry_deviation});
    }
    emit("mean squared operator closed form, n = 3..10", worst_mean <= 1e-10,
         "max deviation " + std::to_string(worst_mean));

    bool spectrum_ok = true;
    double worst_residual = 0.0;
    for (int n = 4; n <= 9; ++n) {
        auto spec_report = oracles::delta_gram_spectrum(n);
        spectrum_ok = spectrum_ok && spec_report.ok;
        worst_residual = std::max(worst_residual, spec_report.max_eigenvector_residual);
    }
    emit("normal matrix spectrum {0, n, 2(n-1)}, n = 4..9",
         spectrum_ok && worst_residual <= 1e-8,
         "max eigenvector residual " + std::to_string(worst_residual));

    Rng rng = make_rng(args.seed == 0 ? 12345 : args.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto sample_edm = [&](int n, int d) {
        Eigen::MatrixXd pts(n, d);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < d; ++c) pts(r, c) = gauss(rng);
        return distance_from_gram(gram_from_embedding(center_embedding(pts)));
    };

    double worst_slack = 0.0;
    for (int rep = 0; rep < args.trials; ++rep) {
        auto rip = oracles::rip_check(sample_edm(8, 1 + rep % 3),
                                      sample_edm(8, 1 + (rep + 1) % 3));
        worst_slack = std::min({worst_slack, rip.lower_slack, rip.upper_slack});
    }
    emit("restricted isometry sandwich, n = 8", worst_slack >= -1e-9,
         "most negative slack " + std::to_string(worst_slack));

    bool census_ok = true;
    for (int rep = 0; rep < args.trials; ++rep) {
        int d = 1 + rep % 3;
        auto validity = edm_validity(sample_edm(8, d));
        census_ok = census_ok && validity.positive_count == 1 &&
                    validity.zero_count == 8 - (d + 2) &&
                    validity.negative_count == d + 1 && validity.nsd_on_ones_perp;
    }
    emit("sign census (1, n-r, r-1) and NSD restriction", census_ok,
         std::to_string(args.trials) + " random configurations");

    bool identity_ok = true;
    double worst_identity = 0.0;
    for (int rep = 0; rep < args.trials; ++rep) {
        Eigen::MatrixXd D = sample_edm(10, 1 + rep % 3);
        auto part = centered_component(D);
        double lambda2 = second_largest_eigenvalue(part.C);
        double gap = std::abs(lambda2 - part.sigma) / std::max(part.sigma, 1.0);
        worst_identity = std::max(worst_identity, gap);
        identity_ok = identity_ok && gap <= 1e-8;
        identity_ok =
            identity_ok && (recover_distance(part.C).matrix - D).norm() <= 1e-8 * D.norm();
    }
    emit("kernel coefficient identity and recovery, n = 10", identity_ok,
         "worst relative identity gap " + std::to_string(worst_identity));

    Rng study_rng = make_rng(derive_seed(args.seed == 0 ? 12345 : args.seed, 9));
    auto rows = oracles::isometry_ratio_study({8, 16, 32}, 2, args.trials, study_rng);
    std::printf("\nisometry constants over random pairs (d = 2, %d pairs per n)\n",
                args.trials);
    std::printf("%4s %10s %10s %8s %12s %12s %10s\n", "n", "c1_raw", "c2_raw", "ratio",
                "c1_centered", "c2_centered", "ratio");
    for (const auto& row : rows) {
        std::printf("%4d %10.4f %10.4f %8.3f %12.4f %12.4f %10.3f\n", row.n, row.c1_raw,
                    row.c2_raw, row.ratio_raw, row.c1_centered, row.c2_centered,
                    row.ratio_centered);
        json entry;
        entry["n"] = row.n;
        entry["pairs"] = row.pairs_used;
        entry["c1_raw"] = row.c1_raw;
        entry["c2_raw"] = row.c2_raw;
        entry["ratio_raw"] = row.ratio_raw;
        entry["c1_centered"] = row.c1_centered;
        entry["c2_centered"] = row.c2_centered;
        entry["ratio_centered"] = row.ratio_centered;
        report["isometry_study"].push_back(entry);
    }

    report["pass"] = all_pass;
    if (!args.json_out.empty()) {
        std::ofstream out(args.json_out);
        if (!out) throw std::runtime_error("cannot write " + args.json_out);
        out << report.dump(2) << '\n';
    }
    return all_pass ? 0 : 1;
}

struct SweepArgs {
    ExperimentConfig config;
    std::vector<std::string> solver_names = {"rank_d_pgd", "nuclear_pgd",
                                             "nuclear_pgd_debiased"};
    std::string out = "results.csv";
    std::string summary_out;
};

int run_sweep_cmd(SweepArgs& args) {
    for (const std::string& name : args.solver_names) {
        args.config.solvers.push_back(solver_from_name(name));
    }
    SweepResult sweep = run_sweep(args.config);
    io::save_results(args.out, sweep.rows);
    if (!args.summary_out.empty()) io::save_summary(args.summary_out, sweep.summary);

    int failures = 0;
    for (const auto& row : sweep.rows) {
        if (!row.ok()) ++failures;
    }
    std::printf("%-22s %8s %7s %9s %9s %9s\n", "solver", "samples", "trials",
                "pred_med", "frob_med", "rel_med");
    for (const auto& cell : sweep.summary) {
        std::printf("%-22s %8lld %7d %9.4f %9.4f %9.4f\n", cell.solver.c_str(),
                    static_cast<long long>(cell.sample_count), cell.trials,
                    cell.pred_err_median, cell.frob_err_median, cell.rel_err_median);
    }
    if (failures > 0) {
        std::fprintf(stderr, "{\"error\": \"%d trials failed; see %s\"}\n", failures,
                     args.out.c_str());
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ordinal embedding from noisy triplet comparisons"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "config file: key = value lines under a [subcommand] section; "
                   "flags override");

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate synthetic points and datasets");
    gen->add_option("--n", gen_args.n, "item count")->check(CLI::PositiveNumber);
    gen->add_option("--d", gen_args.d, "dimension")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_args.seed, "master seed");
    gen->add_option("--alpha", gen_args.alpha, "scale on the true Gram matrix");
    gen->add_option("--link", gen_args.link, "label noise model (logistic|step)");
    gen->add_option("--samples", gen_args.samples, "training observations to draw");
    gen->add_option("--holdout", gen_args.holdout, "holdout observations to draw");
    gen->add_option("--out", gen_args.out, "output path prefix");

    EmbedArgs embed_args;
    CLI::App* embed = app.add_subcommand("embed", "fit a Gram matrix from a triplet file");
    embed->add_option("--triplets", embed_args.triplets, "input triplet csv")->required();
    embed->add_option("--n", embed_args.n, "item count (inferred when omitted)");
    embed->add_option("--d", embed_args.d, "target dimension")->check(CLI::PositiveNumber);
    embed->add_option("--solver", embed_args.solver,
                      "rank_d_pgd|nuclear_pgd|nuclear_pgd_debiased|factored_gd");
    embed->add_option("--lambda", embed_args.lambda, "nuclear norm radius");
    embed->add_option("--gamma", embed_args.gamma,
                      "entrywise bound; lambda = sqrt(d) n gamma when --lambda unset");
    embed->add_flag("--kernel-correct", embed_args.kernel_correct,
                    "apply the kernel-correction recovery to the fit");
    embed->add_option("--max-iters", embed_args.max_iters, "iteration cap");
    embed->add_option("--rel-tol", embed_args.rel_tol, "relative decrease stop");
    embed->add_option("--seed", embed_args.seed, "solver seed (factored_gd)");
    embed->add_option("--out", embed_args.out, "output gram json")->required();

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "score a saved Gram matrix on a holdout");
    eval->add_option("--gram", eval_args.gram, "fitted gram json")->required();
    eval->add_option("--triplets", eval_args.triplets, "holdout triplet csv")->required();
    eval->add_option("--ref-gram", eval_args.ref_gram, "reference gram json");

    OracleArgs oracle_args;
    CLI::App* oracle = app.add_subcommand("oracle", "run the spectral oracle suite");
    oracle->add_option("--json", oracle_args.json_out, "machine-readable report path");
    oracle->add_option("--trials", oracle_args.trials, "random trials per sampled check")
        ->check(CLI::PositiveNumber);
    oracle->add_option("--seed", oracle_args.seed, "sampling seed");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "run the full experiment protocol");
    sweep->add_option("--n", sweep_args.config.n, "item count")->check(CLI::PositiveNumber);
    sweep->add_option("--d", sweep_args.config.d, "dimension")->check(CLI::PositiveNumber);
    sweep->add_option("--grid", sweep_args.config.sample_grid,
                      "sample sizes (comma separated, strictly increasing)")
        ->delimiter(',')
        ->required();
    sweep->add_option("--trials", sweep_args.config.trials, "trials per grid point");
    sweep->add_option("--link", sweep_args.config.link, "label noise model");
    sweep->add_option("--solvers", sweep_args.solver_names, "solver subset")
        ->delimiter(',');
    sweep->add_option("--holdout", sweep_args.config.holdout_size, "holdout size");
    sweep->add_option("--seed", sweep_args.config.seed, "master seed");
    sweep->add_option("--alpha", sweep_args.config.gram_scale, "scale on the Gram matrix");
    sweep->add_flag("--kernel-correct", sweep_args.config.kernel_correct,
                    "kernel-correction post-processing");
    sweep->add_option("--workers", sweep_args.config.workers,
                      "worker threads (0 = hardware, capped by ORDEMBED_WORKERS)");
    sweep->add_option("--max-iters", sweep_args.config.solver.max_iters, "iteration cap");
    sweep->add_option("--rel-tol", sweep_args.config.solver.rel_tol,
                      "relative decrease stop");
    sweep->add_option("--out", sweep_args.out, "per-trial results csv");
    sweep->add_option("--summary", sweep_args.summary_out, "summary csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(gen_args);
        if (embed->parsed()) return run_embed(embed_args);
        if (eval->parsed()) return run_eval(eval_args);
        if (oracle->parsed()) return run_oracle(oracle_args);
        if (sweep->parsed()) return run_sweep_cmd(sweep_args);
    } catch (const std::exception& err) {
        json failure;
        failure["error"] = err.what();
        std::cerr << failure.dump() << '\n';
        return 1;
    }
    return 0;
}
