#include "qmclab/cli.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmclab/config.hpp"
#include "qmclab/errors.hpp"
#include "qmclab/experiments.hpp"
#include "qmclab/grover_rudolph.hpp"
#include "qmclab/io.hpp"
#include "qmclab/numerics.hpp"
#include "qmclab/quantum_mc.hpp"

namespace fs = std::filesystem;

namespace qmclab::cli {

namespace {

void print_error(int code, const std::string& type, const std::string& message) {
    nlohmann::json j;
    j["code"] = code;
    j["type"] = type;
    j["message"] = message;
    std::cerr << "error: " << j.dump() << '\n';
}

void print_warning(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = kDefaultSeed;
    std::string out_dir = ".";
    int threads = 0;
    bool strict = false;
};

struct DistOpts {
    std::string family = "normal";
    double param1 = 0.0;
    double param2 = 1.0;
    double tail_tol = 1e-9;
    int n = 10;
};

void add_common_options(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path, "key-value config file");
    sub->add_option("--seed", opts.seed, "master seed (default 42; all randomness derives from it)");
    sub->add_option("--out", opts.out_dir, "output directory (created if missing)");
    sub->add_option("--threads", opts.threads, "worker cap; 0 = available parallelism");
    sub->add_flag("--strict", opts.strict, "treat numeric-degeneracy flags as errors");
}

void add_dist_options(CLI::App* sub, DistOpts& opts) {
    sub->add_option("--family", opts.family, "uniform|normal|exponential|logistic");
    sub->add_option("--param1", opts.param1, "normal: mean, exponential: rate, logistic: location, uniform: lo");
    sub->add_option("--param2", opts.param2, "normal: sigma, logistic: scale, uniform: hi");
    sub->add_option("--tail-tol", opts.tail_tol, "truncated tail mass per side, in (0, 0.01]");
    sub->add_option("--n", opts.n, "qubit count; pmf has 2^n points");
}

// Flag beats config file beats built-in default.
void resolve_dist(const CLI::App* sub, const KeyValueConfig& cfg, DistOpts& opts) {
    if (!sub->count("--family") && cfg.has("distribution.family")) {
        opts.family = cfg.get_string("distribution.family");
    }
    if (!sub->count("--param1")) opts.param1 = cfg.get_double("distribution.param1", opts.param1);
    if (!sub->count("--param2")) opts.param2 = cfg.get_double("distribution.param2", opts.param2);
    if (!sub->count("--tail-tol")) {
        opts.tail_tol = cfg.get_double("distribution.tail_tol", opts.tail_tol);
    }
    if (!sub->count("--n")) {
        opts.n = static_cast<int>(cfg.get_int("distribution.n", opts.n));
    }
}

KeyValueConfig load_config(const CommonOpts& opts) {
    if (opts.config_path.empty()) return KeyValueConfig::parse_string("");
    return KeyValueConfig::parse_file(opts.config_path);
}

fs::path ensure_out_dir(const CommonOpts& opts) {
    fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::string dist_label(const DistOpts& d) {
    return "family=" + d.family + ";param1=" + format_double(d.param1) +
           ";param2=" + format_double(d.param2) + ";tail_tol=" + format_double(d.tail_tol) +
           ";n=" + std::to_string(d.n);
}

DiscretizedDistribution make_pmf(const DistOpts& d) {
    const ContinuousDistribution cont =
        truncate(family_from_name(d.family), d.param1, d.param2, d.tail_tol);
    return discretize(cont, d.n);
}

// Degeneracy flags abort the run under --strict, otherwise warn.
int handle_flags(const std::vector<std::string>& flags, bool strict) {
    for (const auto& flag : flags) {
        if (strict) {
            print_error(4, "degeneracy", flag);
            return 4;
        }
        print_warning(flag);
    }
    return 0;
}

int cmd_discretize(const CLI::App* sub, CommonOpts& common, DistOpts& dist) {
    const KeyValueConfig cfg = load_config(common);
    resolve_dist(sub, cfg, dist);
    const fs::path out = ensure_out_dir(common);
    const DiscretizedDistribution disc = make_pmf(dist);
    const std::string path = (out / "pmf.csv").string();
    write_pmf_csv(disc, path);
    std::cout << "wrote " << path << " (" << disc.size() << " rows, mean "
              << format_double(exact_mean(disc)) << ", left mass "
              << format_double(left_mass(disc)) << ")\n";
    return 0;
}

int cmd_prepare(const CLI::App* sub, CommonOpts& common, DistOpts& dist, double epsilon,
                std::uint64_t prep_samples) {
    const KeyValueConfig cfg = load_config(common);
    resolve_dist(sub, cfg, dist);
    if (sub->count("--epsilon") && sub->count("--prep-samples")) {
        throw config_error("choose one of --epsilon and --prep-samples");
    }
    const fs::path out = ensure_out_dir(common);
    const ContinuousDistribution cont =
        truncate(family_from_name(dist.family), dist.param1, dist.param2, dist.tail_tol);
    const AngleSchedule schedule = angles_exact(cont, dist.n);
    write_angles_csv(schedule, (out / "angles.csv").string());

    std::vector<std::string> flags;
    if (!schedule.vanishing_substitutions.empty()) {
        flags.push_back("vanishing-mass substitutions: " +
                        std::to_string(schedule.vanishing_substitutions.size()));
    }

    PreparedState state;
    bool clamped = false;
    if (sub->count("--prep-samples")) {
        const DiscretizedDistribution disc = discretize(cont, dist.n);
        const FirstAngleError err = mc_first_angle(disc, prep_samples, common.seed);
        const PerturbResult res = perturb_first_iteration(disc, err);
        state = res.state;
        clamped = res.clamped;
        std::cout << "sampled epsilon_l = " << format_double(err.epsilon_l) << " from "
                  << prep_samples << " draws\n";
    } else if (sub->count("--epsilon")) {
        const DiscretizedDistribution disc = discretize(cont, dist.n);
        const PerturbResult res =
            perturb_first_iteration(disc, FirstAngleError{epsilon, 0, common.seed});
        state = res.state;
        clamped = res.clamped;
    } else {
        state = build_state(schedule);
    }
    if (clamped) flags.push_back("epsilon clamped to keep the left mass in [0,1]");

    const std::string state_path = (out / "state.csv").string();
    write_state_csv(state, state_path);
    std::cout << "wrote " << (out / "angles.csv").string() << " and " << state_path << "\n";
    return handle_flags(flags, common.strict);
}

int cmd_estimate_classical(const CLI::App* sub, CommonOpts& common, DistOpts& dist,
                           std::uint64_t samples, int reps) {
    const KeyValueConfig cfg = load_config(common);
    resolve_dist(sub, cfg, dist);
    if (!sub->count("--samples")) samples = cfg.get_uint("estimate.samples", samples);
    if (!sub->count("--reps")) reps = static_cast<int>(cfg.get_int("estimate.reps", reps));
    if (reps < 1) throw config_error("--reps must be >= 1");
    const fs::path out = ensure_out_dir(common);
    const DiscretizedDistribution disc = make_pmf(dist);

    std::vector<EstimateRecord> records(static_cast<std::size_t>(reps));
    parallel_for(records.size(), common.threads, [&](std::size_t rep) {
        records[rep] = estimate_mean(disc, samples, derive_seed(common.seed, rep));
    });
    const std::string path = (out / "records.csv").string();
    write_records_csv(records, path);
    std::cout << "wrote " << path << " (" << reps << " runs of " << samples << " samples)\n";
    return 0;
}

int cmd_estimate_quantum(const CLI::App* sub, CommonOpts& common, DistOpts& dist,
                         std::uint64_t budget, std::uint64_t min_shots,
                         std::uint64_t prep_samples, int reps) {
    const KeyValueConfig cfg = load_config(common);
    resolve_dist(sub, cfg, dist);
    if (!sub->count("--budget")) budget = cfg.get_uint("estimate.budget", budget);
    if (!sub->count("--reps")) reps = static_cast<int>(cfg.get_int("estimate.reps", reps));
    if (reps < 1) throw config_error("--reps must be >= 1");
    const fs::path out = ensure_out_dir(common);
    const DiscretizedDistribution disc = make_pmf(dist);
    const double mu = exact_mean(disc);
    const MlaeEstimator estimator(schedule_for_budget(budget, min_shots));
    const bool with_prep_error = sub->count("--prep-samples") > 0;

    std::vector<EstimateRecord> records(static_cast<std::size_t>(reps));
    std::vector<int> degenerate(records.size(), 0);
    std::vector<int> clamped(records.size(), 0);
    parallel_for(records.size(), common.threads, [&](std::size_t rep) {
        const std::uint64_t rep_seed = derive_seed(common.seed, rep);
        MlaeOutcome outcome;
        if (with_prep_error) {
            const FirstAngleError err =
                mc_first_angle(disc, prep_samples, derive_seed(rep_seed, 1));
            const PerturbResult prep = perturb_first_iteration(disc, err);
            outcome = qmc_mean(prep.state, estimator, derive_seed(rep_seed, 2));
            outcome.record.estimator = Estimator::GRPipeline;
            outcome.record.true_value = mu;
            const CostModel model =
                CostModel::for_target(disc.n, 1.0 / std::sqrt(static_cast<double>(prep_samples)));
            outcome.record.cost_units +=
                prep_samples * static_cast<std::uint64_t>(model.ops_per_sample());
            clamped[rep] = prep.clamped ? 1 : 0;
        } else {
            outcome = qmc_mean(encode_exact(disc), estimator, derive_seed(rep_seed, 2));
        }
        outcome.record.seed = rep_seed;
        records[rep] = outcome.record;
        degenerate[rep] = outcome.degenerate_likelihood ? 1 : 0;
    });

    const std::string path = (out / "records.csv").string();
    write_records_csv(records, path);
    std::cout << "wrote " << path << " (" << reps << " runs, "
              << estimator.schedule().query_count() << " queries each)\n";

    std::vector<std::string> flags;
    int degenerate_total = 0;
    int clamp_total = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        degenerate_total += degenerate[i];
        clamp_total += clamped[i];
    }
    if (degenerate_total > 0) {
        flags.push_back("likelihood-degeneracy in " + std::to_string(degenerate_total) + " runs");
    }
    if (clamp_total > 0) {
        flags.push_back("epsilon clamped in " + std::to_string(clamp_total) + " runs");
    }
    return handle_flags(flags, common.strict);
}

int cmd_decompose(const CLI::App* sub, CommonOpts& common, DistOpts& dist,
                  std::uint64_t prep_samples, std::uint64_t budget, int reps) {
    const KeyValueConfig cfg = load_config(common);
    resolve_dist(sub, cfg, dist);
    if (!sub->count("--prep-samples")) {
        prep_samples = cfg.get_uint("decompose.prep_samples", prep_samples);
    }
    if (!sub->count("--budget")) budget = cfg.get_uint("decompose.budget", budget);
    if (!sub->count("--reps")) reps = static_cast<int>(cfg.get_int("decompose.reps", reps));
    const fs::path out = ensure_out_dir(common);
    const DiscretizedDistribution disc = make_pmf(dist);

    DecompositionOptions options;
    options.threads = common.threads;
    const DecompositionResult result = decomposition_check(
        disc, prep_samples, schedule_for_budget(budget), reps, common.seed, options);
    const std::string path = (out / "decompose.json").string();
    write_decomposition_json(result, path);
    std::cout << "wrote " << path << " (lhs " << format_double(result.lhs) << ", rhs "
              << format_double(result.rhs) << ", cross " << format_double(result.cross)
              << ")\n";
    return 0;
}

int cmd_sweep(const CLI::App* sub, CommonOpts& common, DistOpts& dist,
              std::vector<std::string> arms, int reps) {
    const KeyValueConfig cfg = load_config(common);
    resolve_dist(sub, cfg, dist);
    if (!sub->count("--reps")) reps = static_cast<int>(cfg.get_int("sweep.repetitions", reps));
    if (arms.empty()) arms = {"pipeline", "exact"};
    const fs::path out = ensure_out_dir(common);

    SweepConfig sweep;
    sweep.disc = make_pmf(dist);
    if (cfg.has("sweep.targets")) {
        sweep.targets = cfg.get_double_list("sweep.targets");
    } else {
        for (int k = 0; k <= 6; ++k) sweep.targets.push_back(std::pow(10.0, -1.0 - k / 3.0));
    }
    sweep.repetitions = reps;
    sweep.alloc.c_s = cfg.get_double("sweep.c_s", 1.0);
    sweep.alloc.c_q = cfg.get_double("sweep.c_q", 100.0);
    sweep.alloc.min_shots = cfg.get_uint("sweep.min_shots", 20);
    sweep.master_seed = common.seed;
    sweep.threads = common.threads;
    {
        std::string targets_text;
        for (double t : sweep.targets) targets_text += format_double(t) + ",";
        sweep.label = dist_label(dist) + ";targets=" + targets_text +
                      ";reps=" + std::to_string(reps) + ";c_s=" + format_double(sweep.alloc.c_s) +
                      ";c_q=" + format_double(sweep.alloc.c_q) +
                      ";seed=" + std::to_string(common.seed);
    }

    std::vector<std::string> flags;
    for (const auto& arm_text : arms) {
        const Arm arm = arm_from_name(arm_text);
        const ScalingReport report = run_sweep(sweep, arm);
        const std::string csv_path = (out / ("sweep_" + arm_text + ".csv")).string();
        const std::string json_path = (out / ("summary_" + arm_text + ".json")).string();
        write_report_csv(report, csv_path);
        write_report_json(report, json_path);
        std::cout << arm_text << ": slope " << format_double(report.fit.slope) << " ci95 ["
                  << format_double(report.fit.ci_lo) << ", " << format_double(report.fit.ci_hi)
                  << "] -> " << csv_path << "\n";
        for (const auto& flag : report.flags) flags.push_back(arm_text + ": " + flag);
    }
    return handle_flags(flags, common.strict);
}

int cmd_allocate(const CLI::App* sub, CommonOpts& common, DistOpts& dist,
                 std::vector<double> costs, int split_grid, double c1, double eps_ops) {
    const KeyValueConfig cfg = load_config(common);
    resolve_dist(sub, cfg, dist);
    if (costs.empty()) costs = {1e4, 1e5, 1e6, 1e7};
    const fs::path out = ensure_out_dir(common);
    const DiscretizedDistribution disc = make_pmf(dist);
    const double k = half_gap_k(disc);
    const CostModel model = CostModel::for_target(disc.n, eps_ops);

    std::ofstream file((out / "allocate.csv").string(), std::ios::binary);
    if (!file) throw std::runtime_error("cannot open allocate.csv");
    file << "total_cost,n_prep_samples,n_queries,predicted_rmse\n";
    for (double cost : costs) {
        const BudgetSplit split = budget_allocator(cost, disc, k, split_grid, model, c1);
        file << format_double(cost) << ',' << split.n_prep_samples << ',' << split.n_queries
             << ',' << format_double(std::sqrt(split.predicted_mse)) << '\n';
    }
    std::cout << "wrote " << (out / "allocate.csv").string() << " (" << costs.size()
              << " budgets, k " << format_double(k) << ")\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Amplitude-encoded Monte-Carlo scaling laboratory"};
    app.require_subcommand(1);

    CommonOpts common;
    DistOpts dist;

    auto* discretize_cmd = app.add_subcommand(
        "discretize", "write the 2^n-point pmf of a truncated family as CSV");
    add_common_options(discretize_cmd, common);
    add_dist_options(discretize_cmd, dist);

    auto* prepare_cmd = app.add_subcommand(
        "prepare", "write rotation angles and the prepared amplitude state as CSV");
    add_common_options(prepare_cmd, common);
    add_dist_options(prepare_cmd, dist);
    double prepare_epsilon = 0.0;
    std::uint64_t prepare_samples = 10000;
    prepare_cmd->add_option("--epsilon", prepare_epsilon, "inject a fixed first-split error");
    prepare_cmd->add_option("--prep-samples", prepare_samples,
                            "sample the first-split error from this many draws");

    auto* classical_cmd = app.add_subcommand(
        "estimate-classical", "repeated classical mean estimates, one CSV row per run");
    add_common_options(classical_cmd, common);
    add_dist_options(classical_cmd, dist);
    std::uint64_t classical_samples = 10000;
    int classical_reps = 100;
    classical_cmd->add_option("--samples", classical_samples, "samples per run");
    classical_cmd->add_option("--reps", classical_reps, "independent runs");

    auto* quantum_cmd = app.add_subcommand(
        "estimate-quantum", "repeated amplitude-estimation mean estimates as CSV");
    add_common_options(quantum_cmd, common);
    add_dist_options(quantum_cmd, dist);
    std::uint64_t quantum_budget = 10000;
    std::uint64_t quantum_min_shots = 20;
    std::uint64_t quantum_prep_samples = 10000;
    int quantum_reps = 100;
    quantum_cmd->add_option("--budget", quantum_budget, "oracle query budget per run");
    quantum_cmd->add_option("--min-shots", quantum_min_shots, "minimum shots per depth");
    quantum_cmd->add_option("--prep-samples", quantum_prep_samples,
                            "also sample a prep error per run (pipeline mode)");
    quantum_cmd->add_option("--reps", quantum_reps, "independent runs");

    auto* decompose_cmd = app.add_subcommand(
        "decompose", "empirical split of the MSE into prep and estimation parts (JSON)");
    add_common_options(decompose_cmd, common);
    DistOpts decompose_dist;
    decompose_dist.family = "uniform";
    decompose_dist.param1 = 0.0;
    decompose_dist.param2 = 1.0;
    decompose_dist.n = 4;
    add_dist_options(decompose_cmd, decompose_dist);
    std::uint64_t decompose_prep = 10000;
    std::uint64_t decompose_budget = 1000;
    int decompose_reps = 2000;
    decompose_cmd->add_option("--prep-samples", decompose_prep, "draws behind each epsilon_l");
    decompose_cmd->add_option("--budget", decompose_budget, "oracle queries per estimate");
    decompose_cmd->add_option("--reps", decompose_reps, "repetitions (>= 1000)");

    auto* sweep_cmd = app.add_subcommand(
        "sweep", "accuracy-vs-cost sweep with log-log slope fits (CSV + JSON per arm)");
    add_common_options(sweep_cmd, common);
    add_dist_options(sweep_cmd, dist);
    std::vector<std::string> sweep_arms;
    int sweep_reps = 400;
    sweep_cmd->add_option("--arm", sweep_arms, "pipeline|exact|classical (repeatable)");
    sweep_cmd->add_option("--reps", sweep_reps, "repetitions per grid point (>= 100)");

    auto* allocate_cmd = app.add_subcommand(
        "allocate", "optimal classical/quantum budget split under the analytic MSE model");
    add_common_options(allocate_cmd, common);
    add_dist_options(allocate_cmd, dist);
    std::vector<double> allocate_costs;
    int allocate_grid = 64;
    double allocate_c1 = 1.0;
    double allocate_eps_ops = 1e-3;
    allocate_cmd->add_option("--cost", allocate_costs, "total operation budgets (repeatable)");
    allocate_cmd->add_option("--split-grid", allocate_grid, "split fractions to scan");
    allocate_cmd->add_option("--c1", allocate_c1, "estimation-variance constant");
    allocate_cmd->add_option("--eps-ops", allocate_eps_ops,
                             "accuracy assumed by the per-sample cost model");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("qmclab");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error(2, "usage", e.what());
        return 2;
    }

    try {
        if (discretize_cmd->parsed()) return cmd_discretize(discretize_cmd, common, dist);
        if (prepare_cmd->parsed()) {
            return cmd_prepare(prepare_cmd, common, dist, prepare_epsilon, prepare_samples);
        }
        if (classical_cmd->parsed()) {
            return cmd_estimate_classical(classical_cmd, common, dist, classical_samples,
                                          classical_reps);
        }
        if (quantum_cmd->parsed()) {
            return cmd_estimate_quantum(quantum_cmd, common, dist, quantum_budget,
                                        quantum_min_shots, quantum_prep_samples, quantum_reps);
        }
        if (decompose_cmd->parsed()) {
            return cmd_decompose(decompose_cmd, common, decompose_dist, decompose_prep,
                                 decompose_budget, decompose_reps);
        }
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_cmd, common, dist, sweep_arms, sweep_reps);
        if (allocate_cmd->parsed()) {
            return cmd_allocate(allocate_cmd, common, dist, allocate_costs, allocate_grid,
                                allocate_c1, allocate_eps_ops);
        }
        print_error(2, "usage", "no subcommand given");
        return 2;
    } catch (const config_error& e) {
        print_error(2, "config", e.what());
        return 2;
    } catch (const infeasible_error& e) {
        print_error(3, "infeasible", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        print_error(2, "config", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error(1, "runtime", e.what());
        return 1;
    }
}

}  // namespace qmclab::cli
