#include "qmclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qmclab/errors.hpp"
#include "qmclab/grover_rudolph.hpp"
#include "qmclab/numerics.hpp"

namespace qmclab {

namespace {

double axis_value(const SweepRow& row, CostAxis axis) {
    switch (axis) {
        case CostAxis::CostUnits: return static_cast<double>(row.cost_units);
        case CostAxis::Queries: return static_cast<double>(row.n_queries);
        case CostAxis::PrepSamples: return static_cast<double>(row.n_prep_samples);
    }
    return 0.0;
}

void require_span(const std::vector<SweepRow>& rows, CostAxis axis) {
    if (rows.size() < 4) {
        throw infeasible_error("insufficient-span: slope fit needs >= 4 points");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& row : rows) {
        const double v = axis_value(row, axis);
        if (!(v > 0.0)) throw infeasible_error("insufficient-span: nonpositive cost value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi < 100.0 * lo) {
        throw infeasible_error("insufficient-span: slope fit needs >= 2 decades of cost");
    }
}

}  // namespace

std::string arm_name(Arm arm) {
    switch (arm) {
        case Arm::Pipeline: return "pipeline";
        case Arm::ExactPrep: return "exact";
        case Arm::Classical: return "classical";
    }
    return "unknown";
}

Arm arm_from_name(const std::string& name) {
    if (name == "pipeline") return Arm::Pipeline;
    if (name == "exact") return Arm::ExactPrep;
    if (name == "classical") return Arm::Classical;
    throw config_error("unknown arm: " + name);
}

CostAxis default_axis(Arm arm) {
    switch (arm) {
        case Arm::Pipeline: return CostAxis::CostUnits;
        case Arm::ExactPrep: return CostAxis::Queries;
        case Arm::Classical: return CostAxis::PrepSamples;
    }
    return CostAxis::CostUnits;
}

std::string axis_name(CostAxis axis) {
    switch (axis) {
        case CostAxis::CostUnits: return "cost_units";
        case CostAxis::Queries: return "n_queries";
        case CostAxis::PrepSamples: return "n_prep_samples";
    }
    return "unknown";
}

std::uint64_t AllocationRule::prep_samples(double target) const {
    if (!(target > 0.0)) throw std::invalid_argument("accuracy target must be > 0");
    return static_cast<std::uint64_t>(std::ceil(c_s / (target * target)));
}

std::uint64_t AllocationRule::query_budget(double target) const {
    if (!(target > 0.0)) throw std::invalid_argument("accuracy target must be > 0");
    return static_cast<std::uint64_t>(std::ceil(c_q / target));
}

SlopeFit fit_loglog_slope(const std::vector<SweepRow>& rows, CostAxis axis, std::uint64_t seed,
                          int resamples) {
    require_span(rows, axis);
    std::vector<double> xs(rows.size());
    std::vector<double> ys(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        xs[i] = std::log10(axis_value(rows[i], axis));
        if (!(rows[i].rmse > 0.0)) {
            throw infeasible_error("insufficient-span: zero RMSE cannot be fitted in log space");
        }
        ys[i] = std::log10(rows[i].rmse);
    }
    const LinearFit point = ols_fit(xs, ys);

    SlopeFit fit;
    fit.slope = point.slope;
    fit.intercept = point.intercept;

    Rng rng(derive_seed(seed, 0x736c6f7065ull));
    std::vector<double> slopes;
    slopes.reserve(static_cast<std::size_t>(resamples));
    std::vector<double> ys_b(rows.size());
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& sq = rows[i].sq_errors;
            if (sq.size() < 2) {
                ys_b[i] = ys[i];
                continue;
            }
            CompensatedAccumulator acc;
            for (std::size_t r = 0; r < sq.size(); ++r) acc.add(sq[rng.next_below(sq.size())]);
            ys_b[i] = 0.5 * std::log10(acc.value() / static_cast<double>(sq.size()));
        }
        slopes.push_back(ols_fit(xs, ys_b).slope);
    }
    std::sort(slopes.begin(), slopes.end());
    fit.ci_lo = percentile(slopes, 0.025);
    fit.ci_hi = percentile(slopes, 0.975);
    return fit;
}

SweepRow pipeline_rmse(const DiscretizedDistribution& disc, double target,
                       const AllocationRule& alloc, int repetitions, std::uint64_t master_seed,
                       std::uint64_t point_index, Arm arm, int threads) {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    const double mu = exact_mean(disc);

    SweepRow row;
    row.target = target;
    row.sq_errors.resize(static_cast<std::size_t>(repetitions));

    if (arm == Arm::Classical) {
        const std::uint64_t n_samples = alloc.prep_samples(target);
        const CostModel model = CostModel::for_target(disc.n, target);
        row.n_prep_samples = n_samples;
        row.cost_units = n_samples * static_cast<std::uint64_t>(model.ops_per_sample());
        parallel_for(row.sq_errors.size(), threads, [&](std::size_t rep) {
            const std::uint64_t seed = derive_seed(master_seed, point_index, rep);
            const EstimateRecord rec = estimate_mean(disc, n_samples, seed, model);
            const double e = rec.estimate - mu;
            row.sq_errors[rep] = e * e;
        });
    } else {
        const MlaeEstimator estimator(schedule_for_budget(alloc.query_budget(target),
                                                          alloc.min_shots));
        row.n_queries = estimator.schedule().query_count();
        std::vector<int> clamped(row.sq_errors.size(), 0);
        std::vector<int> degenerate(row.sq_errors.size(), 0);
        if (arm == Arm::ExactPrep) {
            const PreparedState state = encode_exact(disc);
            row.cost_units = row.n_queries;
            parallel_for(row.sq_errors.size(), threads, [&](std::size_t rep) {
                const std::uint64_t seed = derive_seed(master_seed, point_index, rep);
                const MlaeOutcome out = qmc_mean(state, estimator, derive_seed(seed, 2));
                const double e = out.record.estimate - mu;
                row.sq_errors[rep] = e * e;
                degenerate[rep] = out.degenerate_likelihood ? 1 : 0;
            });
        } else {
            const std::uint64_t n_prep = alloc.prep_samples(target);
            const CostModel model = CostModel::for_target(disc.n, target);
            row.n_prep_samples = n_prep;
            row.cost_units =
                n_prep * static_cast<std::uint64_t>(model.ops_per_sample()) + row.n_queries;
            parallel_for(row.sq_errors.size(), threads, [&](std::size_t rep) {
                const std::uint64_t seed = derive_seed(master_seed, point_index, rep);
                const FirstAngleError err = mc_first_angle(disc, n_prep, derive_seed(seed, 1));
                const PerturbResult prep = perturb_first_iteration(disc, err);
                const MlaeOutcome out = qmc_mean(prep.state, estimator, derive_seed(seed, 2));
                const double e = out.record.estimate - mu;
                row.sq_errors[rep] = e * e;
                clamped[rep] = prep.clamped ? 1 : 0;
                degenerate[rep] = out.degenerate_likelihood ? 1 : 0;
            });
        }
        for (int c : clamped) row.clamp_count += c;
        for (int d : degenerate) row.degenerate_count += d;
    }

    Rng boot_rng(derive_seed(master_seed, point_index, 0x626f6f74ull));
    const BootstrapSummary summary = bootstrap_rmse(row.sq_errors, 1000, boot_rng);
    row.rmse = summary.point;
    row.stderr_ = summary.stderr_;
    return row;
}

ScalingReport run_sweep(const SweepConfig& config, Arm arm) {
    if (config.targets.empty()) throw infeasible_error("sweep needs at least one target");
    for (std::size_t i = 1; i < config.targets.size(); ++i) {
        if (!(config.targets[i] < config.targets[i - 1])) {
            throw std::invalid_argument("sweep targets must be strictly decreasing");
        }
    }
    if (config.repetitions < 100) {
        throw std::invalid_argument("sweep slope points need >= 100 repetitions");
    }

    ScalingReport report;
    report.arm = arm;
    report.axis = default_axis(arm);
    report.config_hash = fnv1a_hash(config.label + "|" + arm_name(arm));
    report.rows.reserve(config.targets.size());
    for (std::size_t p = 0; p < config.targets.size(); ++p) {
        report.rows.push_back(pipeline_rmse(config.disc, config.targets[p], config.alloc,
                                            config.repetitions, config.master_seed, p, arm,
                                            config.threads));
    }
    report.fit = fit_loglog_slope(report.rows, report.axis, config.master_seed);

    int clamps = 0;
    int degenerates = 0;
    for (const auto& row : report.rows) {
        clamps += row.clamp_count;
        degenerates += row.degenerate_count;
    }
    if (clamps > 0) report.flags.push_back("clamped:" + std::to_string(clamps));
    if (degenerates > 0) report.flags.push_back("degenerate:" + std::to_string(degenerates));
    return report;
}

DecompositionResult decomposition_check(const DiscretizedDistribution& disc,
                                        std::uint64_t n_prep_samples,
                                        const MlaeSchedule& schedule, int repetitions,
                                        std::uint64_t seed,
                                        const DecompositionOptions& options) {
    if (repetitions < 1000) {
        throw std::invalid_argument("decomposition_check requires >= 1000 repetitions");
    }
    const double mu = exact_mean(disc);
    const double k = half_gap_k(disc);
    const MlaeEstimator estimator(schedule);

    const std::size_t reps = static_cast<std::size_t>(repetitions);
    std::vector<double> lhs_r(reps), prime_r(reps), eps2_r(reps), cross_r(reps);
    parallel_for(reps, options.threads, [&](std::size_t rep) {
        const std::uint64_t rep_seed = derive_seed(seed, rep);
        double eps;
        if (options.forced_epsilon) {
            eps = *options.forced_epsilon;
        } else {
            eps = mc_first_angle(disc, n_prep_samples, derive_seed(rep_seed, 1)).epsilon_l;
        }
        const PerturbResult prep =
            perturb_first_iteration(disc, FirstAngleError{eps, n_prep_samples, rep_seed});
        const double mu_prime = mu - k * prep.epsilon_applied;
        double mu_hat;
        if (options.exact_estimator) {
            mu_hat = mu_prime;
        } else {
            mu_hat = qmc_mean(prep.state, estimator, derive_seed(rep_seed, 2)).record.estimate;
        }
        const double full_err = mu - mu_hat;
        const double prime_err = mu_prime - mu_hat;
        lhs_r[rep] = full_err * full_err;
        prime_r[rep] = prime_err * prime_err;
        eps2_r[rep] = prep.epsilon_applied * prep.epsilon_applied;
        cross_r[rep] = 2.0 * k * prep.epsilon_applied * prime_err;
    });

    const double inv_reps = 1.0 / static_cast<double>(reps);
    DecompositionResult result;
    result.k = k;
    result.p_l = left_mass(disc);
    result.repetitions = repetitions;
    result.mean_eps_sq = compensated_sum(eps2_r) * inv_reps;
    result.lhs = compensated_sum(lhs_r) * inv_reps;
    result.rhs = compensated_sum(prime_r) * inv_reps + k * k * result.mean_eps_sq;
    result.cross = compensated_sum(cross_r) * inv_reps;

    // Joint bootstrap over repetition indices keeps the lhs/rhs resamples
    // correlated, which is what the combined stderr of the difference needs.
    Rng rng(derive_seed(seed, 0x626f6f74ull));
    const int resamples = 1000;
    std::vector<double> lhs_b(resamples), rhs_b(resamples), cross_b(resamples),
        diff_b(resamples);
    for (int b = 0; b < resamples; ++b) {
        CompensatedAccumulator lhs_acc, prime_acc, eps_acc, cross_acc;
        for (std::size_t r = 0; r < reps; ++r) {
            const std::size_t j = rng.next_below(reps);
            lhs_acc.add(lhs_r[j]);
            prime_acc.add(prime_r[j]);
            eps_acc.add(eps2_r[j]);
            cross_acc.add(cross_r[j]);
        }
        lhs_b[b] = lhs_acc.value() * inv_reps;
        rhs_b[b] = prime_acc.value() * inv_reps + k * k * eps_acc.value() * inv_reps;
        cross_b[b] = cross_acc.value() * inv_reps;
        diff_b[b] = lhs_b[b] - rhs_b[b];
    }
    const auto stddev = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        return std::sqrt(var / static_cast<double>(v.size() - 1));
    };
    result.lhs_stderr = stddev(lhs_b);
    result.rhs_stderr = stddev(rhs_b);
    result.cross_stderr = stddev(cross_b);
    result.diff_stderr = stddev(diff_b);
    return result;
}

BudgetSplit budget_allocator(double total_cost, const DiscretizedDistribution& disc, double k,
                             int split_grid, const CostModel& cost_model, double c1) {
    if (split_grid < 2) throw std::invalid_argument("split grid needs >= 2 points");
    const double ops = static_cast<double>(cost_model.ops_per_sample());
    if (total_cost < ops + 1.0) {
        throw infeasible_error("infeasible-budget: cannot fund one sample and one query");
    }
    const double pl = left_mass(disc);
    const double prep_var = k * k * pl * (1.0 - pl);

    BudgetSplit best;
    best.predicted_mse = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= split_grid; ++j) {
        const double frac = static_cast<double>(j) / static_cast<double>(split_grid);
        const std::uint64_t n_q =
            std::max<std::uint64_t>(1, static_cast<std::uint64_t>(frac * total_cost));
        const double remainder = total_cost - static_cast<double>(n_q);
        const std::uint64_t n_s =
            remainder > 0.0 ? static_cast<std::uint64_t>(remainder / ops) : 0;
        if (prep_var > 0.0 && n_s == 0) continue;
        const double prep_mse =
            prep_var > 0.0 ? prep_var / static_cast<double>(n_s) : 0.0;
        const double mse = c1 / (static_cast<double>(n_q) * static_cast<double>(n_q)) + prep_mse;
        if (mse < best.predicted_mse) {
            best.predicted_mse = mse;
            best.n_prep_samples = n_s;
            best.n_queries = n_q;
        }
    }
    if (!std::isfinite(best.predicted_mse)) {
        throw infeasible_error("infeasible-budget: no valid split on the grid");
    }
    return best;
}

double cost_at_rmse(const ScalingReport& report, double rmse) {
    std::vector<std::pair<double, double>> pts;  // (log rmse, log cost)
    pts.reserve(report.rows.size());
    for (const auto& row : report.rows) {
        if (row.rmse > 0.0 && row.cost_units > 0) {
            pts.emplace_back(std::log10(row.rmse), std::log10(static_cast<double>(row.cost_units)));
        }
    }
    if (pts.size() < 2) throw infeasible_error("cost_at_rmse: not enough rows");
    std::sort(pts.begin(), pts.end());
    const double y = std::log10(rmse);
    if (y < pts.front().first || y > pts.back().first) {
        throw infeasible_error("cost_at_rmse: rmse outside measured range");
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (y <= pts[i].first) {
            const double t = (y - pts[i - 1].first) / (pts[i].first - pts[i - 1].first);
            return std::pow(10.0, pts[i - 1].second + t * (pts[i].second - pts[i - 1].second));
        }
    }
    return std::pow(10.0, pts.back().second);
}

}  // namespace qmclab
