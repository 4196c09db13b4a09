#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmclab/classical_mc.hpp"
#include "qmclab/distribution.hpp"
#include "qmclab/quantum_mc.hpp"

namespace qmclab {

enum class Arm { Pipeline, ExactPrep, Classical };

std::string arm_name(Arm arm);
Arm arm_from_name(const std::string& name);

/// Maps an accuracy target eps to the sampling budgets: N'_s = ceil(c_s/eps^2)
/// prep samples and an MLAE schedule of about ceil(c_q/eps) oracle queries.
struct AllocationRule {
    double c_s = 1.0;
    double c_q = 1.0;
    std::uint64_t min_shots = 20;

    std::uint64_t prep_samples(double target) const;
    std::uint64_t query_budget(double target) const;
};

struct SweepConfig {
    DiscretizedDistribution disc;
    std::vector<double> targets;  // strictly decreasing
    int repetitions = 400;        // >= 100 per slope point
    AllocationRule alloc;
    std::uint64_t master_seed = 42;
    int threads = 1;
    std::string label;  // human-readable config line; hashed into reports
};

struct SweepRow {
    double target = 0.0;
    std::uint64_t n_prep_samples = 0;  // N'_s (classical arm: N_s)
    std::uint64_t n_queries = 0;       // realized N_q
    std::uint64_t cost_units = 0;      // total abstract operation count
    double rmse = 0.0;
    double stderr_ = 0.0;
    std::vector<double> sq_errors;  // per-repetition, kept for bootstrap refits
    int clamp_count = 0;
    int degenerate_count = 0;
};

enum class CostAxis { CostUnits, Queries, PrepSamples };

CostAxis default_axis(Arm arm);
std::string axis_name(CostAxis axis);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double ci_lo = 0.0;  // 95% bootstrap interval over repetitions
    double ci_hi = 0.0;
};

struct ScalingReport {
    Arm arm = Arm::Pipeline;
    CostAxis axis = CostAxis::CostUnits;
    std::vector<SweepRow> rows;
    SlopeFit fit;
    std::vector<std::string> flags;
    std::uint64_t config_hash = 0;
};

/// OLS slope of log10 RMSE against the log10 cost axis, with a 95% CI from
/// 1000 bootstrap resamples of each row's per-repetition squared errors.
/// Requires >= 4 rows spanning >= 2 decades of the axis.
SlopeFit fit_loglog_slope(const std::vector<SweepRow>& rows, CostAxis axis,
                          std::uint64_t seed, int resamples = 1000);

/// One grid point of the accuracy-vs-cost sweep for the chosen arm.
SweepRow pipeline_rmse(const DiscretizedDistribution& disc, double target,
                       const AllocationRule& alloc, int repetitions, std::uint64_t master_seed,
                       std::uint64_t point_index, Arm arm, int threads = 1);

ScalingReport run_sweep(const SweepConfig& config, Arm arm);

struct DecompositionOptions {
    std::optional<double> forced_epsilon;  // bypass the sampling of eps_l
    bool exact_estimator = false;          // surrogate mu_hat := mu' (no MLAE noise)
    int threads = 1;
};

/// Empirical check of the MSE split
///   E[(mu - mu_hat)^2] = E[(mu' - mu_hat)^2] + k^2 E[eps^2] + cross,
/// where each repetition draws a fresh eps_l and a fresh MLAE run on the
/// perturbed state. `cross` is the empirical cross term, which vanishes in
/// expectation when the estimator is unbiased.
struct DecompositionResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double cross = 0.0;
    double lhs_stderr = 0.0;
    double rhs_stderr = 0.0;
    double cross_stderr = 0.0;
    double diff_stderr = 0.0;  // bootstrap stderr of lhs - rhs
    double k = 0.0;
    double p_l = 0.0;
    double mean_eps_sq = 0.0;
    int repetitions = 0;
};

DecompositionResult decomposition_check(const DiscretizedDistribution& disc,
                                        std::uint64_t n_prep_samples,
                                        const MlaeSchedule& schedule, int repetitions,
                                        std::uint64_t seed,
                                        const DecompositionOptions& options = {});

/// Best classical/quantum split of an operation budget under the analytic MSE
/// model c1/N_q^2 + k^2 p_l(1-p_l)/N'_s, found by grid search over the split
/// fraction.
struct BudgetSplit {
    std::uint64_t n_prep_samples = 0;
    std::uint64_t n_queries = 0;
    double predicted_mse = 0.0;
};

BudgetSplit budget_allocator(double total_cost, const DiscretizedDistribution& disc, double k,
                             int split_grid, const CostModel& cost_model, double c1 = 1.0);

/// Log-log interpolated cost of reaching `rmse` on a measured report. Throws
/// infeasible_error when rmse lies outside the report's observed range.
double cost_at_rmse(const ScalingReport& report, double rmse);

}  // namespace qmclab
