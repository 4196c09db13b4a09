#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmclab/classical_mc.hpp"
#include "qmclab/grover_rudolph.hpp"
#include "qmclab/rng.hpp"

namespace qmclab {

/// Good-state probability a and its angle parametrization theta_a = arcsin(sqrt a).
struct AmplitudeTarget {
    double a = 0.0;
    double theta_a = 0.0;

    static AmplitudeTarget from_probability(double a);
};

/// Grover depths m_k and a fixed shot count per depth. The oracle query count
/// is N_q = shots * sum_k (2 m_k + 1).
struct MlaeSchedule {
    std::vector<std::uint64_t> depths;
    std::uint64_t shots = 1;

    std::uint64_t query_count() const;
};

/// Depths {0, 1, 2, 4, ..., 2^{K-1}}.
MlaeSchedule exponential_schedule(int k_max, std::uint64_t shots);

/// Largest exponential schedule whose query count fits the budget with at
/// least min_shots shots per depth; leftover budget goes into extra shots.
/// Throws infeasible_error when the budget cannot fund the minimum schedule.
MlaeSchedule schedule_for_budget(std::uint64_t n_queries, std::uint64_t min_shots = 20);

/// Maps the encoded mean of a state into a measurable amplitude:
/// a = sum_i amps_i^2 * i / (2^n - 1), so the mean is a * (2^n - 1).
AmplitudeTarget mean_to_amplitude(const PreparedState& state);

/// Probability of measuring the good state after m Grover iterations.
double grover_outcome_prob(const AmplitudeTarget& target, std::uint64_t m);

struct MlaeOutcome {
    EstimateRecord record;
    bool degenerate_likelihood = false;  // grid maxima tied within 1e-12; leftmost taken
};

/// Maximum-likelihood amplitude estimation over simulated Bernoulli outcomes.
/// The binomial log-likelihood is scanned on a dense theta grid and polished
/// by golden-section search. Likelihood tables depend only on the schedule,
/// so reuse one estimator across repetitions.
class MlaeEstimator {
  public:
    explicit MlaeEstimator(MlaeSchedule schedule, int grid_points = 100000);

    const MlaeSchedule& schedule() const { return schedule_; }

    /// Draws shot counts from the exact outcome law, then maximizes.
    MlaeOutcome estimate(const AmplitudeTarget& target, std::uint64_t seed) const;

    /// Maximizes for externally supplied per-depth hit counts (real-valued
    /// counts are accepted so exact expected counts can be fed in).
    MlaeOutcome estimate_from_counts(std::span<const double> hits) const;

  private:
    double log_likelihood(std::span<const double> hits, double theta) const;

    MlaeSchedule schedule_;
    int grid_points_;
    std::vector<double> grid_theta_;
    std::vector<std::vector<double>> log_p_;    // log sin^2((2m+1) theta) per depth
    std::vector<std::vector<double>> log_1mp_;  // log cos^2((2m+1) theta) per depth
};

/// One-shot convenience wrapper around MlaeEstimator.
MlaeOutcome mlae_estimate(const AmplitudeTarget& target, const MlaeSchedule& schedule,
                          std::uint64_t seed);

/// Quantum mean estimation: MLAE on the state's mean amplitude, scaled back to
/// index units. For an erroneous state the estimand is that state's encoded
/// mean (mu' = mu - k * eps_l), which is what true_value records.
MlaeOutcome qmc_mean(const PreparedState& state, const MlaeSchedule& schedule,
                     std::uint64_t seed);
MlaeOutcome qmc_mean(const PreparedState& state, const MlaeEstimator& estimator,
                     std::uint64_t seed);

}  // namespace qmclab
