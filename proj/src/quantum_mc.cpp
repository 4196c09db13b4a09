#include "qmclab/quantum_mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmclab/errors.hpp"
#include "qmclab/numerics.hpp"

namespace qmclab {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kTieTolerance = 1e-12;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

AmplitudeTarget AmplitudeTarget::from_probability(double a) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("amplitude target must lie in [0,1]");
    }
    AmplitudeTarget t;
    t.a = a;
    t.theta_a = std::asin(std::sqrt(a));
    return t;
}

std::uint64_t MlaeSchedule::query_count() const {
    std::uint64_t per_shot = 0;
    for (std::uint64_t m : depths) per_shot += 2 * m + 1;
    return shots * per_shot;
}

MlaeSchedule exponential_schedule(int k_max, std::uint64_t shots) {
    if (k_max < 0 || shots < 1) throw std::invalid_argument("bad exponential schedule");
    MlaeSchedule sched;
    sched.depths.push_back(0);
    for (int k = 0; k < k_max; ++k) sched.depths.push_back(std::uint64_t{1} << k);
    sched.shots = shots;
    return sched;
}

MlaeSchedule schedule_for_budget(std::uint64_t n_queries, std::uint64_t min_shots) {
    const auto per_shot_cost = [](int k) {
        return exponential_schedule(k, 1).query_count();
    };
    if (n_queries < min_shots * per_shot_cost(1)) {
        throw infeasible_error("allocation-infeasible: budget below minimum MLAE schedule");
    }
    int k = 1;
    while (k < 62 && min_shots * per_shot_cost(k + 1) <= n_queries) ++k;
    const std::uint64_t shots = n_queries / per_shot_cost(k);
    return exponential_schedule(k, shots);
}

AmplitudeTarget mean_to_amplitude(const PreparedState& state) {
    if (state.size() < 2) {
        throw std::invalid_argument("mean_to_amplitude needs at least one qubit");
    }
    const double scale = static_cast<double>(state.size() - 1);
    CompensatedAccumulator acc;
    for (std::size_t i = 0; i < state.size(); ++i) {
        acc.add(state.amps[i] * state.amps[i] * (static_cast<double>(i) / scale));
    }
    return AmplitudeTarget::from_probability(clamp01(acc.value()));
}

double grover_outcome_prob(const AmplitudeTarget& target, std::uint64_t m) {
    const double s = std::sin(static_cast<double>(2 * m + 1) * target.theta_a);
    return s * s;
}

MlaeEstimator::MlaeEstimator(MlaeSchedule schedule, int grid_points)
    : schedule_(std::move(schedule)), grid_points_(grid_points) {
    if (schedule_.depths.empty() || schedule_.shots < 1) {
        throw std::invalid_argument("MLAE schedule must have depths and shots >= 1");
    }
    if (grid_points_ < 3) throw std::invalid_argument("MLAE grid too small");
    grid_theta_.resize(static_cast<std::size_t>(grid_points_));
    for (int g = 0; g < grid_points_; ++g) {
        grid_theta_[static_cast<std::size_t>(g)] =
            kHalfPi * static_cast<double>(g) / static_cast<double>(grid_points_ - 1);
    }
    log_p_.resize(schedule_.depths.size());
    log_1mp_.resize(schedule_.depths.size());
    for (std::size_t k = 0; k < schedule_.depths.size(); ++k) {
        auto& lp = log_p_[k];
        auto& lq = log_1mp_[k];
        lp.resize(grid_theta_.size());
        lq.resize(grid_theta_.size());
        const double factor = static_cast<double>(2 * schedule_.depths[k] + 1);
        for (std::size_t g = 0; g < grid_theta_.size(); ++g) {
            const double s = std::sin(factor * grid_theta_[g]);
            const double s2 = s * s;
            lp[g] = std::log(s2);
            lq[g] = std::log1p(-s2);
        }
    }
}

double MlaeEstimator::log_likelihood(std::span<const double> hits, double theta) const {
    const double shots = static_cast<double>(schedule_.shots);
    double ll = 0.0;
    for (std::size_t k = 0; k < schedule_.depths.size(); ++k) {
        const double factor = static_cast<double>(2 * schedule_.depths[k] + 1);
        const double s = std::sin(factor * theta);
        const double s2 = s * s;
        if (hits[k] > 0.0) ll += hits[k] * std::log(s2);
        if (hits[k] < shots) ll += (shots - hits[k]) * std::log1p(-s2);
    }
    return ll;
}

MlaeOutcome MlaeEstimator::estimate_from_counts(std::span<const double> hits) const {
    if (hits.size() != schedule_.depths.size()) {
        throw std::invalid_argument("hit count vector does not match schedule");
    }
    const double shots = static_cast<double>(schedule_.shots);

    // Dense grid scan using the precomputed per-depth log tables.
    std::vector<double> ll(grid_theta_.size(), 0.0);
    for (std::size_t k = 0; k < schedule_.depths.size(); ++k) {
        const double h = hits[k];
        const double miss = shots - h;
        const auto& lp = log_p_[k];
        const auto& lq = log_1mp_[k];
        if (h > 0.0) {
            for (std::size_t g = 0; g < ll.size(); ++g) ll[g] += h * lp[g];
        }
        if (miss > 0.0) {
            for (std::size_t g = 0; g < ll.size(); ++g) ll[g] += miss * lq[g];
        }
    }
    std::size_t best = 0;
    for (std::size_t g = 1; g < ll.size(); ++g) {
        if (ll[g] > ll[best]) best = g;
    }
    bool degenerate = false;
    for (std::size_t g = 0; g < ll.size(); ++g) {
        if (g != best && std::abs(ll[g] - ll[best]) <= kTieTolerance) {
            degenerate = true;
            if (g < best) best = g;  // leftmost of the tied maxima
        }
    }

    // Golden-section refinement between the neighbors of the best grid point.
    double lo = best == 0 ? grid_theta_[0] : grid_theta_[best - 1];
    double hi = best + 1 == grid_theta_.size() ? grid_theta_.back() : grid_theta_[best + 1];
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = log_likelihood(hits, x1);
    double f2 = log_likelihood(hits, x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = log_likelihood(hits, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = log_likelihood(hits, x1);
        }
    }
    const double theta_hat = 0.5 * (lo + hi);
    const double s = std::sin(theta_hat);

    MlaeOutcome outcome;
    outcome.degenerate_likelihood = degenerate;
    outcome.record.estimator = Estimator::QuantumMLAE;
    outcome.record.estimate = clamp01(s * s);
    outcome.record.queries_or_samples = schedule_.query_count();
    // State preparation is booked classically in the single-error model, so a
    // query costs exactly one unit.
    outcome.record.cost_units = outcome.record.queries_or_samples;
    return outcome;
}

MlaeOutcome MlaeEstimator::estimate(const AmplitudeTarget& target, std::uint64_t seed) const {
    Rng rng(seed);
    std::vector<double> hits(schedule_.depths.size(), 0.0);
    for (std::size_t k = 0; k < schedule_.depths.size(); ++k) {
        const double p = grover_outcome_prob(target, schedule_.depths[k]);
        std::uint64_t h = 0;
        for (std::uint64_t s = 0; s < schedule_.shots; ++s) {
            if (rng.next_bernoulli(p)) ++h;
        }
        hits[k] = static_cast<double>(h);
    }
    MlaeOutcome outcome = estimate_from_counts(hits);
    outcome.record.true_value = target.a;
    outcome.record.seed = seed;
    return outcome;
}

MlaeOutcome mlae_estimate(const AmplitudeTarget& target, const MlaeSchedule& schedule,
                          std::uint64_t seed) {
    return MlaeEstimator(schedule).estimate(target, seed);
}

MlaeOutcome qmc_mean(const PreparedState& state, const MlaeEstimator& estimator,
                     std::uint64_t seed) {
    const AmplitudeTarget target = mean_to_amplitude(state);
    MlaeOutcome outcome = estimator.estimate(target, seed);
    const double scale = static_cast<double>(state.size() - 1);
    outcome.record.estimate *= scale;
    outcome.record.true_value = target.a * scale;  // the state's encoded mean
    return outcome;
}

MlaeOutcome qmc_mean(const PreparedState& state, const MlaeSchedule& schedule,
                     std::uint64_t seed) {
    return qmc_mean(state, MlaeEstimator(schedule), seed);
}

}  // namespace qmclab
