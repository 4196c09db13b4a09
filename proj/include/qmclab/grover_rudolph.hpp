#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qmclab/distribution.hpp"
#include "qmclab/rng.hpp"

namespace qmclab {

/// Rotation angles for the iterative state construction: theta[m][i] acts on
/// the i-th interval of the m-th dyadic refinement, m = 0 .. n-1. All angles
/// lie in [0, pi/2] so the resulting amplitudes stay real and nonnegative.
struct AngleSchedule {
    std::vector<std::vector<double>> theta;
    // (iteration, interval) pairs where an interval's mass underflowed and the
    // even-split convention was substituted.
    std::vector<std::pair<int, std::size_t>> vanishing_substitutions;

    int depth() const { return static_cast<int>(theta.size()); }
};

/// Real nonnegative amplitude vector of length 2^n with unit norm.
struct PreparedState {
    std::vector<double> amps;

    std::size_t size() const { return amps.size(); }
    double norm_sq() const;
    /// Mean of the encoded pmf amps^2 over the index domain {0 .. 2^n - 1}.
    double encoded_mean() const;
};

/// Signed error applied to the left-half mass in the first iteration, and the
/// sampling metadata that produced it.
struct FirstAngleError {
    double epsilon_l = 0.0;
    std::uint64_t n_samples = 0;  // 0 when the error was injected directly
    std::uint64_t seed = 0;
};

/// Fraction of an interval's probability mass that lies in its left half,
/// f = mass([x_l, mid)) / mass([x_l, x_r)) with mid = (x_l + x_r) / 2,
/// computed from the analytic CDF. Throws on underflowing interval mass;
/// callers substitute the f = 0.5 convention.
double split_ratio(const ContinuousDistribution& d, double x_l, double x_r);

/// arccos(sqrt(f)) clamped into [0, pi/2].
double rotation_angle(double split_fraction);

/// Exact angle schedule over the n dyadic refinements of the support.
AngleSchedule angles_exact(const ContinuousDistribution& d, int n);

/// Angle schedule in which every split fraction is replaced by an independent
/// n_samples-trial binomial estimate. Exploratory noise model; the analysis
/// path injects error only at the first iteration.
AngleSchedule angles_noisy(const ContinuousDistribution& d, int n, std::uint64_t n_samples,
                           std::uint64_t seed);

/// Iterative doubling: amp_i -> (amp_i cos theta, amp_i sin theta) per step.
PreparedState build_state(const AngleSchedule& schedule);

/// Exact amplitude encoding of a pmf: amps_i = sqrt(p_i).
PreparedState encode_exact(const DiscretizedDistribution& disc);

struct PerturbResult {
    PreparedState state;
    double epsilon_applied = 0.0;  // differs from the request only when clamped
    bool clamped = false;
};

/// State with the first-iteration mass split moved from p_l to p_l + eps:
/// amplitudes sqrt(p_i (p_l+eps)/p_l) on the left half and
/// sqrt(p_i (1-p_l-eps)/(1-p_l)) on the right. Requests pushing p_l + eps
/// outside [0,1] are clamped to the boundary and flagged.
PerturbResult perturb_first_iteration(const DiscretizedDistribution& disc,
                                      const FirstAngleError& err);

/// Estimates the left-half mass by drawing n_samples indices from the pmf and
/// counting the fraction below 2^{n-1}; epsilon_l = fraction - p_l, so the
/// estimate is Binomial(n_samples, p_l) / n_samples.
FirstAngleError mc_first_angle(const DiscretizedDistribution& disc, std::uint64_t n_samples,
                               std::uint64_t seed);

}  // namespace qmclab
