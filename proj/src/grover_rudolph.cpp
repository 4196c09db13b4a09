#include "qmclab/grover_rudolph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmclab/classical_mc.hpp"
#include "qmclab/numerics.hpp"

namespace qmclab {

namespace {

constexpr double kVanishingMass = 1e-300;

double binomial_fraction(double p, std::uint64_t trials, Rng& rng) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (rng.next_bernoulli(p)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace

double PreparedState::norm_sq() const {
    CompensatedAccumulator acc;
    for (double a : amps) acc.add(a * a);
    return acc.value();
}

double PreparedState::encoded_mean() const {
    CompensatedAccumulator acc;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc.add(static_cast<double>(i) * amps[i] * amps[i]);
    }
    return acc.value();
}

double split_ratio(const ContinuousDistribution& d, double x_l, double x_r) {
    if (!(x_l < x_r)) throw std::invalid_argument("split_ratio: need x_l < x_r");
    const double total = d.interval_mass(x_l, x_r);
    if (total < kVanishingMass) {
        throw std::domain_error("vanishing-mass: interval mass underflowed");
    }
    const double mid = 0.5 * (x_l + x_r);
    const double f = d.interval_mass(x_l, mid) / total;
    return std::clamp(f, 0.0, 1.0);
}

double rotation_angle(double split_fraction) {
    const double f = std::clamp(split_fraction, 0.0, 1.0);
    return std::acos(std::sqrt(f));
}

AngleSchedule angles_exact(const ContinuousDistribution& d, int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("angles_exact requires 1 <= n <= 20");
    AngleSchedule schedule;
    schedule.theta.resize(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        const std::size_t intervals = std::size_t{1} << m;
        const double w = d.width() / static_cast<double>(intervals);
        auto& row = schedule.theta[static_cast<std::size_t>(m)];
        row.resize(intervals);
        for (std::size_t i = 0; i < intervals; ++i) {
            const double a = d.lower + w * static_cast<double>(i);
            const double b = d.lower + w * static_cast<double>(i + 1);
            double f;
            try {
                f = split_ratio(d, a, b);
            } catch (const std::domain_error&) {
                f = 0.5;
                schedule.vanishing_substitutions.emplace_back(m, i);
            }
            row[i] = rotation_angle(f);
        }
    }
    return schedule;
}

AngleSchedule angles_noisy(const ContinuousDistribution& d, int n, std::uint64_t n_samples,
                           std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("angles_noisy requires n_samples >= 1");
    AngleSchedule schedule = angles_exact(d, n);
    Rng rng(seed);
    for (auto& row : schedule.theta) {
        for (double& theta : row) {
            const double f = std::cos(theta) * std::cos(theta);
            theta = rotation_angle(binomial_fraction(f, n_samples, rng));
        }
    }
    return schedule;
}

PreparedState build_state(const AngleSchedule& schedule) {
    std::vector<double> amps{1.0};
    for (const auto& row : schedule.theta) {
        if (row.size() != amps.size()) {
            throw std::invalid_argument("angle schedule rows must double in length");
        }
        std::vector<double> next(amps.size() * 2);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            next[2 * i] = amps[i] * std::cos(row[i]);
            next[2 * i + 1] = amps[i] * std::sin(row[i]);
        }
        amps = std::move(next);
    }
    return PreparedState{std::move(amps)};
}

PreparedState encode_exact(const DiscretizedDistribution& disc) {
    PreparedState state;
    state.amps.resize(disc.size());
    for (std::size_t i = 0; i < disc.size(); ++i) state.amps[i] = std::sqrt(disc.probs[i]);
    return state;
}

PerturbResult perturb_first_iteration(const DiscretizedDistribution& disc,
                                      const FirstAngleError& err) {
    const double pl = left_mass(disc);
    if (!(pl > 0.0 && pl < 1.0)) {
        throw std::domain_error("degenerate-half: left mass must lie strictly in (0,1)");
    }
    PerturbResult result;
    double eps = err.epsilon_l;
    if (pl + eps < 0.0) {
        eps = -pl;
        result.clamped = true;
    } else if (pl + eps > 1.0) {
        eps = 1.0 - pl;
        result.clamped = true;
    }
    result.epsilon_applied = eps;

    const std::size_t half = disc.size() / 2;
    const double left_scale = std::sqrt((pl + eps) / pl);
    const double right_scale = std::sqrt((1.0 - pl - eps) / (1.0 - pl));
    result.state.amps.resize(disc.size());
    for (std::size_t i = 0; i < half; ++i) {
        result.state.amps[i] = std::sqrt(disc.probs[i]) * left_scale;
    }
    for (std::size_t i = half; i < disc.size(); ++i) {
        result.state.amps[i] = std::sqrt(disc.probs[i]) * right_scale;
    }
    return result;
}

FirstAngleError mc_first_angle(const DiscretizedDistribution& disc, std::uint64_t n_samples,
                               std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("mc_first_angle requires n_samples >= 1");
    const DiscreteSampler sampler(disc);
    const std::size_t half = disc.size() / 2;
    Rng rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < n_samples; ++t) {
        if (sampler.sample(rng) < half) ++hits;
    }
    FirstAngleError err;
    err.epsilon_l = static_cast<double>(hits) / static_cast<double>(n_samples) - left_mass(disc);
    err.n_samples = n_samples;
    err.seed = seed;
    return err;
}

}  // namespace qmclab
