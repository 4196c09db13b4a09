// Test-side oracles. Everything here recomputes expected values through an
// independent route (bisection, brute-force summation, quadrature of the raw
// density) and must stay decoupled from the library code paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qmclab/distribution.hpp"
#include "qmclab/rng.hpp"

namespace qmclab::oracles {

// Standard normal quantile by bisection on the erfc-based CDF. Upper-tail
// requests are reflected into the lower tail, where erfc keeps full relative
// precision, before bisecting.
inline double bisect_normal_quantile(double p) {
    if (p > 0.5) return -bisect_normal_quantile(1.0 - p);
    auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    double lo = -10.0;
    double hi = 0.5;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Composite Simpson integral of the raw (untruncated) family density.
inline double simpson_family_mass(const ContinuousDistribution& d, double a, double b,
                                  int subintervals) {
    const int m = subintervals % 2 == 0 ? subintervals : subintervals + 1;
    const double h = (b - a) / static_cast<double>(m);
    double acc = d.family_pdf(a) + d.family_pdf(b);
    for (int j = 1; j < m; ++j) {
        acc += (j % 2 == 1 ? 4.0 : 2.0) * d.family_pdf(a + h * static_cast<double>(j));
    }
    return acc * h / 3.0;
}

// Per-cell masses of the 2^n grid by quadrature, normalized to sum to one.
inline std::vector<double> quadrature_cell_masses(const ContinuousDistribution& d, int n,
                                                  int subintervals_per_cell) {
    const std::size_t size = std::size_t{1} << n;
    const double dx = d.width() / static_cast<double>(size);
    std::vector<double> masses(size);
    double total = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        const double a = d.lower + dx * static_cast<double>(i);
        masses[i] = simpson_family_mass(d, a, a + dx, subintervals_per_cell);
        total += masses[i];
    }
    for (double& m : masses) m /= total;
    return masses;
}

inline long double brute_mean_index(std::span<const double> probs) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += static_cast<long double>(i) * static_cast<long double>(probs[i]);
    }
    return acc;
}

inline long double brute_left_mass(std::span<const double> probs) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < probs.size() / 2; ++i) {
        acc += static_cast<long double>(probs[i]);
    }
    return acc;
}

struct ConditionalMeans {
    long double left;
    long double right;
};

inline ConditionalMeans brute_conditional_means(std::span<const double> probs) {
    const std::size_t half = probs.size() / 2;
    long double lm = 0.0L, ls = 0.0L, rm = 0.0L, rs = 0.0L;
    for (std::size_t i = 0; i < half; ++i) {
        ls += probs[i];
        lm += static_cast<long double>(i) * probs[i];
    }
    for (std::size_t i = half; i < probs.size(); ++i) {
        rs += probs[i];
        rm += static_cast<long double>(i) * probs[i];
    }
    return {lm / ls, rm / rs};
}

// Closed-form mean of the truncated family on [lower, upper), in the shifted
// coordinates the library reports.
inline double closed_form_truncated_mean(const ContinuousDistribution& d) {
    const double a = d.lower - d.shift;
    const double b = d.upper - d.shift;
    switch (d.family) {
        case Family::Uniform:
            return 0.5 * (a + b) + d.shift;
        case Family::Normal: {
            const double alpha = (a - d.param1) / d.param2;
            const double beta = (b - d.param1) / d.param2;
            auto phi = [](double z) {
                return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
            };
            auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
            const double z_mass = cdf(beta) - cdf(alpha);
            return d.param1 + d.param2 * (phi(alpha) - phi(beta)) / z_mass + d.shift;
        }
        case Family::Exponential: {
            const double lam = d.param1;
            const double ea = std::exp(-lam * a);
            const double eb = std::exp(-lam * b);
            const double num = (a + 1.0 / lam) * ea - (b + 1.0 / lam) * eb;
            return num / (ea - eb) + d.shift;
        }
        case Family::Logistic: {
            const double s = d.param2;
            auto cdf = [&](double x) { return 1.0 / (1.0 + std::exp(-(x - d.param1) / s)); };
            auto softplus = [](double z) { return z > 30.0 ? z : std::log1p(std::exp(z)); };
            const double fa = cdf(a);
            const double fb = cdf(b);
            const double ia = s * softplus((a - d.param1) / s);
            const double ib = s * softplus((b - d.param1) / s);
            return (b * fb - a * fa - (ib - ia)) / (fb - fa) + d.shift;
        }
    }
    throw std::logic_error("unreachable");
}

// Random log-concave pmf: cumulative sums of sorted (decreasing) increments
// give a concave log-weight sequence. Rejects draws whose left mass falls
// outside [pl_min, pl_max].
inline std::vector<double> random_log_concave_pmf(Rng& rng, int n, double pl_min = 0.0,
                                                  double pl_max = 1.0) {
    const std::size_t size = std::size_t{1} << n;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<double> increments(size - 1);
        for (double& d : increments) d = (rng.next_double() - 0.5) * 6.0 / static_cast<double>(size);
        std::sort(increments.begin(), increments.end(), std::greater<double>());
        std::vector<double> logw(size, 0.0);
        for (std::size_t i = 1; i < size; ++i) logw[i] = logw[i - 1] + increments[i - 1];
        const double peak = *std::max_element(logw.begin(), logw.end());
        std::vector<double> probs(size);
        double total = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            probs[i] = std::exp(logw[i] - peak);
            total += probs[i];
        }
        for (double& p : probs) p /= total;
        double pl = 0.0;
        for (std::size_t i = 0; i < size / 2; ++i) pl += probs[i];
        if (pl >= pl_min && pl <= pl_max) return probs;
    }
    throw std::runtime_error("could not generate pmf with requested left mass");
}

// Exact-mass pmf of an exponential window, e.g. rate 1 on [0, 2), built from
// closed-form CDF differences only.
inline std::vector<double> exponential_window_pmf(double rate, double lo, double hi, int n) {
    const std::size_t size = std::size_t{1} << n;
    const double dx = (hi - lo) / static_cast<double>(size);
    std::vector<double> probs(size);
    double total = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        const double a = lo + dx * static_cast<double>(i);
        probs[i] = std::exp(-rate * a) - std::exp(-rate * (a + dx));
        total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
}

}  // namespace qmclab::oracles
