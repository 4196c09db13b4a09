#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmclab {

enum class Family { Uniform, Normal, Exponential, Logistic };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// An analytic log-concave density restricted to a finite window [lower, upper),
/// shifted so the window starts at a nonnegative coordinate. `pdf`/`cdf` refer
/// to the restricted, renormalized density; the untruncated family law is still
/// reachable through `family_cdf`/`family_survival` (needed for tail accounting
/// and for interval-mass ratios, which are insensitive to renormalization).
struct ContinuousDistribution {
    Family family = Family::Normal;
    double param1 = 0.0;  // normal: mean, exponential: rate, logistic: location, uniform: lo
    double param2 = 1.0;  // normal: sigma, logistic: scale, uniform: hi (unused for exponential)
    double shift = 0.0;   // added to the family's natural coordinate
    double lower = 0.0;   // truncated support [lower, upper)
    double upper = 1.0;
    double beta = 0.0;      // bound on |d pdf / dx| over the support
    double tail_tol = 0.0;  // per-tail mass allowed outside [lower, upper)

    double width() const { return upper - lower; }

    double family_pdf(double x) const;       // untruncated density (shift applied)
    double family_cdf(double x) const;       // untruncated CDF
    double family_survival(double x) const;  // 1 - family_cdf, computed tail-stably

    // Family measure of [a, b), evaluated through the CDF on the lower side of
    // the median and through the survival function above it so that deep-tail
    // intervals keep full relative precision.
    double interval_mass(double a, double b) const;
    double total_mass() const { return interval_mass(lower, upper); }

    double pdf(double x) const;  // truncated + renormalized; 0 outside the window
    // Mean of the truncated density by composite Simpson quadrature.
    double mean_by_quadrature(int subintervals = 1 << 20) const;
};

/// Fits the support window of a family so that at most `tail_tol` mass is cut
/// on each side, then shifts the result to nonnegative coordinates and bounds
/// the density slope on a fine probe grid.
ContinuousDistribution truncate(Family family, double param1, double param2, double tail_tol);

/// 2^n-point probability mass function on the uniform grid x_i = x_l + i*dx/N.
/// probs[i] carries the exact family mass of cell [x_i, x_{i+1}), renormalized
/// to sum to one.
struct DiscretizedDistribution {
    int n = 1;                  // qubit count; N = 2^n points
    std::vector<double> probs;  // size 2^n, nonnegative, sums to 1
    double grid_x0 = 0.0;       // x of index 0
    double grid_dx = 1.0;       // cell width

    std::size_t size() const { return probs.size(); }
    double grid_x(std::size_t i) const { return grid_x0 + static_cast<double>(i) * grid_dx; }

    static DiscretizedDistribution from_probs(int n, std::vector<double> probs,
                                              double grid_x0 = 0.0, double grid_dx = 1.0);
    static DiscretizedDistribution uniform(int n);
    static DiscretizedDistribution point_mass(int n, std::size_t index);

    bool is_log_concave(double tol = 1e-12) const;
};

DiscretizedDistribution discretize(const ContinuousDistribution& d, int n);

/// Mean index: sum of i * p_i over {0 .. 2^n - 1}.
double exact_mean(const DiscretizedDistribution& disc);

/// Total mass on the left half of the index domain, p_l = sum_{i < 2^{n-1}} p_i.
double left_mass(const DiscretizedDistribution& disc);

/// Gap between the conditional means of the two halves, k = mu_R - mu_L, the
/// factor by which a first-rotation mass error eps shifts the encoded mean
/// (mu' = mu - k * eps).
double half_gap_k(const DiscretizedDistribution& disc);

struct DiscretizationErrorReport {
    double bound = 0.0;     // (beta/2) * (dx/N_d)^2
    double measured = 0.0;  // |continuous mean - discretized mean mapped to x units|
};

/// Slope-based bound and quadrature-measured value of the mean error caused by
/// discretization. Both are reported; neither is asserted against the other
/// (the bound ignores accumulation across cells). Index means map back to x
/// units at cell midpoints.
DiscretizationErrorReport discretization_error_report(const ContinuousDistribution& d, int n);

double riemann_mean_error_bound(double beta, double dx, double n_d);

/// Midpoint-concavity probe of log pdf on `points` grid nodes.
bool log_concavity_probe(const ContinuousDistribution& d, int points = 10000,
                         double tol = 1e-9);

// Probe-grid slope bound used by truncate() to fill `beta`.
double estimate_slope_bound(const ContinuousDistribution& d, int points = 100000);

}  // namespace qmclab
