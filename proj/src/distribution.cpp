#include "qmclab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmclab/numerics.hpp"

namespace qmclab {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

// Rational approximation for the standard normal quantile (Acklam), polished
// with two Halley steps against the erfc-based CDF.
double standard_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal quantile: p outside (0,1)");

    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double err = 0.5 * std::erfc(-x / kSqrt2) - p;
        const double u = err * kSqrt2Pi * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

void validate_params(Family family, double p1, double p2) {
    if (!std::isfinite(p1) || !std::isfinite(p2)) {
        throw std::invalid_argument("unbounded-parameter: family parameters must be finite");
    }
    switch (family) {
        case Family::Normal:
            if (p2 <= 0.0) throw std::invalid_argument("unbounded-parameter: sigma must be > 0");
            break;
        case Family::Exponential:
            if (p1 <= 0.0) throw std::invalid_argument("unbounded-parameter: rate must be > 0");
            break;
        case Family::Logistic:
            if (p2 <= 0.0) throw std::invalid_argument("unbounded-parameter: scale must be > 0");
            break;
        case Family::Uniform:
            if (!(p2 > p1)) throw std::invalid_argument("unbounded-parameter: need hi > lo");
            break;
    }
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::Uniform: return "uniform";
        case Family::Normal: return "normal";
        case Family::Exponential: return "exponential";
        case Family::Logistic: return "logistic";
    }
    return "unknown";
}

Family family_from_name(const std::string& name) {
    if (name == "uniform") return Family::Uniform;
    if (name == "normal") return Family::Normal;
    if (name == "exponential") return Family::Exponential;
    if (name == "logistic") return Family::Logistic;
    throw std::invalid_argument("unknown family: " + name);
}

double ContinuousDistribution::family_pdf(double x) const {
    const double t = x - shift;
    switch (family) {
        case Family::Normal: {
            const double z = (t - param1) / param2;
            return std::exp(-0.5 * z * z) / (param2 * kSqrt2Pi);
        }
        case Family::Exponential:
            return t < 0.0 ? 0.0 : param1 * std::exp(-param1 * t);
        case Family::Logistic: {
            const double z = (t - param1) / param2;
            const double e = std::exp(-std::abs(z));
            const double denom = (1.0 + e) * (1.0 + e);
            return e / (param2 * denom);
        }
        case Family::Uniform:
            return (t >= param1 && t <= param2) ? 1.0 / (param2 - param1) : 0.0;
    }
    return 0.0;
}

double ContinuousDistribution::family_cdf(double x) const {
    const double t = x - shift;
    switch (family) {
        case Family::Normal: {
            const double z = (t - param1) / param2;
            return 0.5 * std::erfc(-z / kSqrt2);
        }
        case Family::Exponential:
            return t <= 0.0 ? 0.0 : -std::expm1(-param1 * t);
        case Family::Logistic: {
            const double z = (t - param1) / param2;
            return 1.0 / (1.0 + std::exp(-z));
        }
        case Family::Uniform: {
            if (t <= param1) return 0.0;
            if (t >= param2) return 1.0;
            return (t - param1) / (param2 - param1);
        }
    }
    return 0.0;
}

double ContinuousDistribution::family_survival(double x) const {
    const double t = x - shift;
    switch (family) {
        case Family::Normal: {
            const double z = (t - param1) / param2;
            return 0.5 * std::erfc(z / kSqrt2);
        }
        case Family::Exponential:
            return t <= 0.0 ? 1.0 : std::exp(-param1 * t);
        case Family::Logistic: {
            const double z = (t - param1) / param2;
            return 1.0 / (1.0 + std::exp(z));
        }
        case Family::Uniform: {
            if (t <= param1) return 1.0;
            if (t >= param2) return 0.0;
            return (param2 - t) / (param2 - param1);
        }
    }
    return 0.0;
}

double ContinuousDistribution::interval_mass(double a, double b) const {
    if (!(b > a)) return 0.0;
    double m;
    if (family_cdf(a) > 0.5) {
        m = family_survival(a) - family_survival(b);
    } else {
        m = family_cdf(b) - family_cdf(a);
    }
    return std::max(m, 0.0);
}

double ContinuousDistribution::pdf(double x) const {
    if (x < lower || x > upper) return 0.0;
    return family_pdf(x) / total_mass();
}

double ContinuousDistribution::mean_by_quadrature(int subintervals) const {
    if (subintervals < 2) throw std::invalid_argument("quadrature needs >= 2 subintervals");
    const int m = subintervals % 2 == 0 ? subintervals : subintervals + 1;
    const double h = width() / static_cast<double>(m);
    const double inv_total = 1.0 / total_mass();
    CompensatedAccumulator acc;
    for (int j = 0; j <= m; ++j) {
        const double x = lower + h * static_cast<double>(j);
        const double w = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        acc.add(w * x * family_pdf(x) * inv_total);
    }
    return acc.value() * h / 3.0;
}

double estimate_slope_bound(const ContinuousDistribution& d, int points) {
    const double h = d.width() / static_cast<double>(points - 1);
    const double inv_total = 1.0 / d.total_mass();
    double prev = d.family_pdf(d.lower) * inv_total;
    double max_slope = 0.0;
    for (int j = 1; j < points; ++j) {
        const double cur = d.family_pdf(d.lower + h * static_cast<double>(j)) * inv_total;
        max_slope = std::max(max_slope, std::abs(cur - prev) / h);
        prev = cur;
    }
    return max_slope;
}

bool log_concavity_probe(const ContinuousDistribution& d, int points, double tol) {
    const double h = d.width() / static_cast<double>(points + 1);
    double l0 = std::log(d.family_pdf(d.lower + h));
    double l1 = std::log(d.family_pdf(d.lower + 2.0 * h));
    for (int j = 3; j <= points; ++j) {
        const double l2 = std::log(d.family_pdf(d.lower + h * static_cast<double>(j)));
        if (l0 + l2 > 2.0 * l1 + tol) return false;
        l0 = l1;
        l1 = l2;
    }
    return true;
}

ContinuousDistribution truncate(Family family, double param1, double param2, double tail_tol) {
    if (!(tail_tol > 0.0 && tail_tol <= 0.01)) {
        throw std::invalid_argument("tail_tol must lie in (0, 0.01]");
    }
    validate_params(family, param1, param2);

    double lraw = 0.0;
    double uraw = 1.0;
    switch (family) {
        case Family::Normal: {
            const double q = standard_normal_quantile(tail_tol);  // negative
            lraw = param1 + param2 * q;
            uraw = param1 - param2 * q;
            break;
        }
        case Family::Exponential:
            lraw = 0.0;
            uraw = -std::log(tail_tol) / param1;
            break;
        case Family::Logistic: {
            const double q = std::log(tail_tol / (1.0 - tail_tol));  // negative
            lraw = param1 + param2 * q;
            uraw = param1 - param2 * q;
            break;
        }
        case Family::Uniform:
            lraw = param1;
            uraw = param2;
            break;
    }

    ContinuousDistribution d;
    d.family = family;
    d.param1 = param1;
    d.param2 = param2;
    d.shift = lraw < 0.0 ? -lraw : 0.0;
    d.lower = lraw + d.shift;
    d.upper = uraw + d.shift;
    d.tail_tol = tail_tol;
    d.beta = 1.05 * estimate_slope_bound(d);
    return d;
}

DiscretizedDistribution DiscretizedDistribution::from_probs(int n, std::vector<double> probs,
                                                            double grid_x0, double grid_dx) {
    if (n < 1 || n > 26) throw std::invalid_argument("qubit count out of range");
    if (probs.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("probs size must be 2^n");
    }
    for (double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("probabilities must be nonnegative");
    }
    const double total = compensated_sum(probs);
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("probabilities must sum to 1 within 1e-12");
    }
    DiscretizedDistribution disc;
    disc.n = n;
    disc.probs = std::move(probs);
    disc.grid_x0 = grid_x0;
    disc.grid_dx = grid_dx;
    if (!disc.is_log_concave()) {
        throw std::invalid_argument("pmf violates discrete log-concavity");
    }
    return disc;
}

DiscretizedDistribution DiscretizedDistribution::uniform(int n) {
    const std::size_t size = std::size_t{1} << n;
    return from_probs(n, std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

DiscretizedDistribution DiscretizedDistribution::point_mass(int n, std::size_t index) {
    const std::size_t size = std::size_t{1} << n;
    if (index >= size) throw std::invalid_argument("point mass index out of range");
    std::vector<double> probs(size, 0.0);
    probs[index] = 1.0;
    return from_probs(n, std::move(probs));
}

bool DiscretizedDistribution::is_log_concave(double tol) const {
    for (std::size_t i = 1; i + 1 < probs.size(); ++i) {
        if (probs[i] * probs[i] < probs[i - 1] * probs[i + 1] - tol) return false;
    }
    return true;
}

DiscretizedDistribution discretize(const ContinuousDistribution& d, int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("discretize requires 1 <= n <= 20");
    const std::size_t size = std::size_t{1} << n;
    const double dx = d.width() / static_cast<double>(size);
    std::vector<double> probs(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double a = d.lower + dx * static_cast<double>(i);
        const double b = d.lower + dx * static_cast<double>(i + 1);
        probs[i] = d.interval_mass(a, b);
    }
    const double total = compensated_sum(probs);
    for (double& p : probs) p /= total;

    DiscretizedDistribution disc;
    disc.n = n;
    disc.probs = std::move(probs);
    disc.grid_x0 = d.lower;
    disc.grid_dx = dx;
    return disc;
}

double exact_mean(const DiscretizedDistribution& disc) {
    CompensatedAccumulator acc;
    for (std::size_t i = 0; i < disc.probs.size(); ++i) {
        acc.add(static_cast<double>(i) * disc.probs[i]);
    }
    return acc.value();
}

double left_mass(const DiscretizedDistribution& disc) {
    const std::size_t half = disc.probs.size() / 2;
    return compensated_sum(std::span<const double>(disc.probs.data(), half));
}

double half_gap_k(const DiscretizedDistribution& disc) {
    const double pl = left_mass(disc);
    if (!(pl > 0.0 && pl < 1.0)) {
        throw std::domain_error("degenerate-half: left mass must lie strictly in (0,1)");
    }
    const std::size_t half = disc.probs.size() / 2;
    CompensatedAccumulator left, right;
    for (std::size_t i = 0; i < half; ++i) left.add(static_cast<double>(i) * disc.probs[i]);
    for (std::size_t i = half; i < disc.probs.size(); ++i) {
        right.add(static_cast<double>(i) * disc.probs[i]);
    }
    const double mu_left = left.value() / pl;
    const double mu_right = right.value() / (1.0 - pl);
    return mu_right - mu_left;
}

double riemann_mean_error_bound(double beta, double dx, double n_d) {
    const double cell = dx / n_d;
    return 0.5 * beta * cell * cell;
}

DiscretizationErrorReport discretization_error_report(const ContinuousDistribution& d, int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("report requires 1 <= n <= 20");
    const std::size_t size = std::size_t{1} << n;
    const double dx = d.width() / static_cast<double>(size);

    DiscretizationErrorReport report;
    report.bound = riemann_mean_error_bound(d.beta, d.width(), static_cast<double>(size));

    // The error under study is that of the left-Riemann pmf (density at the
    // left grid point times cell width, renormalized), which is what the
    // slope-based bound addresses. Index means map back to x at cell midpoints
    // so a constant density is represented with zero mean error.
    CompensatedAccumulator weight_sum, index_sum;
    for (std::size_t i = 0; i < size; ++i) {
        const double w = d.family_pdf(d.lower + dx * static_cast<double>(i));
        weight_sum.add(w);
        index_sum.add(static_cast<double>(i) * w);
    }
    const double mu_index = index_sum.value() / weight_sum.value();
    const double mu_x = d.lower + (mu_index + 0.5) * dx;
    report.measured = std::abs(d.mean_by_quadrature() - mu_x);
    return report;
}

}  // namespace qmclab
