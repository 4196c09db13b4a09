#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qmclab/rng.hpp"

namespace qmclab {

// Neumaier-compensated sum; keeps large-N sums at O(eps) instead of O(N*eps).
inline double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

class CompensatedAccumulator {
  public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Ordinary least squares y = a + b*x.
inline LinearFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

struct BootstrapSummary {
    double point = 0.0;    // statistic on the original sample
    double stderr_ = 0.0;  // standard deviation of bootstrap replicates
    double ci_lo = 0.0;    // 2.5th percentile
    double ci_hi = 0.0;    // 97.5th percentile
};

inline double percentile(std::vector<double> sorted_ascending, double q) {
    if (sorted_ascending.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted_ascending.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted_ascending.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted_ascending[lo] * (1.0 - frac) + sorted_ascending[hi] * frac;
}

// Bootstrap a statistic of a sample by resampling with replacement.
BootstrapSummary bootstrap_statistic(std::span<const double> sample,
                                     const std::function<double(std::span<const double>)>& stat,
                                     int resamples, Rng& rng);

// RMSE of a sample of squared errors plus its bootstrap standard error.
BootstrapSummary bootstrap_rmse(std::span<const double> sq_errors, int resamples, Rng& rng);

// Runs fn(0..count-1), fanned out over at most `threads` workers in
// contiguous chunks. Results must be written to per-index slots so the
// outcome does not depend on scheduling. threads <= 0 means use all cores.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

int resolve_threads(int requested);

// Shortest decimal form that round-trips a double; used by every writer so
// identical runs emit identical bytes.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double parsed = 0.0;
    for (int prec = 15; prec <= 16; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        std::sscanf(probe, "%lf", &parsed);
        if (parsed == v) return probe;
    }
    return buf;
}

// FNV-1a, for stable config fingerprints in report files.
inline std::uint64_t fnv1a_hash(std::span<const char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a_hash(const std::string& s) {
    return fnv1a_hash(std::span<const char>(s.data(), s.size()));
}

}  // namespace qmclab
