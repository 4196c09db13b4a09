#include "qmclab/numerics.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

namespace qmclab {

BootstrapSummary bootstrap_statistic(std::span<const double> sample,
                                     const std::function<double(std::span<const double>)>& stat,
                                     int resamples, Rng& rng) {
    BootstrapSummary out;
    out.point = stat(sample);
    if (sample.size() < 2 || resamples < 2) {
        out.ci_lo = out.ci_hi = out.point;
        return out;
    }
    std::vector<double> replicate(sample.size());
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(resamples));
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < sample.size(); ++i) {
            replicate[i] = sample[rng.next_below(sample.size())];
        }
        stats.push_back(stat(replicate));
    }
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= static_cast<double>(stats.size());
    double var = 0.0;
    for (double s : stats) var += (s - mean) * (s - mean);
    var /= static_cast<double>(stats.size() - 1);
    out.stderr_ = std::sqrt(var);
    std::sort(stats.begin(), stats.end());
    out.ci_lo = percentile(stats, 0.025);
    out.ci_hi = percentile(stats, 0.975);
    return out;
}

BootstrapSummary bootstrap_rmse(std::span<const double> sq_errors, int resamples, Rng& rng) {
    auto rmse = [](std::span<const double> sq) {
        return std::sqrt(compensated_sum(sq) / static_cast<double>(sq.size()));
    };
    return bootstrap_statistic(sq_errors, rmse, resamples, rng);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(count, static_cast<std::size_t>(resolve_threads(threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::size_t chunk = (count + static_cast<std::size_t>(workers) - 1) /
                              static_cast<std::size_t>(workers);
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi]() {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qmclab
