#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qmclab/distribution.hpp"
#include "qmclab/rng.hpp"

namespace qmclab {

/// Abstract per-sample operation count for the digital sampler: the index
/// register contributes one comparison per bit (binary search over 2^n
/// cumulative masses) and the uniform draw one operation per precision bit.
struct CostModel {
    int bits_per_sample = 1;  // index bits, n
    int precision_bits = 1;   // ceil(log2(1 / eps_target)), at least 1

    int ops_per_sample() const { return bits_per_sample + precision_bits; }

    static CostModel for_target(int n, double eps_target);
};

struct CostLedger {
    std::uint64_t samples_drawn = 0;
    std::uint64_t cost_units = 0;  // samples_drawn * ops_per_sample
    CostModel cost_model;
};

enum class Estimator { ClassicalMean, PlBinomial, QuantumMLAE, GRPipeline };

std::string estimator_name(Estimator e);

struct EstimateRecord {
    Estimator estimator = Estimator::ClassicalMean;
    double estimate = 0.0;
    double true_value = 0.0;
    std::uint64_t queries_or_samples = 0;
    std::uint64_t cost_units = 0;
    std::uint64_t seed = 0;

    double sq_error() const {
        const double e = estimate - true_value;
        return e * e;
    }
};

/// Inverse-CDF sampler over a pmf: precomputed cumulative sums plus binary
/// search, O(log N_d) comparisons per draw.
class DiscreteSampler {
  public:
    explicit DiscreteSampler(const DiscretizedDistribution& disc);

    std::size_t sample(Rng& rng) const;
    std::size_t size() const { return cdf_.size(); }

  private:
    std::vector<double> cdf_;
};

/// Sample mean of n_samples indices drawn from the pmf. The cost ledger uses
/// CostModel::for_target(n, 1/sqrt(n_samples)) unless a model is supplied.
EstimateRecord estimate_mean(const DiscretizedDistribution& disc, std::uint64_t n_samples,
                             std::uint64_t seed);
EstimateRecord estimate_mean(const DiscretizedDistribution& disc, std::uint64_t n_samples,
                             std::uint64_t seed, const CostModel& model);

struct RmseResult {
    double rmse = 0.0;
    double stderr_ = 0.0;  // bootstrap standard error (1000 resamples)
};

/// Empirical RMSE of an estimator over repeated runs. The closure receives a
/// derived per-repetition seed; repetitions fan out over `threads` workers
/// with order-independent aggregation.
RmseResult rmse_study(const std::function<double(std::uint64_t)>& estimator_closure,
                      double true_value, int repetitions, std::uint64_t seed, int threads = 1);

/// Worst-case shift of the sampled mean when every cell probability errs by a
/// relative factor eps_s_max: |mu_s - mu_d| < eps_s_max * mu_d.
double sampling_error_inflation_bound(double mu_d, double eps_s_max);

}  // namespace qmclab
