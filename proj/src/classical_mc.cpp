#include "qmclab/classical_mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmclab/numerics.hpp"

namespace qmclab {

CostModel CostModel::for_target(int n, double eps_target) {
    if (!(eps_target > 0.0)) throw std::invalid_argument("cost model: eps_target must be > 0");
    CostModel model;
    model.bits_per_sample = n;
    model.precision_bits =
        std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / eps_target))));
    return model;
}

std::string estimator_name(Estimator e) {
    switch (e) {
        case Estimator::ClassicalMean: return "classical_mean";
        case Estimator::PlBinomial: return "pl_binomial";
        case Estimator::QuantumMLAE: return "quantum_mlae";
        case Estimator::GRPipeline: return "gr_pipeline";
    }
    return "unknown";
}

DiscreteSampler::DiscreteSampler(const DiscretizedDistribution& disc) {
    cdf_.resize(disc.size());
    CompensatedAccumulator acc;
    for (std::size_t i = 0; i < disc.size(); ++i) {
        acc.add(disc.probs[i]);
        cdf_[i] = acc.value();
    }
    cdf_.back() = 1.0;  // guard against roundoff leaving the last bucket unreachable
}

std::size_t DiscreteSampler::sample(Rng& rng) const {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::size_t>(it - cdf_.begin());
}

EstimateRecord estimate_mean(const DiscretizedDistribution& disc, std::uint64_t n_samples,
                             std::uint64_t seed) {
    return estimate_mean(disc, n_samples, seed,
                         CostModel::for_target(disc.n, 1.0 / std::sqrt(static_cast<double>(
                                                           n_samples))));
}

EstimateRecord estimate_mean(const DiscretizedDistribution& disc, std::uint64_t n_samples,
                             std::uint64_t seed, const CostModel& model) {
    if (n_samples < 1) throw std::invalid_argument("estimate_mean requires n_samples >= 1");
    const DiscreteSampler sampler(disc);
    Rng rng(seed);
    CompensatedAccumulator acc;
    for (std::uint64_t t = 0; t < n_samples; ++t) {
        acc.add(static_cast<double>(sampler.sample(rng)));
    }
    EstimateRecord record;
    record.estimator = Estimator::ClassicalMean;
    record.estimate = acc.value() / static_cast<double>(n_samples);
    record.true_value = exact_mean(disc);
    record.queries_or_samples = n_samples;
    record.cost_units = n_samples * static_cast<std::uint64_t>(model.ops_per_sample());
    record.seed = seed;
    return record;
}

RmseResult rmse_study(const std::function<double(std::uint64_t)>& estimator_closure,
                      double true_value, int repetitions, std::uint64_t seed, int threads) {
    if (repetitions < 30) throw std::invalid_argument("rmse_study requires >= 30 repetitions");
    std::vector<double> sq_errors(static_cast<std::size_t>(repetitions));
    parallel_for(sq_errors.size(), threads, [&](std::size_t rep) {
        const double est = estimator_closure(derive_seed(seed, rep));
        const double e = est - true_value;
        sq_errors[rep] = e * e;
    });
    Rng boot_rng(derive_seed(seed, 0x626f6f74ull));  // independent resampling stream
    const BootstrapSummary summary = bootstrap_rmse(sq_errors, 1000, boot_rng);
    return RmseResult{summary.point, summary.stderr_};
}

double sampling_error_inflation_bound(double mu_d, double eps_s_max) {
    return std::abs(mu_d) * eps_s_max;
}

}  // namespace qmclab
