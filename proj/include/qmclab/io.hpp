#pragma once

#include <span>
#include <string>

#include "qmclab/classical_mc.hpp"
#include "qmclab/distribution.hpp"
#include "qmclab/experiments.hpp"
#include "qmclab/grover_rudolph.hpp"

namespace qmclab {

// All writers emit deterministic bytes for identical inputs: fixed headers,
// '\n' line endings, round-trip double formatting.

/// Columns: index,x,probability
void write_pmf_csv(const DiscretizedDistribution& disc, const std::string& path);

/// Columns: index,amplitude,probability
void write_state_csv(const PreparedState& state, const std::string& path);

/// Columns: iteration,interval_index,theta
void write_angles_csv(const AngleSchedule& schedule, const std::string& path);

/// Columns: estimator,seed,n_samples,cost_units,estimate,true_value,sq_error
void write_records_csv(std::span<const EstimateRecord> records, const std::string& path);

/// Columns: target,n_prep_samples,n_queries,cost_units,rmse,stderr
void write_report_csv(const ScalingReport& report, const std::string& path);

/// Object {"arm", "slope", "ci95", "config_hash"}
void write_report_json(const ScalingReport& report, const std::string& path);

void write_decomposition_json(const DecompositionResult& result, const std::string& path);

}  // namespace qmclab
