#include "qmclab/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "qmclab/numerics.hpp"

namespace qmclab {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline translation
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

char hash_hex_digit(std::uint64_t v) {
    return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10);
}

std::string hash_hex(std::uint64_t h) {
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = hash_hex_digit(h & 0xf);
        h >>= 4;
    }
    return s;
}

}  // namespace

void write_pmf_csv(const DiscretizedDistribution& disc, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "index,x,probability\n";
    for (std::size_t i = 0; i < disc.size(); ++i) {
        out << i << ',' << format_double(disc.grid_x(i)) << ','
            << format_double(disc.probs[i]) << '\n';
    }
}

void write_state_csv(const PreparedState& state, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "index,amplitude,probability\n";
    for (std::size_t i = 0; i < state.size(); ++i) {
        out << i << ',' << format_double(state.amps[i]) << ','
            << format_double(state.amps[i] * state.amps[i]) << '\n';
    }
}

void write_angles_csv(const AngleSchedule& schedule, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "iteration,interval_index,theta\n";
    for (std::size_t m = 0; m < schedule.theta.size(); ++m) {
        for (std::size_t i = 0; i < schedule.theta[m].size(); ++i) {
            out << m << ',' << i << ',' << format_double(schedule.theta[m][i]) << '\n';
        }
    }
}

void write_records_csv(std::span<const EstimateRecord> records, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "estimator,seed,n_samples,cost_units,estimate,true_value,sq_error\n";
    for (const auto& rec : records) {
        out << estimator_name(rec.estimator) << ',' << rec.seed << ','
            << rec.queries_or_samples << ',' << rec.cost_units << ','
            << format_double(rec.estimate) << ',' << format_double(rec.true_value) << ','
            << format_double(rec.sq_error()) << '\n';
    }
}

void write_report_csv(const ScalingReport& report, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "target,n_prep_samples,n_queries,cost_units,rmse,stderr\n";
    for (const auto& row : report.rows) {
        out << format_double(row.target) << ',' << row.n_prep_samples << ',' << row.n_queries
            << ',' << row.cost_units << ',' << format_double(row.rmse) << ','
            << format_double(row.stderr_) << '\n';
    }
}

void write_report_json(const ScalingReport& report, const std::string& path) {
    nlohmann::json j;
    j["arm"] = arm_name(report.arm);
    j["slope"] = report.fit.slope;
    j["ci95"] = {report.fit.ci_lo, report.fit.ci_hi};
    j["config_hash"] = hash_hex(report.config_hash);
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_decomposition_json(const DecompositionResult& result, const std::string& path) {
    nlohmann::json j;
    j["lhs"] = result.lhs;
    j["rhs"] = result.rhs;
    j["cross"] = result.cross;
    j["lhs_stderr"] = result.lhs_stderr;
    j["rhs_stderr"] = result.rhs_stderr;
    j["cross_stderr"] = result.cross_stderr;
    j["diff_stderr"] = result.diff_stderr;
    j["k"] = result.k;
    j["p_l"] = result.p_l;
    j["mean_eps_sq"] = result.mean_eps_sq;
    j["repetitions"] = result.repetitions;
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace qmclab
