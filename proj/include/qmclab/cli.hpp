#pragma once

#include <string>
#include <vector>

namespace qmclab::cli {

// Fixed default master seed; default runs are reproducible by construction.
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Entry point behind main(). Exit codes: 0 success, 2 flag/config parse
/// error, 3 infeasible experiment, 4 numeric-degeneracy flag under --strict,
/// 1 anything else. Failures print one machine-readable `error: {...}` line
/// to stderr.
int run(const std::vector<std::string>& args);

}  // namespace qmclab::cli
