#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disloc/config.hpp"
#include "disloc/report.hpp"

namespace disloc {

struct RunConfig {
  std::string command; // decompose, minimize, subadd, verify-axioms, flask,
                       // symmetry, cocompact
  Config config;
  std::string out_dir;      // empty: keep results in memory only
  std::uint64_t seed = 42;
  int workers = 0;          // 0: DISLOC_WORKERS / hardware default
  std::vector<double> taus; // subadd command line override
};

/// Dispatches to the owning module, assembles the canonical report, and
/// writes report.json plus CSV traces into out_dir when set.  Exit-status
/// contract: 0 without FAIL verdicts, 1 otherwise (validation errors throw
/// ConfigError / std::invalid_argument for the CLI to map to status 2).
RunReport run(const RunConfig& rc);

} // namespace disloc
