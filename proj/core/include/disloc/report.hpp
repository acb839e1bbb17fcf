#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace disloc {

enum class Verdict { Pass, Fail, Caveat, Inconclusive };

std::string verdict_name(Verdict v);

struct CheckEntry {
  std::string name;
  Verdict verdict = Verdict::Fail;
  double tolerance = 0.0;
  std::string detail;
  std::map<std::string, double> numbers;
};

/// Canonical run report.  Identical config + seed must give identical bytes,
/// so wall-clock timing lives in a separate sidecar, never here.
struct RunReport {
  int schema_version = 1;
  std::string command;
  std::uint64_t seed = 0;
  std::string config_echo;
  std::vector<CheckEntry> checks;
  std::vector<std::string> artifacts;

  void add(const std::string& name, Verdict v, double tolerance,
           const std::string& detail,
           std::map<std::string, double> numbers = {});
  void add_pass_fail(const std::string& name, bool pass, double tolerance,
                     const std::string& detail,
                     std::map<std::string, double> numbers = {});
  bool any_fail() const;
  std::string to_json() const;
};

/// Writes report.json (canonical) plus timing.txt (non-canonical sidecar)
/// into the directory; returns the report path.
std::string write_report(const RunReport& report, const std::string& out_dir,
                         double elapsed_seconds);

} // namespace disloc
