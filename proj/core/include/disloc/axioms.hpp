#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace disloc {

struct AxiomCheck {
  std::string name;
  bool pass = false;
  double tolerance = 0.0;
  std::string detail;
};

struct AxiomSuiteOptions {
  std::uint64_t seed = 42;
  int samples = 200;
  std::vector<std::string> select; // empty: run everything
  std::string inject_fault;        // "action-scale" breaks the group action
  int workers = 1;
};

/// Names: gauge-homogeneity, gauge-triangle, gauge-positivity,
/// gauge-consistency, action-invariance, newii-surrogate, wbl, w1bl,
/// brezis-lieb, weak-null.
std::vector<AxiomCheck> run_axiom_suite(const AxiomSuiteOptions& opts);

} // namespace disloc
