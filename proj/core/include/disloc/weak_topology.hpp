#pragma once

#include <string>
#include <vector>

#include "disloc/sequence.hpp"
#include "disloc/test_family.hpp"
#include "disloc/trend.hpp"

namespace disloc {

struct WeakLimitOptions {
  double tol = 1e-3;        // pairing-discrepancy tolerance
  double point_tol = 1e-8;  // pointwise stability threshold for the mask
  bool mask_unstable = true;
};

struct WeakLimitEstimate {
  bool converged = false;
  GridFunction estimate;                // final tail member, unstable nodes zeroed
  std::vector<double> discrepancies;    // max_i |<v_k - v_last, phi_i>| per member
  TrendCheck trend;
  bool masked_any = false;
  std::string note;
};

/// Estimates the weak limit of a recentered tail.  Convergence is judged by
/// the pairing discrepancies against the family (decreasing and below tol
/// over the final half); the returned estimate is the final tail member with
/// nodes that are not pointwise stable across the final half zeroed out, so
/// that content escaping the test supports does not leak into profiles.
WeakLimitEstimate estimate_weak_limit(const std::vector<GridFunction>& tail,
                                      const TestFunctionalFamily& fam,
                                      const WeakLimitOptions& opts = {});

struct CocompactnessOptions {
  double defect_tol = 0.05;
  double norm_tol = 0.2;
  double floor_value = 1e-12;
  int workers = 1;
};

enum class CocompactnessVerdict { Consistent, PremiseNotTriggered, Violation };

struct CocompactnessReport {
  std::vector<double> defects;      // d_weak_defect(u_k)
  std::vector<double> target_norms; // G(u_k)^(1/q)
  TrendCheck defect_trend;
  TrendCheck norm_trend;
  CocompactnessVerdict verdict = CocompactnessVerdict::Consistent;
  std::vector<int> offending; // indices where the conclusion trend fails
  std::string note;
};

/// Pairs the D-weak defect trend with the target-norm trend on one sequence:
/// if the defect tends to zero the target norm must as well.  A sequence
/// whose defect stays away from zero cannot witness a violation and is
/// reported as premise-not-triggered.
CocompactnessReport cocompactness_check(const FunctionSequence& seq,
                                        const MassSpec& mass,
                                        const TestFunctionalFamily& fam,
                                        const CocompactnessOptions& opts = {});

} // namespace disloc
