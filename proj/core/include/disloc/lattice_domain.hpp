#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "disloc/dislocation.hpp"

namespace disloc {

/// Decidable membership predicate over the level-0 lattice.
class LatticeDomain {
public:
  using Predicate = std::function<bool(const IndexVec&)>;

  static LatticeDomain half_space(IndexVec normal, Index offset); // x.n >= offset
  static LatticeDomain ball(IndexVec center, double radius);
  static LatticeDomain ball_union(std::vector<std::pair<IndexVec, double>> balls);
  /// Union of B(k^2 e_axis, k) for k = 1..count.
  static LatticeDomain expanding_balls(int dim, int axis, int count);
  static LatticeDomain finite_set(int dim, std::vector<IndexVec> points);
  static LatticeDomain box(IndexVec lo, IndexVec hi);
  /// Membership by x mod periods landing in the motif set.
  static LatticeDomain periodic(int dim, IndexVec periods,
                                std::vector<IndexVec> motif);
  static LatticeDomain from_predicate(int dim, Predicate pred,
                                      std::string description);

  bool contains(const IndexVec& x) const { return pred_(x); }
  int dim() const { return dim_; }
  const std::string& description() const { return description_; }

private:
  int dim_ = 1;
  Predicate pred_;
  std::string description_;
};

enum class FlaskVerdict { Pass, Fail, Inconclusive };

struct FlaskFamilyResult {
  FlaskVerdict verdict = FlaskVerdict::Inconclusive;
  Dislocation witness;      // meaningful on PASS
  IndexVec uncovered_point; // evidence on FAIL/INCONCLUSIVE
  std::size_t liminf_size = 0;
  std::string note;
};

struct FlaskReport {
  FlaskVerdict verdict = FlaskVerdict::Inconclusive;
  std::vector<FlaskFamilyResult> families;
  std::string note;
};

struct FlaskOptions {
  Index window_radius = 24;  // liminf is computed on [-R, R]^N
  Index witness_radius = 8;  // candidate witness shifts per axis
  Index interior_margin = 4; // uncovered points this deep certify FAIL
  double h0 = 1.0;
  DivergenceOptions divergence;
};

/// Geometric flask criterion on the lattice: for each (diverging or
/// constant) shift family, the liminf of the shifted copies over the scan
/// window must be covered by a single shifted copy of the domain.  PASS only
/// with a verified witness; uncovered points near the window boundary give
/// INCONCLUSIVE rather than a false verdict.
FlaskReport flask_check(const LatticeDomain& dom,
                        const std::vector<DislocationSequence>& shift_families,
                        const FlaskOptions& opts = {});

} // namespace disloc
