#include "disloc/weak_topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace disloc {

WeakLimitEstimate estimate_weak_limit(const std::vector<GridFunction>& tail,
                                      const TestFunctionalFamily& fam,
                                      const WeakLimitOptions& opts) {
  if (tail.size() < 4)
    throw std::invalid_argument(
        "estimate_weak_limit: need at least 4 tail members");
  WeakLimitEstimate out;

  // Pairings against the family at its reference positions; discrepancy of
  // member k is max_i |<v_k, phi_i> - <v_last, phi_i>| by linearity.
  const std::size_t n = tail.size();
  const std::size_t nm = fam.members().size();
  std::vector<std::vector<double>> p(n, std::vector<double>(nm, 0.0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < nm; ++m)
      p[k][m] = pairing(tail[k], fam.members()[m]);
  // The final member's self-discrepancy is identically zero and carries no
  // information, so the trend runs over k = 0 .. n-2 only.
  out.discrepancies.resize(n - 1, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double d = 0.0;
    for (std::size_t m = 0; m < nm; ++m)
      d = std::max(d, std::abs(p[k][m] - p[n - 1][m]));
    out.discrepancies[k] = d;
  }
  out.trend = decreasing_tail(out.discrepancies, opts.tol, opts.tol, 0.5);
  out.converged = out.trend.pass();

  // Estimate: final member with pointwise-unstable nodes zeroed, so that
  // content still moving through the window does not land in the limit.
  const std::size_t half_start = n - (n + 1) / 2;
  int lvl = 0;
  for (std::size_t k = half_start; k < n; ++k)
    lvl = std::max(lvl, tail[k].level());
  std::vector<GridFunction> fine;
  fine.reserve(n - half_start);
  for (std::size_t k = half_start; k < n; ++k)
    fine.push_back(tail[k].level() == lvl ? tail[k] : tail[k].refined_to(lvl));
  GridFunction est = fine.back();
  if (opts.mask_unstable) {
    for (std::size_t flat = 0; flat < est.size(); ++flat) {
      const IndexVec g = est.node_index(flat);
      const double last = est.local(flat);
      for (std::size_t k = 0; k + 1 < fine.size(); ++k) {
        if (std::abs(fine[k].value_at(g) - last) > opts.point_tol) {
          est.local(flat) = 0.0;
          out.masked_any = true;
          break;
        }
      }
    }
  }
  out.estimate = est.trimmed();
  if (!out.converged)
    out.note = "pairing discrepancies not settled: " + out.trend.describe();
  return out;
}

CocompactnessReport cocompactness_check(const FunctionSequence& seq,
                                        const MassSpec& mass,
                                        const TestFunctionalFamily& fam,
                                        const CocompactnessOptions& opts) {
  const EnergySpec& energy = fam.energy();
  if (energy.mode == EnergyMode::Inhomogeneous) {
    const bool has_critical = energy.p < energy.dim;
    const double pstar = has_critical ? energy.critical_exponent() : 0.0;
    if (!(mass.q > energy.p) || (has_critical && !(mass.q < pstar)))
      throw std::invalid_argument(
          "cocompactness_check: need p < q < p* in inhomogeneous mode");
  } else {
    const double pstar = energy.critical_exponent();
    if (std::abs(mass.q - pstar) > 1e-9)
      throw std::invalid_argument(
          "cocompactness_check: homogeneous mode requires q = p*");
  }

  CocompactnessReport rep;
  for (const auto& u : seq.members()) {
    rep.defects.push_back(d_weak_defect(u, fam, opts.workers));
    rep.target_norms.push_back(target_norm(u, mass));
  }
  rep.defect_trend =
      decreasing_tail(rep.defects, opts.defect_tol, opts.floor_value, 0.5);
  rep.norm_trend =
      decreasing_tail(rep.target_norms, opts.norm_tol, opts.floor_value, 0.5);

  if (!rep.defect_trend.pass()) {
    rep.verdict = CocompactnessVerdict::PremiseNotTriggered;
    rep.note = "defect does not tend to zero on this sequence; nothing to test";
    return rep;
  }
  if (rep.norm_trend.pass()) {
    rep.verdict = CocompactnessVerdict::Consistent;
    rep.note = "defect and target norm both decay";
  } else {
    rep.verdict = CocompactnessVerdict::Violation;
    rep.note = "defect decays but the target norm does not: " +
               rep.norm_trend.describe();
    for (std::size_t i = static_cast<std::size_t>(rep.norm_trend.tail_start);
         i + 1 < rep.target_norms.size(); ++i)
      if (!(rep.target_norms[i + 1] < rep.target_norms[i]))
        rep.offending.push_back(seq.k0() + static_cast<int>(i) + 1);
    if (!(rep.target_norms.back() <= opts.norm_tol))
      rep.offending.push_back(seq.k1());
  }
  return rep;
}

} // namespace disloc
