#pragma once

#include <string>
#include <vector>

#include "disloc/weak_topology.hpp"

namespace disloc {

struct DecomposeOptions {
  double eps_stop = 1e-3;          // remainder defect target
  double eps_profile = 1e-4;       // minimum accepted profile energy
  int max_profiles = 8;
  WeakLimitOptions weak_limit;
  int workers = 1;
  int peak_pool = 3;               // secondary scan peaks per round (t_n ledger)
  double peak_separation = 2.0;    // physical separation between pooled peaks
  double dust_tol = 1e-13;         // relative floor: subtraction dust in the
                                   // remainders below this is snapped to zero
};

struct ExtractionRound {
  int round = 0;
  std::vector<double> defect_trace;  // per member, before this round's extraction
  double defect_before = 0.0;        // max over the final half
  double t_estimate = 0.0;           // sup of candidate-pool profile energies
  double accepted_energy = 0.0;
  bool half_rule_ok = true;          // accepted_energy >= t_estimate / 2
  bool accepted = false;
  std::string note;
};

struct DecompositionResult {
  std::vector<GridFunction> profiles;            // w^(n); w^(1) may be zero
  std::vector<DislocationSequence> dislocations; // g_k^(n); first is identity
  std::vector<double> profile_energies;
  double energy_sup_tail = 0.0;                  // max F(u_k) over the final half
  std::vector<ExtractionRound> rounds;
  std::vector<GridFunction> remainders;          // v_k after the last extraction
  bool truncated = false;
  bool round_failure = false;
  std::string failure_note;
  int k0 = 1;
  double h0 = 1.0;

  int profile_count() const { return static_cast<int>(profiles.size()); }
};

/// Iterative profile extraction.  Round one tries the identity dislocation;
/// later rounds recenter each member at its scan argmax, estimate the weak
/// limit of the recentered tail, and subtract the dislocated profile.  Stops
/// when the remainder defect falls under eps_stop, a candidate profile drops
/// under eps_profile, or max_profiles is hit (flagged as truncation).
DecompositionResult decompose(const FunctionSequence& seq,
                              const EnergySpec& spec,
                              const TestFunctionalFamily& fam,
                              const DecomposeOptions& opts = {});

struct VerifyReport {
  std::string name;
  bool pass = false;
  std::string detail;
  std::vector<double> values;
  std::vector<std::string> rows;
};

/// Pairwise separation of the dislocation sequences: the distance of
/// g_m^-1 g_n to the identity must grow over the tail and exceed threshold.
VerifyReport verify_separation(const DecompositionResult& res,
                               double threshold = 8.0);

/// Profile energies must not exceed the tail energy sup (plus tol); the
/// slack is reported.
VerifyReport verify_energy_inequality(const DecompositionResult& res,
                                      const FunctionSequence& seq,
                                      const EnergySpec& spec,
                                      double tol = 1e-3);

/// |F(sum_n g_k^n w^n) - sum_n F(w^n)| must decay over the tail.
VerifyReport verify_additivity(const DecompositionResult& res,
                               const EnergySpec& spec, double tol = 1e-4);

/// Remainder defect and remainder target norm must both decay; the
/// cocompactness-backed strong-convergence check of the reconstruction.
VerifyReport verify_reconstruction(const DecompositionResult& res,
                                   const FunctionSequence& seq,
                                   const EnergySpec& spec, const MassSpec& mass,
                                   const TestFunctionalFamily& fam,
                                   double defect_tol = 1e-3,
                                   double norm_tol = 1e-3, int workers = 1);

/// sup_k F(sum_{n>=m} g_k^n w^n) must be non-increasing in m with final
/// value below tol.
VerifyReport verify_uniform_tail(const DecompositionResult& res,
                                 const EnergySpec& spec, double tol = 1e-6);

} // namespace disloc
