#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "disloc/decomposition.hpp"

namespace disloc {

enum class SubspaceRestriction { None, Even, Radial };

/// Sampled perturbation potentials over the problem window:
/// f(u) = sum V_i |u_i|^p h^N, g(u) = sum W_i |u_i|^q h^N.
struct PerturbationPair {
  std::vector<double> V;
  std::vector<double> W;
};

struct IsoperimetricProblem {
  EnergySpec energy;
  MassSpec mass;
  double t = 1.0;
  double window_lo = -20.0;
  double window_hi = 20.0;
  double h = 0.05; // level-0 spacing; h0 of the discretization
  SubspaceRestriction restriction = SubspaceRestriction::None;
  std::optional<PerturbationPair> perturbation;

  /// Zero grid function over the window (the solver's dof layout).
  GridFunction make_zero() const;
  GridFunction sample(const std::function<double(const std::vector<double>&)>& f) const;
  IsoperimetricProblem with_t(double new_t) const;
  /// Validates exponent ranges, t > 0, window sanity, perturbation
  /// nonnegativity/decay.  Throws std::invalid_argument with the field name.
  void validate() const;
};

struct RecenterEvent {
  int step = 0;
  IndexVec shift;
  double cropped_max = 0.0; // largest sample magnitude lost in the re-window
};

struct MinimizerReport {
  GridFunction minimizer;
  double value = 0.0;               // F(u*) or (F - f)(u*)
  double constraint_residual = 0.0; // |G(u*) (+ g(u*)) - t|
  double el_residual = 0.0;
  double multiplier = 0.0;
  std::vector<double> energy_trace;
  std::vector<RecenterEvent> recenter_log;
  int iterations = 0;
  bool converged = false;
  int best_start = 0;
  std::string note;
};

struct MinimizeOptions {
  double eps_energy = 1e-10;
  double eps_el = 1e-6;
  int max_iterations = 200000;
  double alpha0 = 0.1;
  int restarts = 3;
  std::uint64_t seed = 42;
  int recenter_interval = 25;
  double localization_radius = 4.0; // physical; penalized runs stop recentering inside
  int workers = 1;
  int trace_stride = 50;
  const TestFunctionalFamily* family = nullptr; // recentering scans; built if null
};

/// Recentered normalized descent for c_t = inf { F : G = t }: step along the
/// constrained gradient, restore the constraint by exact multiplicative
/// rescaling, recenter at the scan argmax.  Multi-start, best run returned.
MinimizerReport minimize_isoperimetric(const IsoperimetricProblem& prob,
                                       const MinimizeOptions& opts = {});

/// Same flow for c'_t = inf { F - f : G + g = t }.  Requires a perturbation;
/// recentering stops once the iterate localizes near the potential well.
MinimizerReport minimize_penalized(const IsoperimetricProblem& prob,
                                   const MinimizeOptions& opts = {});

struct SubadditivityRow {
  double tau = 0.0;
  double c_tau = 0.0;
  double c_complement = 0.0; // c_{t - tau}
  double c_t = 0.0;
  double margin = 0.0;       // c_tau + c_{t-tau} - c_t
  bool weak_ok = true;       // c_t <= c_tau + c_{t-tau} + 2 * solver_tol
  bool strict = false;       // margin > 0
  bool solver_ok = true;
};

struct SubadditivityTable {
  double t = 0.0;
  double solver_tol = 0.0;
  std::vector<SubadditivityRow> rows;
};

SubadditivityTable subadditivity_table(const IsoperimetricProblem& prob,
                                       const std::vector<double>& taus,
                                       const MinimizeOptions& opts = {},
                                       double solver_tol = 0.01);

struct CoercivityReport {
  double min_energy = 0.0;
  int samples = 0;
  int rejected = 0;
  double floor_used = 0.0;
  bool pass = false;
};

/// Randomized probe of inf { F(u) : G(a u) > b }: smooth random samples are
/// rescaled to sit just above the constraint and the minimum energy is
/// reported; PASS when it stays above the floor.
CoercivityReport coercivity_probe(const EnergySpec& energy, const MassSpec& mass,
                                  double a, double b, double window_lo,
                                  double window_hi, double h, int n_samples,
                                  std::uint64_t seed, double floor_value = 0.1);

enum class SequenceClass { ConvergesAfterRecentering, Vanishing, Dichotomy };

struct ClassificationReport {
  SequenceClass verdict = SequenceClass::Dichotomy;
  std::vector<double> mass_split; // tau_n = G(w^(n))
  DecompositionResult decomposition;
  std::string note;
};

struct ClassifyOptions {
  DecomposeOptions decompose;
  double delta = 0.05;      // single-profile mass share 1 - delta
  double vanish_tol = 0.05; // final defect bound for the vanishing verdict
};

/// Decomposes the sequence and reads off the classical trichotomy.
ClassificationReport classify_minimizing_sequence(
    const FunctionSequence& seq, const IsoperimetricProblem& prob,
    const TestFunctionalFamily& fam, const ClassifyOptions& opts = {});

} // namespace disloc
