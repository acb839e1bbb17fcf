#pragma once

#include <string>
#include <vector>

#include "disloc/decomposition.hpp"

namespace disloc {

enum class SymmetryKind { None, Even, Radial };

/// Fixed-subspace description, implemented as an averaging projector.  Even
/// symmetry is the two-element reflection group; radial stands for the full
/// rotation family, realized on the lattice as exact shell averaging.
struct SymmetrySpec {
  SymmetryKind kind = SymmetryKind::None;

  static SymmetrySpec even() { return {SymmetryKind::Even}; }
  static SymmetrySpec radial() { return {SymmetryKind::Radial}; }
  static SymmetrySpec none() { return {SymmetryKind::None}; }

  /// Even symmetry has |C| = 2; the energy-replication argument needs
  /// arbitrarily large subsets, so finite groups only earn a caveat.
  bool finite_group() const { return kind == SymmetryKind::Even; }
};

/// Averaging projector onto the fixed subspace.  Even: (u(x) + u(-x)) / 2.
/// Radial (N >= 2): average over the exact lattice shells {|i|^2 = m}, which
/// makes the projector exactly idempotent.
GridFunction project_symmetric(const GridFunction& u, const SymmetrySpec& sym);

/// Integer orthogonal map x -> R x, the symmetry element of the conjugation
/// test.
struct SymmetryElement {
  int dim = 1;
  std::vector<int> matrix; // row-major dim x dim

  static SymmetryElement identity(int dim);
  static SymmetryElement reflection(int dim); // x -> -x
  static SymmetryElement rotation90();        // 2D quarter turn

  bool is_identity() const;
  IndexVec map(const IndexVec& y) const;
};

struct ConjugationReport {
  bool pass = false;
  std::vector<double> distances; // of g_k^-1 c g_k to the conjugacy baseline
  std::string note;
};

/// For shifts g_k = T_{y_k} and a linear symmetry c, the conjugate
/// g_k^-1 c g_k acts as c composed with the shift (R - I) y_k; divergence of
/// that parameter is the tested surrogate.  c = id never passes.
ConjugationReport conjugation_divergence_check(const SymmetryElement& c,
                                               const DislocationSequence& shifts,
                                               const DivergenceOptions& opts = {});

enum class CompactnessVerdict { Pass, Fail, Caveat };

struct SymmetricCompactnessReport {
  CompactnessVerdict verdict = CompactnessVerdict::Fail;
  std::vector<int> escaping_profiles; // 1-based indices
  TrendCheck remainder_norm_trend;
  DecompositionResult decomposition;
  std::string note;
};

struct SymmetricCompactnessOptions {
  DecomposeOptions decompose;
  double fixed_residual_tol = 1e-10; // membership in the fixed subspace
  double norm_tol = 1e-3;            // strong remainder convergence
  double divergence_threshold = 8.0;
};

/// Decomposes a sequence from the fixed subspace; PASS needs every profile
/// to carry non-diverging dislocations and the remainder to converge in the
/// target norm.  Escaping profiles under a finite symmetry group yield
/// CAVEAT (the replication bound needs arbitrarily many conjugates), under
/// an infinite one FAIL.
SymmetricCompactnessReport symmetric_compactness_test(
    const FunctionSequence& seq, const SymmetrySpec& sym,
    const MassSpec& mass, const TestFunctionalFamily& fam,
    const SymmetricCompactnessOptions& opts = {});

enum class NovanishVerdict { Pass, Fail, HypothesisViolated };

struct NovanishReport {
  NovanishVerdict verdict = NovanishVerdict::Fail;
  std::vector<double> far_defects; // hypothesis probe per member
  TrendCheck convergence_trend;    // target norm of u_k minus the weak limit
  std::string note;
};

struct NovanishOptions {
  double far_radius = 0.0; // 0: derived from the family's scan radius / 2
  double hypothesis_tol = 1e-6;
  double norm_tol = 1e-3;
  WeakLimitOptions weak_limit;
  int workers = 1;
};

/// For sequences confined to a fixed window: checks that strongly shifted
/// recenterings pair to nothing (the no-escape hypothesis), then that
/// u_k converges to its weak limit in the target norm.
NovanishReport novanish_compactness_test(const FunctionSequence& seq,
                                         const MassSpec& mass,
                                         const TestFunctionalFamily& fam,
                                         const NovanishOptions& opts = {});

} // namespace disloc
