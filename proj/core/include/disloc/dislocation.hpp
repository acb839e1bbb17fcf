#pragma once

#include <string>
#include <vector>

#include "disloc/energy.hpp"
#include "disloc/grid_function.hpp"

namespace disloc {

/// Group element g = T_a D_j: dyadic dilation by level j followed by a
/// translation a = shift_num * h0 * 2^-shift_scale.  Shifts are stored as
/// dyadic rationals so that compose/invert stay exact: inverses of
/// lattice-resolution shifts land on coarser dyadic scales.  Canonical form
/// keeps shift_scale minimal and nonnegative.
struct Dislocation {
  int dilation = 0;
  IndexVec shift_num;
  int shift_scale = 0;

  static Dislocation identity(int dim);
  static Dislocation lattice_shift(IndexVec y, int scale = 0);
  static Dislocation dilation_by(int j, int dim);
  static Dislocation make(int j, IndexVec y, int scale);

  int dim() const { return static_cast<int>(shift_num.size()); }
  bool is_identity() const;
  bool has_dilation() const { return dilation != 0; }
  /// Physical shift components in units of h0.
  std::vector<double> shift_physical() const;
  /// Shift in units of the level-L lattice; throws if not integral there.
  IndexVec shift_at_level(int L) const;

  bool operator==(const Dislocation& other) const = default;
  std::string to_string() const;
};

Dislocation compose(const Dislocation& g1, const Dislocation& g2);
Dislocation invert(const Dislocation& g);

/// Action on a grid function: dilation edits the level and multiplies the
/// samples by 2^(j(N-p)/p); the translation is an offset edit.  A shift
/// living on a finer dyadic scale than the operand triggers an exact
/// refinement first.  Dilations are rejected in inhomogeneous mode.
GridFunction apply(const Dislocation& g, const GridFunction& u,
                   const EnergySpec& spec);
GridFunction apply_inverse(const Dislocation& g, const GridFunction& u,
                           const EnergySpec& spec);

/// |j1 - j2| + h0 * ||a1 - a2|| with a_i the physical shifts.
double group_distance(const Dislocation& g1, const Dislocation& g2,
                      double h0 = 1.0);

struct DislocationSequence {
  int k0 = 1;
  std::vector<Dislocation> elems;

  int size() const { return static_cast<int>(elems.size()); }
  const Dislocation& at(int k) const { return elems.at(static_cast<std::size_t>(k - k0)); }
  static DislocationSequence constant(int k0, int count, const Dislocation& g);
};

struct DivergenceReport {
  bool diverges = false;
  std::vector<double> distances;
  std::string note;
};

struct DivergenceOptions {
  double threshold = 8.0; // physical units
  double h0 = 1.0;
};

/// Finite surrogate for g_k -> 0 in the weak operator sense: the distance to
/// the identity must be strictly increasing over the final third of indices
/// and exceed the threshold at the end.
DivergenceReport diverges(const DislocationSequence& seq,
                          const DivergenceOptions& opts = {});

} // namespace disloc
