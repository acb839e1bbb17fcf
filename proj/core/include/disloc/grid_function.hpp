#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace disloc {

using Index = std::int64_t;
using IndexVec = std::vector<Index>;

/// Compactly supported real-valued function sampled on a virtual unbounded
/// lattice at dyadic refinement level j (spacing h0 * 2^-j).  Samples are
/// stored densely over a window [offset, offset+shape); everything outside
/// the window is implicitly zero.  Values are understood as the piecewise
/// multilinear interpolant of the samples, which is what makes dyadic
/// refinement exact for piecewise-linear data.
class GridFunction {
public:
  GridFunction() = default;
  GridFunction(int dim, IndexVec offset, IndexVec shape, int level, double h0,
               std::vector<double> samples);

  static GridFunction zeros(int dim, IndexVec offset, IndexVec shape,
                            int level, double h0);
  /// The canonical empty (identically zero) function: 1x..x1 window at the
  /// origin with a single zero sample.
  static GridFunction zero_like(int dim, double h0, int level = 0);
  /// Sample a callable f(x) over the physical box [lo, hi]^N at the given
  /// level; the box corners are snapped to lattice nodes.
  static GridFunction sample(int dim, double lo, double hi, int level,
                             double h0,
                             const std::function<double(const std::vector<double>&)>& f);

  int dim() const { return dim_; }
  int level() const { return level_; }
  double h0() const { return h0_; }
  /// Effective spacing h0 * 2^-level.
  double spacing() const;
  const IndexVec& offset() const { return offset_; }
  const IndexVec& shape() const { return shape_; }
  const std::vector<double>& samples() const { return samples_; }
  std::vector<double>& mutable_samples() { return samples_; }
  std::size_t size() const { return samples_.size(); }

  /// Value at a global lattice index (level-j units); zero outside the window.
  double value_at(const IndexVec& global) const;
  double& local(std::size_t flat) { return samples_[flat]; }
  double local(std::size_t flat) const { return samples_[flat]; }

  /// Physical coordinates of the node with local flat index `flat`.
  std::vector<double> node_position(std::size_t flat) const;
  /// Global lattice index of the node with local flat index `flat`.
  IndexVec node_index(std::size_t flat) const;

  bool is_zero() const;
  double max_abs() const;

  /// Metadata edits; these are the exact group actions.
  void translate(const IndexVec& delta);
  void dilate(int dj, double sample_scale);

  GridFunction scaled(double c) const;
  /// u + c*v with exact dyadic reconciliation (the coarser operand is refined
  /// by multilinear interpolation).  Throws if h0 differs.
  GridFunction add_scaled(const GridFunction& v, double c) const;
  GridFunction operator+(const GridFunction& v) const { return add_scaled(v, 1.0); }
  GridFunction operator-(const GridFunction& v) const { return add_scaled(v, -1.0); }

  /// Refined copy at a finer level (target >= level); exact for piecewise
  /// multilinear data.
  GridFunction refined_to(int target_level) const;

  /// Copy with all-zero boundary slabs removed.  Never empties the window
  /// entirely; an identically zero function trims to a single node.
  GridFunction trimmed() const;

  /// Zero-padded/re-windowed copy over [new_offset, new_offset+new_shape).
  /// Samples falling outside the new window are dropped; the caller is
  /// responsible for checking that nothing of interest is lost.
  GridFunction rebased(const IndexVec& new_offset, const IndexVec& new_shape) const;

  bool same_layout(const GridFunction& other) const;

private:
  void check_invariants() const;
  std::size_t flat_index(const IndexVec& local) const;

  int dim_ = 1;
  IndexVec offset_{0};
  IndexVec shape_{1};
  int level_ = 0;
  double h0_ = 1.0;
  std::vector<double> samples_{0.0};
};

/// Throws std::invalid_argument unless a and b share dim and h0.
void require_compatible(const GridFunction& a, const GridFunction& b);

} // namespace disloc
