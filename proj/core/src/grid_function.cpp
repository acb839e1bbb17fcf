#include "disloc/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace disloc {

namespace {

std::size_t total_size(const IndexVec& shape) {
  std::size_t n = 1;
  for (Index s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

} // namespace

GridFunction::GridFunction(int dim, IndexVec offset, IndexVec shape, int level,
                           double h0, std::vector<double> samples)
    : dim_(dim), offset_(std::move(offset)), shape_(std::move(shape)),
      level_(level), h0_(h0), samples_(std::move(samples)) {
  check_invariants();
}

void GridFunction::check_invariants() const {
  if (dim_ < 1 || dim_ > 4)
    throw std::invalid_argument("GridFunction: dim must be in [1,4], got " +
                                std::to_string(dim_));
  if (static_cast<int>(offset_.size()) != dim_ ||
      static_cast<int>(shape_.size()) != dim_)
    throw std::invalid_argument("GridFunction: offset/shape rank mismatch");
  for (Index s : shape_)
    if (s < 1) throw std::invalid_argument("GridFunction: empty window extent");
  if (!(h0_ > 0.0) || !std::isfinite(h0_))
    throw std::invalid_argument("GridFunction: base spacing must be positive");
  if (!(spacing() > 0.0))
    throw std::invalid_argument("GridFunction: effective spacing underflow");
  if (samples_.size() != total_size(shape_))
    throw std::invalid_argument("GridFunction: sample count does not match window");
  for (double v : samples_)
    if (!std::isfinite(v))
      throw std::invalid_argument("GridFunction: non-finite sample");
}

double GridFunction::spacing() const { return std::ldexp(h0_, -level_); }

GridFunction GridFunction::zeros(int dim, IndexVec offset, IndexVec shape,
                                 int level, double h0) {
  std::vector<double> s(total_size(shape), 0.0);
  return GridFunction(dim, std::move(offset), std::move(shape), level, h0,
                      std::move(s));
}

GridFunction GridFunction::zero_like(int dim, double h0, int level) {
  return zeros(dim, IndexVec(dim, 0), IndexVec(dim, 1), level, h0);
}

GridFunction GridFunction::sample(
    int dim, double lo, double hi, int level, double h0,
    const std::function<double(const std::vector<double>&)>& f) {
  if (!(hi > lo)) throw std::invalid_argument("GridFunction::sample: empty box");
  const double h = std::ldexp(h0, -level);
  const Index ilo = static_cast<Index>(std::ceil(lo / h - 1e-9));
  const Index ihi = static_cast<Index>(std::floor(hi / h + 1e-9));
  GridFunction u = zeros(dim, IndexVec(dim, ilo), IndexVec(dim, ihi - ilo + 1),
                         level, h0);
  std::vector<double> x(dim);
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    IndexVec g = u.node_index(flat);
    for (int d = 0; d < dim; ++d) x[d] = static_cast<double>(g[d]) * h;
    u.local(flat) = f(x);
  }
  u.check_invariants();
  return u;
}

std::size_t GridFunction::flat_index(const IndexVec& local) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d)
    flat = flat * static_cast<std::size_t>(shape_[d]) +
           static_cast<std::size_t>(local[d]);
  return flat;
}

double GridFunction::value_at(const IndexVec& global) const {
  IndexVec local(dim_);
  for (int d = 0; d < dim_; ++d) {
    Index l = global[d] - offset_[d];
    if (l < 0 || l >= shape_[d]) return 0.0;
    local[d] = l;
  }
  return samples_[flat_index(local)];
}

IndexVec GridFunction::node_index(std::size_t flat) const {
  IndexVec g(dim_);
  for (int d = dim_ - 1; d >= 0; --d) {
    g[d] = offset_[d] + static_cast<Index>(flat % static_cast<std::size_t>(shape_[d]));
    flat /= static_cast<std::size_t>(shape_[d]);
  }
  return g;
}

std::vector<double> GridFunction::node_position(std::size_t flat) const {
  IndexVec g = node_index(flat);
  std::vector<double> x(dim_);
  const double h = spacing();
  for (int d = 0; d < dim_; ++d) x[d] = static_cast<double>(g[d]) * h;
  return x;
}

bool GridFunction::is_zero() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](double v) { return v == 0.0; });
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

void GridFunction::translate(const IndexVec& delta) {
  if (static_cast<int>(delta.size()) != dim_)
    throw std::invalid_argument("translate: rank mismatch");
  for (int d = 0; d < dim_; ++d) offset_[d] += delta[d];
}

void GridFunction::dilate(int dj, double sample_scale) {
  level_ += dj;
  if (!(spacing() > 0.0))
    throw std::invalid_argument("dilate: effective spacing underflow");
  if (sample_scale != 1.0)
    for (double& v : samples_) v *= sample_scale;
}

GridFunction GridFunction::scaled(double c) const {
  GridFunction r = *this;
  for (double& v : r.samples_) v *= c;
  r.check_invariants();
  return r;
}

GridFunction GridFunction::refined_to(int target_level) const {
  if (target_level < level_)
    throw std::invalid_argument("refined_to: cannot coarsen exactly");
  GridFunction cur = *this;
  while (cur.level_ < target_level) {
    // One dyadic step: even nodes copy, odd nodes take midpoint averages.
    IndexVec noff(cur.dim_), nshape(cur.dim_);
    for (int d = 0; d < cur.dim_; ++d) {
      noff[d] = 2 * cur.offset_[d];
      nshape[d] = 2 * (cur.shape_[d] - 1) + 1;
    }
    GridFunction fine = zeros(cur.dim_, noff, nshape, cur.level_ + 1, cur.h0_);
    const int D = cur.dim_;
    for (std::size_t flat = 0; flat < fine.size(); ++flat) {
      IndexVec g = fine.node_index(flat);
      // Average the 2^m coarse corners adjacent across the odd axes.
      int odd_mask = 0;
      IndexVec base(D);
      for (int d = 0; d < D; ++d) {
        if (g[d] & 1) odd_mask |= (1 << d);
        base[d] = g[d] >> 1; // floor for even, lower corner for odd
      }
      if (odd_mask == 0) {
        fine.local(flat) = cur.value_at(base);
        continue;
      }
      double acc = 0.0;
      int corners = 0;
      int sub = odd_mask;
      while (true) {
        IndexVec c = base;
        for (int d = 0; d < D; ++d)
          if (sub & (1 << d)) c[d] += 1;
        acc += cur.value_at(c);
        ++corners;
        if (sub == 0) break;
        sub = (sub - 1) & odd_mask;
      }
      fine.local(flat) = acc / static_cast<double>(corners);
    }
    cur = std::move(fine);
  }
  return cur;
}

GridFunction GridFunction::add_scaled(const GridFunction& v, double c) const {
  require_compatible(*this, v);
  const int lvl = std::max(level_, v.level_);
  const GridFunction& a0 = *this;
  GridFunction a = (a0.level_ == lvl) ? a0 : a0.refined_to(lvl);
  GridFunction b = (v.level_ == lvl) ? v : v.refined_to(lvl);
  IndexVec off(dim_), shape(dim_);
  for (int d = 0; d < dim_; ++d) {
    Index lo = std::min(a.offset_[d], b.offset_[d]);
    Index hi = std::max(a.offset_[d] + a.shape_[d], b.offset_[d] + b.shape_[d]);
    off[d] = lo;
    shape[d] = hi - lo;
  }
  GridFunction out = zeros(dim_, off, shape, lvl, h0_);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    IndexVec g = out.node_index(flat);
    out.local(flat) = a.value_at(g) + c * b.value_at(g);
  }
  return out;
}

GridFunction GridFunction::trimmed() const {
  IndexVec lo(dim_), hi(dim_);
  for (int d = 0; d < dim_; ++d) {
    lo[d] = shape_[d];
    hi[d] = -1;
  }
  for (std::size_t flat = 0; flat < samples_.size(); ++flat) {
    if (samples_[flat] == 0.0) continue;
    std::size_t rem = flat;
    for (int d = dim_ - 1; d >= 0; --d) {
      Index l = static_cast<Index>(rem % static_cast<std::size_t>(shape_[d]));
      rem /= static_cast<std::size_t>(shape_[d]);
      lo[d] = std::min(lo[d], l);
      hi[d] = std::max(hi[d], l);
    }
  }
  if (hi[0] < 0) return zero_like(dim_, h0_, level_); // identically zero
  IndexVec noff(dim_), nshape(dim_);
  for (int d = 0; d < dim_; ++d) {
    noff[d] = offset_[d] + lo[d];
    nshape[d] = hi[d] - lo[d] + 1;
  }
  return rebased(noff, nshape);
}

GridFunction GridFunction::rebased(const IndexVec& new_offset,
                                   const IndexVec& new_shape) const {
  GridFunction out = zeros(dim_, new_offset, new_shape, level_, h0_);
  for (std::size_t flat = 0; flat < out.size(); ++flat)
    out.local(flat) = value_at(out.node_index(flat));
  return out;
}

bool GridFunction::same_layout(const GridFunction& other) const {
  return dim_ == other.dim_ && level_ == other.level_ && h0_ == other.h0_ &&
         offset_ == other.offset_ && shape_ == other.shape_;
}

void require_compatible(const GridFunction& a, const GridFunction& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("grid functions have different dimensions (" +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()) + ")");
  if (a.h0() != b.h0())
    throw std::invalid_argument(
        "grid functions have irreconcilable base spacings (" +
        std::to_string(a.h0()) + " vs " + std::to_string(b.h0()) + ")");
}

} // namespace disloc
