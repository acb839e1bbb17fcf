#include "disloc/dislocation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace disloc {

namespace {

void canonicalize(Dislocation& g) {
  bool all_zero = std::all_of(g.shift_num.begin(), g.shift_num.end(),
                              [](Index v) { return v == 0; });
  if (all_zero) {
    g.shift_scale = 0;
    return;
  }
  while (g.shift_scale < 0) {
    for (Index& v : g.shift_num) v *= 2;
    ++g.shift_scale;
  }
  auto all_even = [&] {
    return std::all_of(g.shift_num.begin(), g.shift_num.end(),
                       [](Index v) { return (v & 1) == 0; });
  };
  while (g.shift_scale > 0 && all_even()) {
    for (Index& v : g.shift_num) v /= 2;
    --g.shift_scale;
  }
}

Index shl_checked(Index v, int e) {
  if (e > 62) throw std::overflow_error("dislocation shift exponent overflow");
  return v << e;
}

} // namespace

Dislocation Dislocation::identity(int dim) {
  return Dislocation{0, IndexVec(static_cast<std::size_t>(dim), 0), 0};
}

Dislocation Dislocation::lattice_shift(IndexVec y, int scale) {
  Dislocation g{0, std::move(y), scale};
  canonicalize(g);
  return g;
}

Dislocation Dislocation::dilation_by(int j, int dim) {
  return Dislocation{j, IndexVec(static_cast<std::size_t>(dim), 0), 0};
}

Dislocation Dislocation::make(int j, IndexVec y, int scale) {
  Dislocation g{j, std::move(y), scale};
  canonicalize(g);
  return g;
}

bool Dislocation::is_identity() const {
  return dilation == 0 &&
         std::all_of(shift_num.begin(), shift_num.end(),
                     [](Index v) { return v == 0; });
}

std::vector<double> Dislocation::shift_physical() const {
  std::vector<double> a(shift_num.size());
  for (std::size_t d = 0; d < shift_num.size(); ++d)
    a[d] = std::ldexp(static_cast<double>(shift_num[d]), -shift_scale);
  return a;
}

IndexVec Dislocation::shift_at_level(int L) const {
  const int e = L - shift_scale;
  IndexVec y(shift_num.size());
  if (e >= 0) {
    for (std::size_t d = 0; d < shift_num.size(); ++d)
      y[d] = shl_checked(shift_num[d], e);
    return y;
  }
  const Index den = shl_checked(1, -e);
  for (std::size_t d = 0; d < shift_num.size(); ++d) {
    if (shift_num[d] % den != 0)
      throw std::invalid_argument(
          "dislocation shift is not integral on the level-" +
          std::to_string(L) + " lattice");
    y[d] = shift_num[d] / den;
  }
  return y;
}

std::string Dislocation::to_string() const {
  std::ostringstream os;
  os << "(j=" << dilation << ", y=[";
  for (std::size_t d = 0; d < shift_num.size(); ++d)
    os << (d ? "," : "") << shift_num[d];
  os << "]";
  if (shift_scale != 0) os << "/2^" << shift_scale;
  os << ")";
  return os.str();
}

Dislocation compose(const Dislocation& g1, const Dislocation& g2) {
  if (g1.dim() != g2.dim())
    throw std::invalid_argument("compose: dimension mismatch");
  // a = a1 + 2^-j1 a2 at scales t1 = s1 and t2 = s2 + j1.
  const int t1 = g1.shift_scale;
  const int t2 = g2.shift_scale + g1.dilation;
  const int s = std::max(t1, t2);
  IndexVec num(g1.shift_num.size());
  for (std::size_t d = 0; d < num.size(); ++d)
    num[d] = shl_checked(g1.shift_num[d], s - t1) +
             shl_checked(g2.shift_num[d], s - t2);
  return Dislocation::make(g1.dilation + g2.dilation, std::move(num), s);
}

Dislocation invert(const Dislocation& g) {
  // (T_a D_j)^-1 = T_{-2^j a} D_{-j}.
  IndexVec num(g.shift_num.size());
  for (std::size_t d = 0; d < num.size(); ++d) num[d] = -g.shift_num[d];
  return Dislocation::make(-g.dilation, std::move(num),
                           g.shift_scale - g.dilation);
}

GridFunction apply(const Dislocation& g, const GridFunction& u,
                   const EnergySpec& spec) {
  if (spec.dim != u.dim() || g.dim() != u.dim())
    throw std::invalid_argument("apply: dimension mismatch");
  if (spec.mode == EnergyMode::Inhomogeneous && g.dilation != 0)
    throw std::invalid_argument(
        "apply: dilations are not part of the shift-only (inhomogeneous) group");
  GridFunction out = u;
  if (g.dilation != 0) {
    const double w = std::pow(
        2.0, static_cast<double>(g.dilation) *
                 (static_cast<double>(spec.dim) - spec.p) / spec.p);
    out.dilate(g.dilation, w);
  }
  // Shifts finer than the operand's lattice act after an exact refinement.
  if (out.level() < g.shift_scale) {
    bool integral = true;
    const Index den = Index{1} << (g.shift_scale - out.level());
    for (Index c : g.shift_num)
      if (c % den != 0) integral = false;
    if (!integral) out = out.refined_to(g.shift_scale);
  }
  out.translate(g.shift_at_level(out.level()));
  return out;
}

GridFunction apply_inverse(const Dislocation& g, const GridFunction& u,
                           const EnergySpec& spec) {
  return apply(invert(g), u, spec);
}

double group_distance(const Dislocation& g1, const Dislocation& g2,
                      double h0) {
  const auto a1 = g1.shift_physical();
  const auto a2 = g2.shift_physical();
  if (a1.size() != a2.size())
    throw std::invalid_argument("group_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t d = 0; d < a1.size(); ++d) {
    const double diff = a1[d] - a2[d];
    s += diff * diff;
  }
  return std::abs(static_cast<double>(g1.dilation - g2.dilation)) +
         h0 * std::sqrt(s);
}

DislocationSequence DislocationSequence::constant(int k0, int count,
                                                  const Dislocation& g) {
  DislocationSequence s;
  s.k0 = k0;
  s.elems.assign(static_cast<std::size_t>(count), g);
  return s;
}

DivergenceReport diverges(const DislocationSequence& seq,
                          const DivergenceOptions& opts) {
  const int n = seq.size();
  if (n < 3)
    throw std::invalid_argument(
        "diverges: need at least 3 indices to read a trend");
  DivergenceReport rep;
  rep.distances.reserve(static_cast<std::size_t>(n));
  const Dislocation id = Dislocation::identity(seq.elems.front().dim());
  for (const auto& g : seq.elems)
    rep.distances.push_back(group_distance(g, id, opts.h0));
  const int tail_start = n - (n + 2) / 3;
  bool increasing = true;
  for (int i = tail_start; i + 1 < n; ++i)
    if (!(rep.distances[static_cast<std::size_t>(i + 1)] >
          rep.distances[static_cast<std::size_t>(i)]))
      increasing = false;
  const bool beyond = rep.distances.back() > opts.threshold;
  rep.diverges = increasing && beyond;
  if (!increasing)
    rep.note = "distance to identity is not strictly increasing over the final third";
  else if (!beyond)
    rep.note = "final distance " + std::to_string(rep.distances.back()) +
               " does not exceed threshold " + std::to_string(opts.threshold);
  return rep;
}

} // namespace disloc
