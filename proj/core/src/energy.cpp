#include "disloc/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace disloc {

namespace {

double int_pow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double abs_pow(double v, double e) {
  if (e == 2.0) return v * v;
  if (e == 4.0) {
    double v2 = v * v;
    return v2 * v2;
  }
  return std::pow(std::abs(v), e);
}

// Odometer walk over the inclusive box [lo, hi].
template <class Fn>
void for_each_index(const IndexVec& lo, const IndexVec& hi, Fn&& fn) {
  const int dim = static_cast<int>(lo.size());
  for (int d = 0; d < dim; ++d)
    if (hi[d] < lo[d]) return;
  IndexVec idx = lo;
  while (true) {
    fn(idx);
    int d = dim - 1;
    while (d >= 0) {
      if (++idx[d] <= hi[d]) break;
      idx[d] = lo[d];
      --d;
    }
    if (d < 0) break;
  }
}

} // namespace

EnergySpec EnergySpec::inhomogeneous(int dim, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("EnergySpec: p must exceed 1");
  if (dim < 1) throw std::invalid_argument("EnergySpec: dim must be positive");
  return EnergySpec{p, EnergyMode::Inhomogeneous, dim};
}

EnergySpec EnergySpec::homogeneous(int dim, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("EnergySpec: p must exceed 1");
  if (!(p < dim))
    throw std::invalid_argument(
        "EnergySpec: homogeneous mode requires p < N for the critical scaling");
  return EnergySpec{p, EnergyMode::Homogeneous, dim};
}

double EnergySpec::dilation_weight_base() const {
  return std::pow(2.0, (static_cast<double>(dim) - p) / p);
}

double EnergySpec::critical_exponent() const {
  if (!(p < dim))
    throw std::invalid_argument("critical exponent undefined for p >= N");
  return static_cast<double>(dim) * p / (static_cast<double>(dim) - p);
}

MassSpec MassSpec::make(double q) {
  if (!(q > 1.0)) throw std::invalid_argument("MassSpec: q must exceed 1");
  return MassSpec{q};
}

double eval_F(const GridFunction& u, const EnergySpec& spec) {
  if (spec.dim != u.dim())
    throw std::invalid_argument("eval_F: spec dimension " +
                                std::to_string(spec.dim) +
                                " does not match grid dimension " +
                                std::to_string(u.dim()));
  const int dim = u.dim();
  const double h = u.spacing();
  const double inv_h = 1.0 / h;
  const double hN = int_pow(h, dim);
  const bool inhom = spec.mode == EnergyMode::Inhomogeneous;
  const double p = spec.p;

  // Forward differences at i are nonzero only for i in [offset-1, offset+shape-1].
  IndexVec lo(dim), hi(dim);
  for (int d = 0; d < dim; ++d) {
    lo[d] = u.offset()[d] - 1;
    hi[d] = u.offset()[d] + u.shape()[d] - 1;
  }
  double acc = 0.0;
  IndexVec nb(dim);
  for_each_index(lo, hi, [&](const IndexVec& i) {
    const double ui = u.value_at(i);
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      nb = i;
      nb[d] += 1;
      const double diff = (u.value_at(nb) - ui) * inv_h;
      s += diff * diff;
    }
    double term = (p == 2.0) ? s : std::pow(s, 0.5 * p);
    if (inhom) term += abs_pow(ui, p);
    acc += term;
  });
  const double result = acc * hN;
  if (!std::isfinite(result))
    throw std::invalid_argument("eval_F: non-finite result (sample overflow)");
  return result;
}

double eval_G(const GridFunction& u, const MassSpec& spec) {
  const double hN = int_pow(u.spacing(), u.dim());
  double acc = 0.0;
  for (double v : u.samples()) acc += abs_pow(v, spec.q);
  const double result = acc * hN;
  if (!std::isfinite(result))
    throw std::invalid_argument("eval_G: non-finite result (sample overflow)");
  return result;
}

double target_norm(const GridFunction& u, const MassSpec& spec) {
  return std::pow(eval_G(u, spec), 1.0 / spec.q);
}

namespace {

// Bracket/bisect/polish on a strictly decreasing phi(lambda) = F(u/lambda),
// solving phi = 1.
double solve_gauge(const std::function<double(double)>& phi, double rel_tol) {
  double lo = 1.0, hi = 1.0;
  double v = phi(1.0);
  if (v == 1.0) return 1.0;
  const int kMaxBracket = 1100; // ~ full double exponent range
  if (v > 1.0) {
    lo = 1.0;
    for (int i = 0;; ++i) {
      if (i == kMaxBracket)
        throw std::runtime_error(
            "gauge_norm: failed to bracket F(u/lambda)=1 (degenerate functional)");
      hi *= 2.0;
      if (phi(hi) <= 1.0) break;
    }
  } else {
    hi = 1.0;
    for (int i = 0;; ++i) {
      if (i == kMaxBracket)
        throw std::runtime_error(
            "gauge_norm: failed to bracket F(u/lambda)=1 (degenerate functional)");
      lo *= 0.5;
      if (phi(lo) >= 1.0) break;
    }
  }
  for (int i = 0; i < 200 && (hi - lo) > rel_tol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  const double flo = phi(lo) - 1.0;
  const double fhi = phi(hi) - 1.0;
  if (flo > fhi) {
    const double lambda = lo + (hi - lo) * flo / (flo - fhi);
    if (lambda >= lo && lambda <= hi) return lambda;
  }
  return 0.5 * (lo + hi);
}

} // namespace

double gauge_norm(const GridFunction& u,
                  const std::function<double(const GridFunction&)>& functional,
                  double rel_tol) {
  if (u.is_zero()) return 0.0;
  return solve_gauge(
      [&](double lambda) { return functional(u.scaled(1.0 / lambda)); },
      rel_tol);
}

double gauge_norm(const GridFunction& u, const EnergySpec& spec,
                  double rel_tol) {
  if (u.is_zero()) return 0.0;
  // F is p-homogeneous, so F(u/lambda) reduces to F(u)/lambda^p.
  const double f0 = eval_F(u, spec);
  if (!(f0 > 0.0))
    throw std::runtime_error("gauge_norm: F vanished on a nonzero input");
  return solve_gauge(
      [&](double lambda) { return f0 / std::pow(lambda, spec.p); }, rel_tol);
}

double bl_defect(const GridFunction& u, const GridFunction& v,
                 const MassSpec& spec) {
  require_compatible(u, v);
  const double g_sum = eval_G(u + v, spec);
  const double g_parts = eval_G(u, spec) + eval_G(v, spec);
  return std::abs(g_sum - g_parts);
}

std::vector<double> grad_F(const GridFunction& u, const EnergySpec& spec) {
  if (spec.dim != u.dim())
    throw std::invalid_argument("grad_F: dimension mismatch");
  const int dim = u.dim();
  const double h = u.spacing();
  const double inv_h = 1.0 / h;
  const double hN = int_pow(h, dim);
  const double p = spec.p;
  const bool inhom = spec.mode == EnergyMode::Inhomogeneous;

  // E(i) = S(i)^((p-2)/2) with S the squared forward-difference gradient.
  auto edge_weight = [&](const IndexVec& i) -> double {
    if (p == 2.0) return 1.0;
    double s = 0.0;
    IndexVec nb(dim);
    const double ui = u.value_at(i);
    for (int d = 0; d < dim; ++d) {
      nb = i;
      nb[d] += 1;
      const double diff = (u.value_at(nb) - ui) * inv_h;
      s += diff * diff;
    }
    if (s <= 0.0) return 0.0;
    return std::pow(s, 0.5 * (p - 2.0));
  };

  std::vector<double> g(u.size(), 0.0);
  IndexVec nb(dim), bk(dim);
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    const IndexVec i = u.node_index(flat);
    const double ui = u.local(flat);
    double acc = 0.0;
    const double em = edge_weight(i);
    for (int d = 0; d < dim; ++d) {
      nb = i;
      nb[d] += 1;
      bk = i;
      bk[d] -= 1;
      const double d_fwd = (u.value_at(nb) - ui) * inv_h;
      const double d_bck = (ui - u.value_at(bk)) * inv_h;
      const double eb = (p == 2.0) ? 1.0 : edge_weight(bk);
      double t = 0.0;
      if (d_bck != 0.0 && eb != 0.0) t += eb * d_bck;
      if (d_fwd != 0.0 && em != 0.0) t -= em * d_fwd;
      acc += t * inv_h;
    }
    if (inhom && ui != 0.0)
      acc += abs_pow(ui, p - 1.0) * (ui > 0.0 ? 1.0 : -1.0);
    g[flat] = p * hN * acc;
  }
  return g;
}

std::vector<double> grad_G(const GridFunction& u, const MassSpec& spec) {
  const double hN = int_pow(u.spacing(), u.dim());
  const double q = spec.q;
  std::vector<double> g(u.size(), 0.0);
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    const double v = u.local(flat);
    if (v != 0.0) g[flat] = q * hN * abs_pow(v, q - 1.0) * (v > 0.0 ? 1.0 : -1.0);
  }
  return g;
}

} // namespace disloc
