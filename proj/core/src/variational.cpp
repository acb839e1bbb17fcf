#include "disloc/variational.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "disloc/parallel.hpp"
#include "disloc/rng.hpp"
#include "disloc/symmetry.hpp"

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
    const double v2 = v * v;
    return v2 * v2;
  }
  return std::pow(std::abs(v), e);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

SymmetrySpec restriction_spec(SubspaceRestriction r) {
  switch (r) {
    case SubspaceRestriction::Even: return SymmetrySpec::even();
    case SubspaceRestriction::Radial: return SymmetrySpec::radial();
    default: return SymmetrySpec::none();
  }
}

// Problem bound to the fixed window layout, with optional perturbations.
struct BoundProblem {
  const IsoperimetricProblem& prob;
  bool penalized = false;
  double hN = 1.0;

  explicit BoundProblem(const IsoperimetricProblem& p, bool use_perturbation)
      : prob(p), penalized(use_perturbation && p.perturbation.has_value()) {
    hN = int_pow(p.h, p.energy.dim);
  }

  double objective(const GridFunction& u) const {
    double v = eval_F(u, prob.energy);
    if (penalized) {
      const auto& V = prob.perturbation->V;
      double f = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (V[i] != 0.0) f += V[i] * abs_pow(u.local(i), prob.energy.p);
      v -= f * hN;
    }
    return v;
  }

  double mass(const GridFunction& u) const {
    double m = eval_G(u, prob.mass);
    if (penalized) {
      const auto& W = prob.perturbation->W;
      double g = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (W[i] != 0.0) g += W[i] * abs_pow(u.local(i), prob.mass.q);
      m += g * hN;
    }
    return m;
  }

  std::vector<double> objective_gradient(const GridFunction& u) const {
    std::vector<double> g = grad_F(u, prob.energy);
    if (penalized) {
      const auto& V = prob.perturbation->V;
      const double p = prob.energy.p;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double ui = u.local(i);
        if (V[i] != 0.0 && ui != 0.0)
          g[i] -= p * V[i] * abs_pow(ui, p - 1.0) * (ui > 0.0 ? 1.0 : -1.0) * hN;
      }
    }
    return g;
  }

  std::vector<double> mass_gradient(const GridFunction& u) const {
    std::vector<double> g = grad_G(u, prob.mass);
    if (penalized) {
      const auto& W = prob.perturbation->W;
      const double q = prob.mass.q;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double ui = u.local(i);
        if (W[i] != 0.0 && ui != 0.0)
          g[i] += q * W[i] * abs_pow(ui, q - 1.0) * (ui > 0.0 ? 1.0 : -1.0) * hN;
      }
    }
    return g;
  }

  // Exact restoration of mass == t; both G and the W-term are q-homogeneous.
  bool restore(GridFunction& u) const {
    const double m = mass(u);
    if (!(m > 0.0) || !std::isfinite(m)) return false;
    const double s = std::pow(prob.t / m, 1.0 / prob.mass.q);
    if (!std::isfinite(s)) return false;
    for (double& v : u.mutable_samples()) v *= s;
    return true;
  }
};

GridFunction random_start(const IsoperimetricProblem& prob, std::uint64_t seed) {
  Rng rng(seed);
  const int dim = prob.energy.dim;
  const double span = prob.window_hi - prob.window_lo;
  const int nb = static_cast<int>(rng.uniform_int(1, 3));
  std::vector<std::vector<double>> centers;
  std::vector<double> widths, amps;
  for (int b = 0; b < nb; ++b) {
    std::vector<double> c(dim);
    for (int d = 0; d < dim; ++d)
      c[d] = rng.uniform(prob.window_lo + 0.3 * span, prob.window_hi - 0.3 * span);
    centers.push_back(c);
    widths.push_back(rng.uniform(0.5, std::max(1.0, span / 8.0)));
    amps.push_back(rng.uniform(0.2, 1.0));
  }
  return prob.sample([&](const std::vector<double>& x) {
    double v = 0.0;
    for (int b = 0; b < nb; ++b) {
      double r2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double dx = x[d] - centers[static_cast<std::size_t>(b)][d];
        r2 += dx * dx;
      }
      v += amps[static_cast<std::size_t>(b)] *
           std::exp(-r2 / (widths[static_cast<std::size_t>(b)] *
                           widths[static_cast<std::size_t>(b)]));
    }
    return v;
  });
}

struct StartOutcome {
  MinimizerReport report;
  std::uint64_t seed = 0;
};

MinimizerReport run_single_start(const IsoperimetricProblem& prob,
                                 const MinimizeOptions& opts, bool penalized,
                                 std::uint64_t seed,
                                 const TestFunctionalFamily& family) {
  const BoundProblem bound(prob, penalized);
  const SymmetrySpec sym = restriction_spec(prob.restriction);
  const double hN = bound.hN;
  const GridFunction window = prob.make_zero();

  MinimizerReport rep;
  GridFunction u = random_start(prob, seed);
  if (sym.kind != SymmetryKind::None)
    u = project_symmetric(u, sym).rebased(window.offset(), window.shape());
  if (!bound.restore(u))
    throw std::runtime_error("minimize: constraint restoration failed at start "
                             "(degenerate initializer)");

  double J = bound.objective(u);
  double alpha = opts.alpha0;
  double last_decrease = std::numeric_limits<double>::infinity();
  bool recenter_enabled = prob.restriction == SubspaceRestriction::None;
  int accepted = 0;
  rep.energy_trace.push_back(J);

  std::vector<double> gJ, gM, r;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    gJ = bound.objective_gradient(u);
    gM = bound.mass_gradient(u);
    const double mm = dot(gM, gM);
    const double lambda = (mm > 0.0) ? dot(gJ, gM) / mm : 0.0;
    r.resize(gJ.size());
    for (std::size_t i = 0; i < gJ.size(); ++i) r[i] = gJ[i] - lambda * gM[i];
    const double el = std::sqrt(dot(r, r) / hN);

    if (accepted > 0 && last_decrease < opts.eps_energy * std::max(1.0, std::abs(J)) &&
        el < opts.eps_el) {
      rep.converged = true;
      rep.multiplier = lambda;
      rep.el_residual = el;
      break;
    }
    rep.multiplier = lambda;
    rep.el_residual = el;

    // Backtracking trial along the constrained gradient.
    bool stepped = false;
    for (int bt = 0; bt < 60; ++bt) {
      GridFunction v = u;
      auto& vs = v.mutable_samples();
      for (std::size_t i = 0; i < vs.size(); ++i) vs[i] -= alpha * r[i];
      if (sym.kind != SymmetryKind::None)
        v = project_symmetric(v, sym).rebased(window.offset(), window.shape());
      if (!bound.restore(v)) {
        alpha *= 0.5;
        continue;
      }
      const double Jv = bound.objective(v);
      if (std::isfinite(Jv) && Jv < J) {
        last_decrease = J - Jv;
        u = std::move(v);
        J = Jv;
        alpha = std::min(alpha * 1.25, 1e6);
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!stepped) {
      if (el < opts.eps_el) {
        rep.converged = true;
      } else {
        rep.note = "step-size failure: energy would not decrease further "
                   "(EL residual " + std::to_string(el) + ")";
      }
      break;
    }
    ++accepted;
    if (accepted % opts.trace_stride == 0) rep.energy_trace.push_back(J);

    if (recenter_enabled && accepted % opts.recenter_interval == 0) {
      const ScanHit hit = best_recentering(u.trimmed(), family, opts.workers);
      if (hit.member >= 0 && !hit.g.is_identity() && hit.g.dilation == 0) {
        const IndexVec y = hit.g.shift_at_level(u.level());
        double ynorm = 0.0;
        for (Index c : y)
          ynorm = std::max(ynorm, std::abs(static_cast<double>(c)) * prob.h);
        if (penalized && ynorm <= opts.localization_radius) {
          recenter_enabled = false; // parked at the potential well
        } else if (ynorm > 0.0) {
          GridFunction shifted = u;
          IndexVec delta(y.size());
          for (std::size_t d = 0; d < y.size(); ++d) delta[d] = -y[d];
          shifted.translate(delta);
          // Re-window; record anything the crop loses.
          GridFunction rebasedu = shifted.rebased(window.offset(), window.shape());
          double cropped = 0.0;
          for (std::size_t i = 0; i < shifted.size(); ++i) {
            const IndexVec gidx = shifted.node_index(i);
            if (rebasedu.value_at(gidx) == 0.0 && shifted.local(i) != 0.0) {
              bool inside = true;
              for (std::size_t d = 0; d < gidx.size(); ++d) {
                if (gidx[d] < window.offset()[d] ||
                    gidx[d] >= window.offset()[d] + window.shape()[d])
                  inside = false;
              }
              if (!inside)
                cropped = std::max(cropped, std::abs(shifted.local(i)));
            }
          }
          rep.recenter_log.push_back({accepted, delta, cropped});
          u = std::move(rebasedu);
          if (!bound.restore(u)) {
            rep.note = "constraint restoration failed after recentering";
            break;
          }
          J = bound.objective(u);
        } else if (penalized) {
          recenter_enabled = false;
        }
      } else if (penalized) {
        recenter_enabled = false;
      }
    }
    rep.iterations = iter + 1;
  }

  rep.energy_trace.push_back(J);
  rep.minimizer = u;
  rep.value = J;
  rep.constraint_residual = std::abs(bound.mass(u) - prob.t);
  return rep;
}

MinimizerReport run_multistart(const IsoperimetricProblem& prob,
                               const MinimizeOptions& opts, bool penalized) {
  prob.validate();
  if (penalized && !prob.perturbation.has_value())
    throw std::invalid_argument(
        "minimize_penalized: problem carries no perturbation pair");

  // Family for the recentering scans (shift-only, covering the window).
  TestFunctionalFamily local_family = [&] {
    if (opts.family) return *opts.family;
    FamilyOptions fo;
    fo.scales = 3;
    fo.radius = 4.0;
    fo.shift_radius = static_cast<int>(
        std::min<double>(2048.0, (prob.window_hi - prob.window_lo) / (2.0 * prob.h)));
    fo.dilation_range = 0;
    EnergySpec scan_energy = prob.energy;
    scan_energy.mode = EnergyMode::Inhomogeneous; // shift-only quotient
    return TestFunctionalFamily::make(scan_energy, prob.mass, prob.h, fo);
  }();

  const int starts = std::max(1, opts.restarts);
  auto outcomes = run_chunked<std::vector<StartOutcome>>(
      static_cast<std::size_t>(starts), opts.workers,
      [&](std::size_t begin, std::size_t end) {
        std::vector<StartOutcome> local;
        for (std::size_t s = begin; s < end; ++s) {
          MinimizeOptions one = opts;
          one.workers = 1;
          StartOutcome oc;
          oc.seed = opts.seed + s;
          oc.report = run_single_start(prob, one, penalized, oc.seed, local_family);
          oc.report.best_start = static_cast<int>(s);
          local.push_back(std::move(oc));
        }
        return local;
      });

  const MinimizerReport* best = nullptr;
  for (const auto& chunk : outcomes)
    for (const auto& oc : chunk) {
      if (!best) {
        best = &oc.report;
        continue;
      }
      const bool better =
          (oc.report.converged && !best->converged) ||
          (oc.report.converged == best->converged && oc.report.value < best->value);
      if (better) best = &oc.report;
    }
  MinimizerReport rep = *best;
  std::ostringstream os;
  os << (rep.note.empty() ? "" : rep.note + "; ") << starts
     << " start(s), best #" << rep.best_start;
  rep.note = os.str();
  return rep;
}

} // namespace

GridFunction IsoperimetricProblem::make_zero() const {
  const int dim = energy.dim;
  const Index ilo = static_cast<Index>(std::ceil(window_lo / h - 1e-9));
  const Index ihi = static_cast<Index>(std::floor(window_hi / h + 1e-9));
  return GridFunction::zeros(dim, IndexVec(dim, ilo),
                             IndexVec(dim, ihi - ilo + 1), 0, h);
}

GridFunction IsoperimetricProblem::sample(
    const std::function<double(const std::vector<double>&)>& f) const {
  GridFunction u = make_zero();
  for (std::size_t flat = 0; flat < u.size(); ++flat)
    u.local(flat) = f(u.node_position(flat));
  return u;
}

IsoperimetricProblem IsoperimetricProblem::with_t(double new_t) const {
  IsoperimetricProblem p = *this;
  p.t = new_t;
  return p;
}

void IsoperimetricProblem::validate() const {
  if (!(t > 0.0)) throw std::invalid_argument("problem.t must be positive");
  if (!(h > 0.0)) throw std::invalid_argument("problem.h must be positive");
  if (!(window_hi > window_lo))
    throw std::invalid_argument("problem.window must be a nonempty interval");
  if (energy.mode == EnergyMode::Inhomogeneous) {
    const bool has_critical = energy.p < energy.dim;
    if (!(mass.q > energy.p) ||
        (has_critical && !(mass.q < energy.critical_exponent())))
      throw std::invalid_argument("problem exponents must satisfy p < q < p*");
  } else {
    if (std::abs(mass.q - energy.critical_exponent()) > 1e-9)
      throw std::invalid_argument("homogeneous problems require q = p*");
  }
  if (restriction == SubspaceRestriction::Radial && energy.dim < 2)
    throw std::invalid_argument("radial restriction requires N >= 2");
  if (restriction != SubspaceRestriction::None &&
      std::abs(window_lo + window_hi) > 1e-12)
    throw std::invalid_argument("symmetric restrictions need a symmetric window");
  if (perturbation.has_value()) {
    const GridFunction z = make_zero();
    const auto& P = *perturbation;
    if (P.V.size() != z.size() || P.W.size() != z.size())
      throw std::invalid_argument(
          "perturbation potentials must be sampled on the problem window");
    double vmax = 0.0;
    for (double v : P.V) {
      if (v < 0.0)
        throw std::invalid_argument("perturbation potential V must be >= 0");
      vmax = std::max(vmax, v);
    }
    double wmax = 0.0;
    for (double w : P.W) {
      if (w < 0.0)
        throw std::invalid_argument("perturbation potential W must be >= 0");
      wmax = std::max(wmax, w);
    }
    if (vmax == 0.0 && wmax == 0.0)
      throw std::invalid_argument(
          "perturbation pair is identically zero; at least one potential must "
          "be positive somewhere");
    // Decay check: the potentials must be negligible at the window boundary.
    double boundary = 0.0;
    for (std::size_t flat = 0; flat < z.size(); ++flat) {
      const IndexVec g = z.node_index(flat);
      bool on_boundary = false;
      for (int d = 0; d < z.dim(); ++d)
        if (g[d] == z.offset()[d] || g[d] == z.offset()[d] + z.shape()[d] - 1)
          on_boundary = true;
      if (on_boundary)
        boundary = std::max(boundary, std::max(P.V[flat], P.W[flat]));
    }
    if (boundary > 0.01 * std::max(vmax, wmax))
      throw std::invalid_argument(
          "perturbation potentials must decay toward the window boundary");
  }
}

MinimizerReport minimize_isoperimetric(const IsoperimetricProblem& prob,
                                       const MinimizeOptions& opts) {
  return run_multistart(prob, opts, /*penalized=*/false);
}

MinimizerReport minimize_penalized(const IsoperimetricProblem& prob,
                                   const MinimizeOptions& opts) {
  return run_multistart(prob, opts, /*penalized=*/true);
}

SubadditivityTable subadditivity_table(const IsoperimetricProblem& prob,
                                       const std::vector<double>& taus,
                                       const MinimizeOptions& opts,
                                       double solver_tol) {
  prob.validate();
  SubadditivityTable table;
  table.t = prob.t;
  table.solver_tol = solver_tol;

  std::map<double, MinimizerReport> cache;
  auto solve = [&](double level) -> const MinimizerReport& {
    auto it = cache.find(level);
    if (it == cache.end())
      it = cache.emplace(level, minimize_isoperimetric(prob.with_t(level), opts))
               .first;
    return it->second;
  };

  const MinimizerReport& full = solve(prob.t);
  for (double tau : taus) {
    SubadditivityRow row;
    row.tau = tau;
    if (!(tau > 0.0) || !(tau < prob.t))
      throw std::invalid_argument("subadditivity_table: taus must lie in (0, t)");
    const MinimizerReport& a = solve(tau);
    const MinimizerReport& b = solve(prob.t - tau);
    row.c_tau = a.value;
    row.c_complement = b.value;
    row.c_t = full.value;
    row.margin = row.c_tau + row.c_complement - row.c_t;
    row.solver_ok = a.converged && b.converged && full.converged;
    row.weak_ok =
        row.c_t <= row.c_tau + row.c_complement +
                       2.0 * solver_tol * std::max(1.0, std::abs(row.c_t));
    row.strict = row.margin > 0.0;
    table.rows.push_back(row);
  }
  return table;
}

CoercivityReport coercivity_probe(const EnergySpec& energy, const MassSpec& mass,
                                  double a, double b, double window_lo,
                                  double window_hi, double h, int n_samples,
                                  std::uint64_t seed, double floor_value) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("coercivity_probe: a, b must be positive");
  IsoperimetricProblem shell;
  shell.energy = energy;
  shell.mass = mass;
  shell.t = 1.0;
  shell.window_lo = window_lo;
  shell.window_hi = window_hi;
  shell.h = h;

  CoercivityReport rep;
  rep.floor_used = floor_value;
  double best = std::numeric_limits<double>::infinity();
  int produced = 0, rejected = 0;
  for (int s = 0; s < n_samples; ++s) {
    GridFunction u = random_start(shell, seed + static_cast<std::uint64_t>(s));
    const double gu = eval_G(u, mass);
    if (!(gu > 0.0)) {
      ++rejected;
      continue;
    }
    // Rescale so that G(a * sigma * u) sits just above b.
    const double target = 1.01 * b;
    const double sigma =
        std::pow(target / (std::pow(a, mass.q) * gu), 1.0 / mass.q);
    GridFunction v = u.scaled(sigma);
    best = std::min(best, eval_F(v, energy));
    ++produced;
  }
  if (produced == 0)
    throw std::runtime_error("coercivity_probe: sampler produced no admissible function");
  rep.min_energy = best;
  rep.samples = produced;
  rep.rejected = rejected;
  rep.pass = best > floor_value;
  return rep;
}

ClassificationReport classify_minimizing_sequence(
    const FunctionSequence& seq, const IsoperimetricProblem& prob,
    const TestFunctionalFamily& fam, const ClassifyOptions& opts) {
  ClassificationReport rep;
  rep.decomposition = decompose(seq, prob.energy, fam, opts.decompose);

  std::vector<double> split;
  for (int p = 0; p < rep.decomposition.profile_count(); ++p) {
    const auto& w = rep.decomposition.profiles[static_cast<std::size_t>(p)];
    if (w.is_zero()) continue;
    split.push_back(eval_G(w, prob.mass));
  }
  rep.mass_split = split;

  if (split.empty()) {
    const auto& raw_trace = rep.decomposition.rounds.front().defect_trace;
    TrendCheck t = decreasing_tail(raw_trace, opts.vanish_tol, 1e-12, 0.5);
    if (t.pass()) {
      rep.verdict = SequenceClass::Vanishing;
      rep.note = "no profile; defect decays: " + t.describe();
    } else {
      rep.verdict = SequenceClass::Dichotomy;
      rep.note = "no profile extracted yet the defect persists: " + t.describe();
    }
    return rep;
  }
  if (split.size() == 1 && split.front() >= (1.0 - opts.delta) * prob.t) {
    rep.verdict = SequenceClass::ConvergesAfterRecentering;
    rep.note = "single profile carries the constraint mass";
    return rep;
  }
  rep.verdict = SequenceClass::Dichotomy;
  std::ostringstream os;
  os << "mass splits across " << split.size() << " profiles:";
  for (double m : split) os << " " << m;
  rep.note = os.str();
  return rep;
}

} // namespace disloc
