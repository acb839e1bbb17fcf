#include "disloc/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace disloc {

namespace {

std::size_t tail_begin(std::size_t n) { return n - (n + 1) / 2; }

// The weak-limit estimator needs at least 4 members; short sequences hand it
// everything they have.
std::size_t estimator_begin(std::size_t n) {
  const std::size_t want = std::max<std::size_t>((n + 1) / 2, 4);
  return n > want ? n - want : 0;
}

double max_tail(const std::vector<double>& v) {
  double m = 0.0;
  for (std::size_t i = tail_begin(v.size()); i < v.size(); ++i)
    m = std::max(m, v[i]);
  return m;
}

std::vector<GridFunction> recentered_tail(const std::vector<GridFunction>& v,
                                          const std::vector<Dislocation>& g,
                                          const EnergySpec& spec) {
  std::vector<GridFunction> out;
  const std::size_t from = estimator_begin(v.size());
  out.reserve(v.size() - from);
  for (std::size_t k = from; k < v.size(); ++k)
    out.push_back(apply_inverse(g[k], v[k], spec).trimmed());
  return out;
}

// Cross-level subtraction leaves last-ulp dust where profiles cancelled;
// snapping it to zero keeps remainder supports tight without touching
// anything above the floor.
GridFunction snap_dust(GridFunction v, double abs_floor) {
  if (abs_floor > 0.0)
    for (double& x : v.mutable_samples())
      if (std::abs(x) <= abs_floor) x = 0.0;
  return v.trimmed();
}

} // namespace

DecompositionResult decompose(const FunctionSequence& seq,
                              const EnergySpec& spec,
                              const TestFunctionalFamily& fam,
                              const DecomposeOptions& opts) {
  const std::size_t n = static_cast<std::size_t>(seq.size());
  if (n < 4)
    throw std::invalid_argument("decompose: need at least 4 sequence members");

  DecompositionResult res;
  res.k0 = seq.k0();
  res.h0 = seq.members().front().h0();

  std::vector<GridFunction> v;
  v.reserve(n);
  double scale = 0.0;
  for (const auto& u : seq.members()) {
    v.push_back(u.trimmed());
    scale = std::max(scale, u.max_abs());
  }
  const double dust = opts.dust_tol * scale;
  {
    std::vector<double> energies;
    for (std::size_t k = tail_begin(n); k < n; ++k)
      energies.push_back(eval_F(v[k], spec));
    res.energy_sup_tail = *std::max_element(energies.begin(), energies.end());
  }

  auto scan_all = [&](std::vector<ScanHit>& hits, std::vector<double>& trace) {
    hits.clear();
    trace.clear();
    for (const auto& vk : v) {
      hits.push_back(best_recentering(vk, fam, opts.workers));
      trace.push_back(hits.back().magnitude);
    }
  };

  bool zero_first_pending = false;

  // Round 1: the identity dislocation.
  {
    ExtractionRound round;
    round.round = 1;
    std::vector<ScanHit> hits;
    scan_all(hits, round.defect_trace);
    round.defect_before = max_tail(round.defect_trace);
    if (round.defect_before < opts.eps_stop) {
      round.note = "sequence is D-weakly null at tolerance; nothing to extract";
      res.rounds.push_back(std::move(round));
      res.remainders = std::move(v);
      return res;
    }
    std::vector<GridFunction> tail(
        v.begin() + static_cast<long>(estimator_begin(n)), v.end());
    WeakLimitEstimate wl = estimate_weak_limit(tail, fam, opts.weak_limit);
    const double e = eval_F(wl.estimate, spec);
    round.t_estimate = e;
    round.accepted_energy = e;
    if (wl.converged && e >= opts.eps_profile) {
      round.accepted = true;
      round.note = "identity weak limit accepted";
      res.profiles.push_back(wl.estimate);
      res.dislocations.push_back(DislocationSequence::constant(
          seq.k0(), static_cast<int>(n), Dislocation::identity(spec.dim)));
      res.profile_energies.push_back(e);
      for (auto& vk : v) vk = snap_dust(vk - wl.estimate, dust);
    } else {
      zero_first_pending = true;
      round.accepted = false;
      round.note = wl.converged ? "identity weak limit below profile tolerance"
                                : "no identity weak limit: " + wl.note;
    }
    res.rounds.push_back(std::move(round));
  }

  // Later rounds: argmax recentering per member.
  while (res.profile_count() + (zero_first_pending ? 1 : 0) < opts.max_profiles) {
    ExtractionRound round;
    round.round = static_cast<int>(res.rounds.size()) + 1;
    std::vector<ScanHit> hits;
    scan_all(hits, round.defect_trace);
    round.defect_before = max_tail(round.defect_trace);
    if (round.defect_before < opts.eps_stop) {
      round.note = "remainder defect under eps_stop";
      res.rounds.push_back(std::move(round));
      break;
    }

    std::vector<Dislocation> g;
    g.reserve(n);
    for (const auto& hit : hits) g.push_back(hit.g);
    WeakLimitEstimate wl =
        estimate_weak_limit(recentered_tail(v, g, spec), fam, opts.weak_limit);
    const double e = eval_F(wl.estimate, spec);
    round.accepted_energy = e;

    // Candidate pool for the t_n ledger: the accepted estimate plus
    // constant-recentering estimates at secondary peaks of the last member.
    round.t_estimate = e;
    {
      const auto peaks = scan_peaks(v.back(), fam, opts.peak_pool,
                                    opts.peak_separation, opts.workers);
      for (const auto& peak : peaks) {
        if (group_distance(peak.g, g.back(), res.h0) < opts.peak_separation)
          continue;
        std::vector<Dislocation> cg(n, peak.g);
        WeakLimitEstimate alt =
            estimate_weak_limit(recentered_tail(v, cg, spec), fam, opts.weak_limit);
        round.t_estimate =
            std::max(round.t_estimate, eval_F(alt.estimate, spec));
      }
    }
    round.half_rule_ok = e >= 0.5 * round.t_estimate - 1e-12;

    if (e < opts.eps_profile) {
      round.note = wl.converged
                       ? "candidate profile below profile tolerance; stopping"
                       : "recentered tail did not settle and carries no stable "
                         "profile; stopping (" + wl.note + ")";
      res.rounds.push_back(std::move(round));
      break;
    }
    if (!wl.converged) {
      res.round_failure = true;
      res.failure_note = "round " + std::to_string(round.round) +
                         ": recentered tail pairing-divergent but pointwise "
                         "stable; refusing the profile (" + wl.note + ")";
      round.note = res.failure_note;
      res.rounds.push_back(std::move(round));
      break;
    }

    round.accepted = true;
    res.profiles.push_back(wl.estimate);
    DislocationSequence ds;
    ds.k0 = seq.k0();
    ds.elems = std::move(g);
    res.dislocations.push_back(std::move(ds));
    res.profile_energies.push_back(e);
    for (std::size_t k = 0; k < n; ++k)
      v[k] = snap_dust(v[k] - apply(res.dislocations.back().elems[k],
                                    res.profiles.back(), spec),
                       dust);
    res.rounds.push_back(std::move(round));

    if (res.profile_count() + (zero_first_pending ? 1 : 0) >= opts.max_profiles) {
      res.truncated = true;
      break;
    }
  }

  if (zero_first_pending) {
    if (res.profiles.empty()) {
      // Nothing extracted at all: the set of profiles stays empty.
    } else {
      res.profiles.insert(res.profiles.begin(),
                          GridFunction::zero_like(spec.dim, res.h0));
      res.dislocations.insert(
          res.dislocations.begin(),
          DislocationSequence::constant(seq.k0(), static_cast<int>(n),
                                        Dislocation::identity(spec.dim)));
      res.profile_energies.insert(res.profile_energies.begin(), 0.0);
    }
  }
  res.remainders = std::move(v);
  return res;
}

VerifyReport verify_separation(const DecompositionResult& res,
                               double threshold) {
  VerifyReport rep;
  rep.name = "separation";
  rep.pass = true;
  const int m = res.profile_count();
  if (m < 2) {
    rep.detail = "fewer than two profiles; vacuously satisfied";
    return rep;
  }
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const auto& ga = res.dislocations[static_cast<std::size_t>(a)].elems;
      const auto& gb = res.dislocations[static_cast<std::size_t>(b)].elems;
      std::vector<double> dist;
      dist.reserve(ga.size());
      for (std::size_t k = 0; k < ga.size(); ++k)
        dist.push_back(group_distance(compose(invert(ga[k]), gb[k]),
                                      Dislocation::identity(ga[k].dim()),
                                      res.h0));
      TrendCheck t = increasing_tail(dist, threshold, 0.5);
      std::ostringstream os;
      os << "pair (" << a + 1 << "," << b + 1 << "): " << t.describe();
      rep.rows.push_back(os.str());
      rep.values.push_back(dist.back());
      if (!t.pass()) rep.pass = false;
    }
  }
  rep.detail = rep.pass ? "all pairs separate" : "some pair fails to separate";
  return rep;
}

VerifyReport verify_energy_inequality(const DecompositionResult& res,
                                      const FunctionSequence& seq,
                                      const EnergySpec& spec, double tol) {
  VerifyReport rep;
  rep.name = "energy-inequality";
  double sum = 0.0;
  for (const auto& w : res.profiles) sum += eval_F(w, spec);
  std::vector<double> tail_energies;
  const std::size_t n = static_cast<std::size_t>(seq.size());
  for (std::size_t k = tail_begin(n); k < n; ++k)
    tail_energies.push_back(eval_F(seq.members()[k], spec));
  const double sup = tail_energies.empty()
                         ? 0.0
                         : *std::max_element(tail_energies.begin(),
                                             tail_energies.end());
  const double slack = sup - sum;
  rep.pass = sum <= sup + tol;
  rep.values = {sum, sup, slack};
  std::ostringstream os;
  os << "sum F(w) = " << sum << ", tail sup F(u_k) = " << sup
     << ", slack = " << slack;
  rep.detail = os.str();
  return rep;
}

VerifyReport verify_additivity(const DecompositionResult& res,
                               const EnergySpec& spec, double tol) {
  VerifyReport rep;
  rep.name = "additivity";
  if (res.profiles.empty()) {
    rep.pass = true;
    rep.detail = "no profiles; vacuously satisfied";
    return rep;
  }
  double sum = 0.0;
  for (const auto& w : res.profiles) sum += eval_F(w, spec);
  const std::size_t n = res.dislocations.front().elems.size();
  std::vector<double> defect(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    GridFunction recon = GridFunction::zero_like(spec.dim, res.h0);
    for (int p = 0; p < res.profile_count(); ++p)
      recon = recon + apply(res.dislocations[static_cast<std::size_t>(p)].elems[k],
                            res.profiles[static_cast<std::size_t>(p)], spec);
    defect[k] = std::abs(eval_F(recon, spec) - sum);
  }
  TrendCheck t = decreasing_tail(defect, tol, tol, 0.5);
  rep.pass = t.pass();
  rep.values = defect;
  rep.detail = "reconstruction energy defect: " + t.describe();
  return rep;
}

VerifyReport verify_reconstruction(const DecompositionResult& res,
                                   const FunctionSequence& seq,
                                   const EnergySpec& spec, const MassSpec& mass,
                                   const TestFunctionalFamily& fam,
                                   double defect_tol, double norm_tol,
                                   int workers) {
  VerifyReport rep;
  rep.name = "reconstruction";
  const std::size_t n = static_cast<std::size_t>(seq.size());
  std::vector<double> defects(n, 0.0), norms(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    GridFunction r = seq.members()[k];
    for (int p = 0; p < res.profile_count(); ++p)
      r = r - apply(res.dislocations[static_cast<std::size_t>(p)]
                        .elems[k],
                    res.profiles[static_cast<std::size_t>(p)], spec);
    r = r.trimmed();
    defects[k] = d_weak_defect(r, fam, workers);
    norms[k] = target_norm(r, mass);
  }
  TrendCheck td = decreasing_tail(defects, defect_tol, defect_tol, 0.5);
  TrendCheck tn = decreasing_tail(norms, norm_tol, norm_tol, 0.5);
  rep.pass = td.pass() && tn.pass();
  rep.values = {defects.back(), norms.back()};
  // Residual mass of the final remainder, for the truncation diagnosis.
  GridFunction r_last = seq.members().back();
  for (int p = 0; p < res.profile_count(); ++p)
    r_last = r_last -
             apply(res.dislocations[static_cast<std::size_t>(p)].elems.back(),
                   res.profiles[static_cast<std::size_t>(p)], spec);
  std::ostringstream os;
  os << "remainder defect: " << td.describe()
     << "; remainder target norm: " << tn.describe()
     << "; final remainder mass G = " << eval_G(r_last.trimmed(), mass);
  rep.detail = os.str();
  return rep;
}

VerifyReport verify_uniform_tail(const DecompositionResult& res,
                                 const EnergySpec& spec, double tol) {
  VerifyReport rep;
  rep.name = "uniform-tail";
  const int m = res.profile_count();
  if (m == 0) {
    rep.pass = true;
    rep.detail = "empty decomposition; empty ledger";
    return rep;
  }
  const std::size_t n = res.dislocations.front().elems.size();
  for (int start = 0; start <= m; ++start) {
    double sup = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      GridFunction tail_sum = GridFunction::zero_like(spec.dim, res.h0);
      for (int p = start; p < m; ++p)
        tail_sum = tail_sum +
                   apply(res.dislocations[static_cast<std::size_t>(p)].elems[k],
                         res.profiles[static_cast<std::size_t>(p)], spec);
      sup = std::max(sup, eval_F(tail_sum, spec));
    }
    rep.values.push_back(sup);
  }
  bool nonincreasing = true;
  for (std::size_t i = 0; i + 1 < rep.values.size(); ++i)
    if (rep.values[i + 1] > rep.values[i] + 1e-12) nonincreasing = false;
  rep.pass = nonincreasing && rep.values.back() <= tol;
  std::ostringstream os;
  os << "tail energy ledger:";
  for (double x : rep.values) os << " " << x;
  rep.detail = os.str();
  return rep;
}

} // namespace disloc
