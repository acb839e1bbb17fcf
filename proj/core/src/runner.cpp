#include "disloc/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "disloc/axioms.hpp"
#include "disloc/expr.hpp"
#include "disloc/generators.hpp"
#include "disloc/lattice_domain.hpp"
#include "disloc/parallel.hpp"
#include "disloc/serialize.hpp"
#include "disloc/symmetry.hpp"
#include "disloc/variational.hpp"

namespace disloc {

namespace {

EnergySpec parse_energy(const Config& cfg, const std::string& section) {
  const int dim = static_cast<int>(cfg.get_int_or(section, "N", 1));
  const double p = cfg.get_double_or(section, "p", 2.0);
  const std::string mode = cfg.get_string_or(section, "mode", "inhomogeneous");
  if (mode == "inhomogeneous") return EnergySpec::inhomogeneous(dim, p);
  if (mode == "homogeneous") return EnergySpec::homogeneous(dim, p);
  throw ConfigError("field [" + section + "] mode must be inhomogeneous or "
                    "homogeneous, got '" + mode + "'");
}

MassSpec parse_mass(const Config& cfg, const std::string& section) {
  return MassSpec::make(cfg.get_double_or(section, "q", 4.0));
}

TestFunctionalFamily parse_family(const Config& cfg, const EnergySpec& energy,
                                  const MassSpec& mass, double h0) {
  FamilyOptions fo;
  fo.scales = static_cast<int>(cfg.get_int_or("family", "scales", 3));
  fo.radius = cfg.get_double_or("family", "radius", 4.0);
  fo.shift_radius =
      static_cast<int>(cfg.get_int_or("family", "shift_radius", 16));
  fo.dilation_range =
      static_cast<int>(cfg.get_int_or("family", "dilation_range", 0));
  return TestFunctionalFamily::make(energy, mass, h0, fo);
}

FunctionSequence parse_sequence(const Config& cfg, const EnergySpec& energy,
                                const MassSpec& mass, double h0) {
  const std::string kind = cfg.get_string("sequence", "kind");
  const int count = static_cast<int>(cfg.get_int_or("sequence", "count", 12));
  if (kind == "two_bump")
    return gen::two_bump(energy, h0, cfg.get_double_or("sequence", "a", 1.25),
                         cfg.get_double_or("sequence", "b", 0.75),
                         cfg.get_double_or("sequence", "half_width", 4.0),
                         cfg.get_int_or("sequence", "separation", 4), count);
  if (kind == "spreading")
    return gen::spreading(energy, h0,
                          cfg.get_double_or("sequence", "amplitude", 0.08),
                          cfg.get_double_or("sequence", "half_width", 4.0),
                          count);
  if (kind == "dilating")
    return gen::dilating_pair(energy, h0,
                              cfg.get_double_or("sequence", "amp0", 1.2),
                              cfg.get_double_or("sequence", "amp1", 0.9),
                              cfg.get_double_or("sequence", "half_width", 8.0),
                              count);
  if (kind == "constant")
    return gen::constant(
        energy,
        gen::tent(energy.dim, h0, 0,
                  cfg.get_double_or("sequence", "height", 1.0),
                  cfg.get_double_or("sequence", "half_width", 4.0),
                  IndexVec(energy.dim, 0)),
        count);
  if (kind == "mirror")
    return gen::mirror(energy, h0, cfg.get_double_or("sequence", "height", 1.0),
                       cfg.get_double_or("sequence", "half_width", 4.0),
                       cfg.get_int_or("sequence", "separation", 4), count);
  if (kind == "radial") return gen::radial_2d(energy, h0, count);
  if (kind == "half_mass")
    return gen::half_mass_pair(energy, mass, h0,
                               cfg.get_double("sequence", "t"),
                               cfg.get_double_or("sequence", "half_width", 2.0),
                               cfg.get_int_or("sequence", "separation", 4),
                               count);
  if (kind == "expression") {
    const Expr term = Expr::parse(cfg.get_string("sequence", "term"));
    const auto window = cfg.get_doubles("sequence", "window");
    if (window.size() != 2 || !(window[1] > window[0]))
      throw ConfigError("field [sequence] window must be 'lo hi'");
    const int k0 = static_cast<int>(cfg.get_int_or("sequence", "k0", 1));
    return FunctionSequence::from_generator(
        k0, k0 + count - 1,
        [&](int k) {
          return GridFunction::sample(
              energy.dim, window[0], window[1], 0, h0,
              [&](const std::vector<double>& x) {
                return term.eval(x, static_cast<double>(k));
              });
        },
        energy);
  }
  throw ConfigError("field [sequence] kind '" + kind + "' is not recognized");
}

IsoperimetricProblem parse_problem(const Config& cfg) {
  IsoperimetricProblem prob;
  prob.energy = parse_energy(cfg, "problem");
  prob.mass = parse_mass(cfg, "problem");
  prob.t = cfg.get_double("problem", "t");
  const auto window = cfg.get_doubles("problem", "window");
  if (window.size() != 2)
    throw ConfigError("field [problem] window must be 'lo hi'");
  prob.window_lo = window[0];
  prob.window_hi = window[1];
  prob.h = cfg.get_double_or("problem", "h", 0.05);
  const std::string restriction =
      cfg.get_string_or("problem", "restriction", "none");
  if (restriction == "none")
    prob.restriction = SubspaceRestriction::None;
  else if (restriction == "even")
    prob.restriction = SubspaceRestriction::Even;
  else if (restriction == "radial")
    prob.restriction = SubspaceRestriction::Radial;
  else
    throw ConfigError("field [problem] restriction must be none, even or "
                      "radial, got '" + restriction + "'");

  if (cfg.has_section("potentials")) {
    const GridFunction z = prob.make_zero();
    PerturbationPair pert;
    pert.V.assign(z.size(), 0.0);
    pert.W.assign(z.size(), 0.0);
    auto fill = [&](const std::string& key, std::vector<double>& out) {
      if (!cfg.has("potentials", key)) return;
      const Expr e = Expr::parse(cfg.get_string("potentials", key));
      for (std::size_t flat = 0; flat < z.size(); ++flat)
        out[flat] = e.eval(z.node_position(flat));
    };
    fill("V", pert.V);
    fill("W", pert.W);
    prob.perturbation = std::move(pert);
  }
  prob.validate();
  return prob;
}

MinimizeOptions parse_solver(const Config& cfg, const RunConfig& rc,
                             int workers) {
  MinimizeOptions mo;
  mo.eps_energy = cfg.get_double_or("solve", "eps_energy", 1e-10);
  mo.eps_el = cfg.get_double_or("solve", "eps_el", 1e-6);
  mo.max_iterations =
      static_cast<int>(cfg.get_int_or("solve", "max_iterations", 200000));
  mo.alpha0 = cfg.get_double_or("solve", "alpha0", 0.1);
  mo.restarts = static_cast<int>(cfg.get_int_or("solve", "restarts", 3));
  mo.seed = rc.seed;
  mo.workers = workers;
  if (!(mo.eps_energy > 0.0) || !(mo.eps_el > 0.0))
    throw ConfigError("solver tolerances must be positive");
  return mo;
}

DecomposeOptions parse_decompose_options(const Config& cfg, int workers) {
  DecomposeOptions d;
  d.eps_stop = cfg.get_double_or("decompose", "eps_stop", 1e-3);
  d.eps_profile = cfg.get_double_or("decompose", "eps_profile", 1e-4);
  d.max_profiles =
      static_cast<int>(cfg.get_int_or("decompose", "max_profiles", 8));
  d.weak_limit.tol = cfg.get_double_or("decompose", "weak_limit_tol", 1e-3);
  d.workers = workers;
  if (!(d.eps_stop > 0.0) || !(d.eps_profile > 0.0))
    throw ConfigError("decompose tolerances must be positive");
  return d;
}

void write_artifact(RunReport& report, const std::string& out_dir,
                    const std::string& name, const std::string& content) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  const std::string path = (std::filesystem::path(out_dir) / name).string();
  write_text_file(path, content);
  report.artifacts.push_back(name);
}

void handle_decompose(const RunConfig& rc, RunReport& report, int workers) {
  const EnergySpec energy = parse_energy(rc.config, "space");
  const MassSpec mass = parse_mass(rc.config, "space");
  const double h0 = rc.config.get_double_or("space", "h0", 1.0);
  const TestFunctionalFamily fam = parse_family(rc.config, energy, mass, h0);
  const FunctionSequence seq = parse_sequence(rc.config, energy, mass, h0);
  const DecomposeOptions opts = parse_decompose_options(rc.config, workers);

  const DecompositionResult res = decompose(seq, energy, fam, opts);
  {
    std::ostringstream os;
    os << res.profile_count() << " profile(s), "
       << (res.truncated ? "truncated at cap" : "clean stop");
    report.add(
        "decomposition", res.round_failure ? Verdict::Fail : Verdict::Pass,
        opts.eps_stop, res.round_failure ? res.failure_note : os.str(),
        {{"profiles", static_cast<double>(res.profile_count())}});
  }
  if (rc.config.has("expect", "profiles")) {
    const int expected =
        static_cast<int>(rc.config.get_int("expect", "profiles"));
    report.add_pass_fail("expected-profile-count",
                         res.profile_count() == expected, 0,
                         "expected " + std::to_string(expected) + ", found " +
                             std::to_string(res.profile_count()));
  }

  const double sep_threshold =
      rc.config.get_double_or("verify", "separation_threshold", 8.0);
  const double energy_tol = rc.config.get_double_or("verify", "energy_tol", 1e-3);
  const double additivity_tol =
      rc.config.get_double_or("verify", "additivity_tol", 1e-4);
  const double reconstruction_tol =
      rc.config.get_double_or("verify", "reconstruction_tol", 1e-3);
  const double uniform_tol =
      rc.config.get_double_or("verify", "uniform_tail_tol", 1e-6);

  const VerifyReport vs = verify_separation(res, sep_threshold);
  report.add_pass_fail("verify-separation", vs.pass, sep_threshold, vs.detail);
  const VerifyReport ve = verify_energy_inequality(res, seq, energy, energy_tol);
  report.add_pass_fail("verify-energy-inequality", ve.pass, energy_tol,
                       ve.detail,
                       {{"slack", ve.values.size() > 2 ? ve.values[2] : 0.0}});
  const VerifyReport va = verify_additivity(res, energy, additivity_tol);
  report.add_pass_fail("verify-additivity", va.pass, additivity_tol, va.detail);
  const VerifyReport vr = verify_reconstruction(
      res, seq, energy, mass, fam, reconstruction_tol, reconstruction_tol,
      workers);
  report.add_pass_fail("verify-reconstruction", vr.pass, reconstruction_tol,
                       vr.detail);
  const VerifyReport vu = verify_uniform_tail(res, energy, uniform_tol);
  report.add_pass_fail("verify-uniform-tail", vu.pass, uniform_tol, vu.detail);

  write_artifact(report, rc.out_dir, "decomposition.json",
                 decomposition_to_json(res));
  if (!res.rounds.empty()) {
    std::vector<double> ks;
    for (int k = seq.k0(); k <= seq.k1(); ++k)
      ks.push_back(static_cast<double>(k));
    std::vector<std::vector<double>> cols{ks};
    std::vector<std::string> headers{"k"};
    for (const auto& r : res.rounds) {
      headers.push_back("defect_round_" + std::to_string(r.round));
      cols.push_back(r.defect_trace);
    }
    write_artifact(report, rc.out_dir, "defect_trace.csv",
                   csv_table(headers, cols));
  }
  for (int p = 0; p < res.profile_count(); ++p) {
    if (res.profiles[static_cast<std::size_t>(p)].dim() > 2) continue;
    write_artifact(report, rc.out_dir,
                   "profile_" + std::to_string(p + 1) + ".csv",
                   grid_to_csv(res.profiles[static_cast<std::size_t>(p)]));
  }
}

void handle_minimize(const RunConfig& rc, RunReport& report, int workers) {
  const IsoperimetricProblem prob = parse_problem(rc.config);
  const MinimizeOptions mo = parse_solver(rc.config, rc, workers);

  const MinimizerReport base = minimize_isoperimetric(prob, mo);
  report.add_pass_fail("minimize-converged", base.converged, mo.eps_el,
                       base.note,
                       {{"value", base.value},
                        {"el_residual", base.el_residual},
                        {"constraint_residual", base.constraint_residual},
                        {"multiplier", base.multiplier},
                        {"recenterings", static_cast<double>(base.recenter_log.size())}});
  report.add_pass_fail(
      "constraint-residual", base.constraint_residual <= 1e-8 * prob.t, 1e-8,
      "relative constraint residual " +
          std::to_string(base.constraint_residual / prob.t));

  write_artifact(report, rc.out_dir, "minimizer.csv",
                 grid_to_csv(base.minimizer));
  write_artifact(report, rc.out_dir, "minimizer.json",
                 grid_to_json(base.minimizer));
  write_artifact(
      report, rc.out_dir, "energy_trace.csv",
      csv_table({"objective"}, {base.energy_trace}));

  if (prob.perturbation.has_value()) {
    const MinimizerReport pen = minimize_penalized(prob, mo);
    report.add_pass_fail("penalized-converged", pen.converged, mo.eps_el,
                         pen.note,
                         {{"value", pen.value},
                          {"el_residual", pen.el_residual},
                          {"constraint_residual", pen.constraint_residual}});
    report.add_pass_fail(
        "penalized-below-unpenalized", pen.value < base.value, 0.0,
        "c'_t = " + std::to_string(pen.value) +
            " vs c_t = " + std::to_string(base.value),
        {{"c_t", base.value}, {"c_prime_t", pen.value}});
    write_artifact(report, rc.out_dir, "penalized_minimizer.csv",
                   grid_to_csv(pen.minimizer));
  }
}

void handle_subadd(const RunConfig& rc, RunReport& report, int workers) {
  const IsoperimetricProblem prob = parse_problem(rc.config);
  const MinimizeOptions mo = parse_solver(rc.config, rc, workers);
  std::vector<double> taus = rc.taus;
  if (taus.empty() && rc.config.has("subadd", "taus"))
    taus = rc.config.get_doubles("subadd", "taus");
  if (taus.empty())
    throw ConfigError("subadd needs --taus or [subadd] taus");
  const double solver_tol =
      rc.config.get_double_or("subadd", "solver_tol", 0.01);

  const SubadditivityTable table = subadditivity_table(prob, taus, mo, solver_tol);
  std::vector<double> col_tau, col_ctau, col_comp, col_ct, col_margin;
  for (const auto& row : table.rows) {
    std::ostringstream os;
    os << "tau = " << row.tau << ": c_tau + c_(t-tau) - c_t = " << row.margin;
    Verdict v = Verdict::Pass;
    if (!row.solver_ok) v = Verdict::Fail;
    if (!row.weak_ok) v = Verdict::Fail;
    report.add("subadditivity tau=" + std::to_string(row.tau), v,
               2.0 * solver_tol, os.str(),
               {{"c_tau", row.c_tau},
                {"c_complement", row.c_complement},
                {"c_t", row.c_t},
                {"margin", row.margin},
                {"strict", row.strict ? 1.0 : 0.0}});
    col_tau.push_back(row.tau);
    col_ctau.push_back(row.c_tau);
    col_comp.push_back(row.c_complement);
    col_ct.push_back(row.c_t);
    col_margin.push_back(row.margin);
  }
  write_artifact(report, rc.out_dir, "subadd.csv",
                 csv_table({"tau", "c_tau", "c_complement", "c_t", "margin"},
                           {col_tau, col_ctau, col_comp, col_ct, col_margin}));
}

void handle_verify_axioms(const RunConfig& rc, RunReport& report, int workers) {
  AxiomSuiteOptions opts;
  opts.seed = rc.seed;
  opts.workers = workers;
  opts.samples =
      static_cast<int>(rc.config.get_int_or("axioms", "samples", 200));
  if (rc.config.has("axioms", "select"))
    opts.select = rc.config.get_words("axioms", "select");
  opts.inject_fault = rc.config.get_string_or("axioms", "inject_fault", "");

  const std::vector<AxiomCheck> checks = run_axiom_suite(opts);
  if (checks.empty()) {
    report.add("axioms", Verdict::Inconclusive, 0.0,
               "empty suite selection; nothing was checked");
    return;
  }
  for (const auto& c : checks)
    report.add_pass_fail(c.name, c.pass, c.tolerance, c.detail);
}

LatticeDomain parse_domain(const Config& cfg) {
  const std::string type = cfg.get_string("domain", "type");
  const int dim = static_cast<int>(cfg.get_int_or("domain", "N", 2));
  if (type == "half_space") {
    const auto normal = cfg.get_doubles("domain", "normal");
    IndexVec n;
    for (double v : normal) n.push_back(static_cast<Index>(std::llround(v)));
    return LatticeDomain::half_space(n, cfg.get_int_or("domain", "offset", 0));
  }
  if (type == "ball") {
    IndexVec center(static_cast<std::size_t>(dim), 0);
    if (cfg.has("domain", "center")) {
      const auto c = cfg.get_doubles("domain", "center");
      center.clear();
      for (double v : c) center.push_back(static_cast<Index>(std::llround(v)));
    }
    return LatticeDomain::ball(center, cfg.get_double("domain", "radius"));
  }
  if (type == "expanding_balls")
    return LatticeDomain::expanding_balls(
        dim, static_cast<int>(cfg.get_int_or("domain", "axis", 0)),
        static_cast<int>(cfg.get_int_or("domain", "count", 64)));
  if (type == "box") {
    const auto lo = cfg.get_doubles("domain", "lo");
    const auto hi = cfg.get_doubles("domain", "hi");
    IndexVec a, b;
    for (double v : lo) a.push_back(static_cast<Index>(std::llround(v)));
    for (double v : hi) b.push_back(static_cast<Index>(std::llround(v)));
    return LatticeDomain::box(a, b);
  }
  throw ConfigError("field [domain] type '" + type + "' is not recognized");
}

std::vector<DislocationSequence> parse_shift_families(const Config& cfg,
                                                      int dim) {
  std::vector<DislocationSequence> families;
  const int count = static_cast<int>(cfg.get_int_or("shifts", "count", 12));
  for (int f = 1;; ++f) {
    const std::string key = "family" + std::to_string(f);
    if (!cfg.has("shifts", key)) break;
    const auto words = cfg.get_words("shifts", key);
    if (static_cast<int>(words.size()) != dim)
      throw ConfigError("field [shifts] " + key + " needs " +
                        std::to_string(dim) + " per-axis expressions in k");
    std::vector<Expr> exprs;
    for (const auto& w : words) exprs.push_back(Expr::parse(w));
    DislocationSequence seq;
    seq.k0 = 1;
    for (int k = 1; k <= count; ++k) {
      IndexVec y;
      for (const auto& e : exprs)
        y.push_back(static_cast<Index>(
            std::llround(e.eval({}, static_cast<double>(k)))));
      seq.elems.push_back(Dislocation::lattice_shift(y));
    }
    families.push_back(std::move(seq));
  }
  if (families.empty())
    throw ConfigError("[shifts] must define family1 = <expr per axis>");
  return families;
}

void handle_flask(const RunConfig& rc, RunReport& report, int) {
  const LatticeDomain dom = parse_domain(rc.config);
  const auto families = parse_shift_families(rc.config, dom.dim());
  FlaskOptions fo;
  fo.window_radius = rc.config.get_int_or("flask", "window_radius", 24);
  fo.witness_radius = rc.config.get_int_or("flask", "witness_radius", 8);
  fo.interior_margin = rc.config.get_int_or("flask", "margin", 4);
  fo.h0 = rc.config.get_double_or("flask", "h0", 1.0);
  fo.divergence.threshold =
      rc.config.get_double_or("flask", "divergence_threshold", 8.0);
  fo.divergence.h0 = fo.h0;

  const FlaskReport fr = flask_check(dom, families, fo);
  auto to_verdict = [](FlaskVerdict v) {
    switch (v) {
      case FlaskVerdict::Pass: return Verdict::Pass;
      case FlaskVerdict::Fail: return Verdict::Fail;
      default: return Verdict::Inconclusive;
    }
  };
  for (std::size_t f = 0; f < fr.families.size(); ++f) {
    const auto& fam = fr.families[f];
    report.add("flask-family-" + std::to_string(f + 1),
               to_verdict(fam.verdict),
               static_cast<double>(fo.window_radius), fam.note,
               {{"liminf_points", static_cast<double>(fam.liminf_size)}});
  }
  report.add("flask-overall", to_verdict(fr.verdict),
             static_cast<double>(fo.window_radius), fr.note);
}

void handle_symmetry(const RunConfig& rc, RunReport& report, int workers) {
  const std::string check =
      rc.config.get_string_or("symmetry", "check", "compactness");
  const EnergySpec energy = parse_energy(rc.config, "space");
  const MassSpec mass = parse_mass(rc.config, "space");
  const double h0 = rc.config.get_double_or("space", "h0", 1.0);

  if (check == "conjugation") {
    const std::string elem =
        rc.config.get_string_or("symmetry", "element", "reflection");
    SymmetryElement c = SymmetryElement::identity(energy.dim);
    if (elem == "reflection")
      c = SymmetryElement::reflection(energy.dim);
    else if (elem == "rotation90")
      c = SymmetryElement::rotation90();
    else if (elem != "identity")
      throw ConfigError("field [symmetry] element '" + elem +
                        "' is not recognized");
    const auto families = parse_shift_families(rc.config, energy.dim);
    DivergenceOptions dv;
    dv.h0 = h0;
    dv.threshold =
        rc.config.get_double_or("symmetry", "divergence_threshold", 8.0);
    const ConjugationReport cr =
        conjugation_divergence_check(c, families.front(), dv);
    report.add_pass_fail("conjugation-divergence", cr.pass, dv.threshold,
                         cr.note);
    return;
  }

  const std::string kind = rc.config.get_string_or("symmetry", "kind", "even");
  const SymmetrySpec sym =
      kind == "radial" ? SymmetrySpec::radial() : SymmetrySpec::even();
  const TestFunctionalFamily fam = parse_family(rc.config, energy, mass, h0);
  const FunctionSequence seq = parse_sequence(rc.config, energy, mass, h0);

  SymmetricCompactnessOptions so;
  so.decompose = parse_decompose_options(rc.config, workers);
  so.norm_tol = rc.config.get_double_or("symmetry", "norm_tol", 1e-3);
  const SymmetricCompactnessReport sr =
      symmetric_compactness_test(seq, sym, mass, fam, so);
  Verdict v = Verdict::Fail;
  if (sr.verdict == CompactnessVerdict::Pass) v = Verdict::Pass;
  if (sr.verdict == CompactnessVerdict::Caveat) v = Verdict::Caveat;
  report.add("symmetric-compactness", v, so.norm_tol, sr.note,
             {{"profiles", static_cast<double>(sr.decomposition.profile_count())},
              {"escaping", static_cast<double>(sr.escaping_profiles.size())}});
}

void handle_cocompact(const RunConfig& rc, RunReport& report, int workers) {
  const EnergySpec energy = parse_energy(rc.config, "space");
  const MassSpec mass = parse_mass(rc.config, "space");
  const double h0 = rc.config.get_double_or("space", "h0", 1.0);
  const TestFunctionalFamily fam = parse_family(rc.config, energy, mass, h0);
  const FunctionSequence seq = parse_sequence(rc.config, energy, mass, h0);

  CocompactnessOptions co;
  co.defect_tol = rc.config.get_double_or("cocompact", "defect_tol", 0.05);
  co.norm_tol = rc.config.get_double_or("cocompact", "norm_tol", 0.2);
  co.workers = workers;
  const CocompactnessReport cr = cocompactness_check(seq, mass, fam, co);

  Verdict v = Verdict::Pass;
  std::string label = "consistent";
  if (cr.verdict == CocompactnessVerdict::PremiseNotTriggered)
    label = "consistent (premise not triggered)";
  if (cr.verdict == CocompactnessVerdict::Violation) {
    v = Verdict::Fail;
    label = "violation";
  }
  report.add("cocompactness", v, co.defect_tol, label + ": " + cr.note,
             {{"final_defect", cr.defects.empty() ? 0.0 : cr.defects.back()},
              {"final_norm",
               cr.target_norms.empty() ? 0.0 : cr.target_norms.back()}});

  std::vector<double> ks;
  for (int k = seq.k0(); k <= seq.k1(); ++k)
    ks.push_back(static_cast<double>(k));
  write_artifact(report, rc.out_dir, "cocompact_trace.csv",
                 csv_table({"k", "defect", "target_norm"},
                           {ks, cr.defects, cr.target_norms}));
}

} // namespace

RunReport run(const RunConfig& rc) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.command = rc.command;
  report.seed = rc.seed;
  report.config_echo = rc.config.raw();
  const int workers = rc.workers > 0 ? rc.workers : default_workers();

  if (rc.command == "decompose")
    handle_decompose(rc, report, workers);
  else if (rc.command == "minimize")
    handle_minimize(rc, report, workers);
  else if (rc.command == "subadd")
    handle_subadd(rc, report, workers);
  else if (rc.command == "verify-axioms")
    handle_verify_axioms(rc, report, workers);
  else if (rc.command == "flask")
    handle_flask(rc, report, workers);
  else if (rc.command == "symmetry")
    handle_symmetry(rc, report, workers);
  else if (rc.command == "cocompact")
    handle_cocompact(rc, report, workers);
  else
    throw ConfigError("unknown command '" + rc.command + "'");

  const auto t1 = std::chrono::steady_clock::now();
  const double elapsed =
      std::chrono::duration_cast<std::chrono::duration<double>>(t1 - t0).count();
  if (!rc.out_dir.empty()) write_report(report, rc.out_dir, elapsed);
  return report;
}

} // namespace disloc
