#include "disloc/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "disloc/generators.hpp"
#include "disloc/test_family.hpp"
#include "disloc/trend.hpp"

namespace disloc {

namespace {

GridFunction random_signed(Rng& rng, int dim, double h0) {
  const GridFunction a = gen::random_smooth(rng, dim, h0, 8.0);
  const GridFunction b = gen::random_smooth(rng, dim, h0, 8.0);
  return a - b.scaled(rng.uniform(0.0, 1.0));
}

bool selected(const AxiomSuiteOptions& opts, const std::string& name) {
  if (opts.select.empty()) return true;
  return std::find(opts.select.begin(), opts.select.end(), name) !=
         opts.select.end();
}

// The composite convex functional used to exercise the gauge solver beyond
// the homogeneous case.
double composite_F(const GridFunction& u) {
  const double h = u.spacing();
  double hN = 1.0;
  for (int d = 0; d < u.dim(); ++d) hN *= h;
  double s2 = 0.0, s4 = 0.0;
  for (double v : u.samples()) {
    const double v2 = v * v;
    s2 += v2;
    s4 += v2 * v2;
  }
  return (s2 + s4) * hN;
}

struct SuiteContext {
  const AxiomSuiteOptions& opts;
  EnergySpec inhom = EnergySpec::inhomogeneous(1, 2.0);
  EnergySpec homog = EnergySpec::homogeneous(2, 1.5);
  MassSpec mass = MassSpec::make(4.0);
};

AxiomCheck gauge_homogeneity(const SuiteContext& ctx) {
  AxiomCheck c{"gauge-homogeneity", true, 1e-12, ""};
  Rng rng(ctx.opts.seed);
  double worst = 0.0;
  for (int s = 0; s < ctx.opts.samples; ++s) {
    const GridFunction u = random_signed(rng, 1, 1.0);
    if (u.is_zero()) continue;
    const double scale = rng.uniform(-3.0, 3.0);
    if (scale == 0.0) continue;
    for (int variant = 0; variant < 2; ++variant) {
      const double lu = variant == 0 ? gauge_norm(u, ctx.inhom)
                                     : gauge_norm(u, composite_F);
      const double lcu = variant == 0 ? gauge_norm(u.scaled(scale), ctx.inhom)
                                      : gauge_norm(u.scaled(scale), composite_F);
      const double err = std::abs(lcu - std::abs(scale) * lu) / lcu;
      worst = std::max(worst, err);
    }
  }
  c.pass = worst <= c.tolerance;
  std::ostringstream os;
  os << "worst relative homogeneity error " << worst;
  c.detail = os.str();
  return c;
}

AxiomCheck gauge_triangle(const SuiteContext& ctx) {
  AxiomCheck c{"gauge-triangle", true, 1e-12, ""};
  Rng rng(ctx.opts.seed + 1);
  double worst = -1.0;
  for (int s = 0; s < ctx.opts.samples; ++s) {
    const GridFunction u = random_signed(rng, 1, 1.0);
    const GridFunction v = random_signed(rng, 1, 1.0);
    for (int variant = 0; variant < 2; ++variant) {
      auto lam = [&](const GridFunction& w) {
        return variant == 0 ? gauge_norm(w, ctx.inhom)
                            : gauge_norm(w, composite_F);
      };
      const double excess = lam(u + v) - lam(u) - lam(v);
      worst = std::max(worst, excess);
      if (excess > c.tolerance) c.pass = false;
    }
  }
  std::ostringstream os;
  os << "worst triangle excess " << worst;
  c.detail = os.str();
  return c;
}

AxiomCheck gauge_positivity(const SuiteContext& ctx) {
  AxiomCheck c{"gauge-positivity", true, 0.0, ""};
  Rng rng(ctx.opts.seed + 2);
  const GridFunction zero = GridFunction::zero_like(1, 1.0);
  if (gauge_norm(zero, ctx.inhom) != 0.0 || gauge_norm(zero, composite_F) != 0.0)
    c.pass = false;
  for (int s = 0; s < ctx.opts.samples; ++s) {
    const GridFunction u = random_signed(rng, 1, 1.0);
    if (u.is_zero()) continue;
    if (!(gauge_norm(u, ctx.inhom) > 0.0)) c.pass = false;
    if (!(gauge_norm(u, composite_F) > 0.0)) c.pass = false;
  }
  c.detail = "gauge vanishes exactly on the zero function";
  return c;
}

AxiomCheck gauge_consistency(const SuiteContext& ctx) {
  AxiomCheck c{"gauge-consistency", true, 1e-10, ""};
  Rng rng(ctx.opts.seed + 3);
  double worst = 0.0;
  for (int s = 0; s < std::min(ctx.opts.samples, 100); ++s) {
    const GridFunction u = random_signed(rng, 1, 1.0);
    if (u.is_zero()) continue;
    {
      const double lam = gauge_norm(u, ctx.inhom);
      worst = std::max(worst,
                       std::abs(eval_F(u.scaled(1.0 / lam), ctx.inhom) - 1.0));
    }
    {
      const double lam = gauge_norm(u, composite_F);
      worst = std::max(worst, std::abs(composite_F(u.scaled(1.0 / lam)) - 1.0));
    }
  }
  c.pass = worst <= c.tolerance;
  std::ostringstream os;
  os << "worst |F(u/lambda) - 1| = " << worst;
  c.detail = os.str();
  return c;
}

AxiomCheck action_invariance(const SuiteContext& ctx) {
  AxiomCheck c{"action-invariance", true, 1e-12, ""};
  Rng rng(ctx.opts.seed + 4);
  const bool faulty = ctx.opts.inject_fault == "action-scale";
  const MassSpec critical = MassSpec::make(ctx.homog.critical_exponent());
  double worst = 0.0;
  for (int s = 0; s < std::min(ctx.opts.samples, 60); ++s) {
    // Shift-only group on W^{1,p}-type energy.
    {
      const GridFunction u = random_signed(rng, 1, 1.0);
      const Dislocation g = Dislocation::lattice_shift(
          {rng.uniform_int(-20, 20)});
      GridFunction gu = apply(g, u, ctx.inhom);
      if (faulty)
        for (double& v : gu.mutable_samples()) v *= 1.0 + 1e-3;
      const double f0 = eval_F(u, ctx.inhom);
      const double f1 = eval_F(gu, ctx.inhom);
      worst = std::max(worst, std::abs(f1 - f0) / std::max(1.0, f0));
      const double g0 = eval_G(u, ctx.mass);
      const double g1 = eval_G(gu, ctx.mass);
      worst = std::max(worst, std::abs(g1 - g0) / std::max(1.0, g0));
    }
    // Shift + dilation group on the gradient-only energy, q = p*.
    {
      Rng local(ctx.opts.seed + 100 + static_cast<std::uint64_t>(s));
      const GridFunction u = gen::random_smooth(local, 2, 1.0, 6.0);
      const Dislocation g = Dislocation::make(
          static_cast<int>(local.uniform_int(-2, 3)),
          {local.uniform_int(-8, 8), local.uniform_int(-8, 8)}, 0);
      GridFunction gu = apply(g, u, ctx.homog);
      if (faulty)
        for (double& v : gu.mutable_samples()) v *= 1.0 + 1e-3;
      const double f0 = eval_F(u, ctx.homog);
      const double f1 = eval_F(gu, ctx.homog);
      worst = std::max(worst, std::abs(f1 - f0) / std::max(1e-12, f0));
      const double g0 = eval_G(u, critical);
      const double g1 = eval_G(gu, critical);
      worst = std::max(worst, std::abs(g1 - g0) / std::max(1e-12, g0));
    }
  }
  c.pass = worst <= c.tolerance;
  std::ostringstream os;
  os << "worst relative invariance defect " << worst
     << (faulty ? " (fault injected)" : "");
  c.detail = os.str();
  return c;
}

AxiomCheck newii_surrogate(const SuiteContext& ctx) {
  AxiomCheck c{"newii-surrogate", true, 1e-3, ""};
  Rng rng(ctx.opts.seed + 5);
  auto fam = TestFunctionalFamily::make(ctx.inhom, ctx.mass, 1.0, {});
  const int count = 10;
  std::vector<double> defects;
  for (int k = 1; k <= count; ++k) {
    GridFunction u =
        gen::tent(1, 1.0, 0, 1.0 / static_cast<double>(k * k), 4.0, {0});
    const Dislocation g = Dislocation::lattice_shift({rng.uniform_int(-3, 3)});
    defects.push_back(pairing_defect(apply(g, u, ctx.inhom), fam));
  }
  TrendCheck t = decreasing_tail(defects, c.tolerance, 1e-12, 0.5);
  c.pass = t.pass();
  c.detail = "bounded dislocations of a strongly null sequence: " + t.describe();
  return c;
}

AxiomCheck wbl_check(const SuiteContext& ctx) {
  AxiomCheck c{"wbl", true, 1e-9, ""};
  const GridFunction w1 = gen::tent(1, 1.0, 0, 1.2, 4.0, {0});
  const GridFunction w2 = gen::tent(1, 1.0, 0, 0.7, 3.0, {0});
  const double target = eval_F(w1, ctx.inhom) + eval_F(w2, ctx.inhom);
  double liminf = std::numeric_limits<double>::infinity();
  for (int k = 6; k <= 12; ++k) {
    GridFunction moved = w2;
    moved.translate({6 * k});
    liminf = std::min(liminf, eval_F(w1 + moved, ctx.inhom));
  }
  c.pass = liminf >= target - c.tolerance;
  std::ostringstream os;
  os << "tail liminf F(u_k) = " << liminf << " vs sum of profile energies "
     << target;
  c.detail = os.str();
  return c;
}

AxiomCheck w1bl_check(const SuiteContext& ctx) {
  AxiomCheck c{"w1bl", true, 1e-9, ""};
  const GridFunction w1 = gen::tent(1, 1.0, 0, 1.2, 4.0, {0});
  const GridFunction w2 = gen::tent(1, 1.0, 0, 0.7, 3.0, {0});
  const double sum = eval_F(w1, ctx.inhom) + eval_F(w2, ctx.inhom);
  std::vector<double> defects;
  for (int k = 1; k <= 12; ++k) {
    GridFunction moved = w2;
    moved.translate({6 * k});
    defects.push_back(std::abs(eval_F(w1 + moved, ctx.inhom) - sum));
  }
  TrendCheck t = decreasing_tail(defects, c.tolerance, c.tolerance, 0.5);
  c.pass = t.pass();
  c.detail = "energy additivity over separating sums: " + t.describe();
  return c;
}

AxiomCheck brezis_lieb(const SuiteContext& ctx) {
  AxiomCheck c{"brezis-lieb", true, 1e-6, ""};
  const GridFunction bump = gen::sample_box(
      1, 1.0, 0, 70.0,
      [](const std::vector<double>& x) { return std::exp(-0.3 * std::abs(x[0])); });
  std::vector<double> defects;
  for (int m = 0; m <= 6; ++m) {
    GridFunction moved = bump;
    moved.translate({Index{1} << m});
    defects.push_back(bl_defect(bump, moved, ctx.mass));
  }
  bool strict = true;
  for (std::size_t i = 0; i + 1 < defects.size(); ++i)
    if (!(defects[i + 1] < defects[i])) strict = false;
  c.pass = strict && defects.back() < c.tolerance;
  std::ostringstream os;
  os << "defects across separations 1..64:";
  for (double d : defects) os << " " << d;
  c.detail = os.str();
  return c;
}

AxiomCheck weak_null(const SuiteContext& ctx) {
  AxiomCheck c{"weak-null", true, 0.05, ""};
  auto fam = TestFunctionalFamily::make(ctx.inhom, ctx.mass, 1.0, {});
  bool all = true;
  std::ostringstream os;
  // Three families with F(u_k) -> 0; the defect must decay as well.
  for (int familyIdx = 0; familyIdx < 3; ++familyIdx) {
    std::vector<double> defects;
    for (int m = 0; m < 7; ++m) {
      const double k = std::ldexp(1.0, m);
      GridFunction u;
      if (familyIdx == 0) {
        u = gen::tent(1, 1.0, 0, 0.8 / k, 4.0, {0});
      } else if (familyIdx == 1) {
        u = gen::tent(1, 1.0, 0, 0.6 / k, 3.0, {static_cast<Index>(4.0 * k)});
      } else {
        u = gen::sample_box(1, 1.0, 0, 4.0 * k + 2.0,
                            [&](const std::vector<double>& x) {
                              const double v =
                                  1.0 - std::abs(x[0]) / (4.0 * k);
                              return v > 0.0 ? 0.3 * std::pow(k, -0.75) * v : 0.0;
                            });
      }
      defects.push_back(d_weak_defect(u.trimmed(), fam, ctx.opts.workers));
    }
    TrendCheck t = decreasing_tail(defects, c.tolerance, 1e-12, 0.5);
    if (!t.pass()) all = false;
    os << "family " << familyIdx + 1 << ": " << t.describe() << "; ";
  }
  c.pass = all;
  c.detail = os.str();
  return c;
}

} // namespace

std::vector<AxiomCheck> run_axiom_suite(const AxiomSuiteOptions& opts) {
  SuiteContext ctx{opts};
  std::vector<AxiomCheck> out;
  auto maybe = [&](const std::string& name, auto&& fn) {
    if (selected(opts, name)) out.push_back(fn(ctx));
  };
  maybe("gauge-homogeneity", gauge_homogeneity);
  maybe("gauge-triangle", gauge_triangle);
  maybe("gauge-positivity", gauge_positivity);
  maybe("gauge-consistency", gauge_consistency);
  maybe("action-invariance", action_invariance);
  maybe("newii-surrogate", newii_surrogate);
  maybe("wbl", wbl_check);
  maybe("w1bl", w1bl_check);
  maybe("brezis-lieb", brezis_lieb);
  maybe("weak-null", weak_null);
  return out;
}

} // namespace disloc
