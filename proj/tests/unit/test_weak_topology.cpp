#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "disloc/generators.hpp"
#include "disloc/rng.hpp"
#include "disloc/weak_topology.hpp"

using namespace disloc;

namespace {

const EnergySpec kSpec = EnergySpec::inhomogeneous(1, 2.0);
const MassSpec kMass = MassSpec::make(4.0);

TestFunctionalFamily family(int shift_radius = 16) {
  FamilyOptions fo;
  fo.shift_radius = shift_radius;
  return TestFunctionalFamily::make(kSpec, kMass, 1.0, fo);
}

} // namespace

TEST_CASE("family construction and validation") {
  CHECK_THROWS_AS(
      TestFunctionalFamily::make(kSpec, kMass, 1.0, FamilyOptions{0, 4.0, 16, 0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      TestFunctionalFamily::make(kSpec, kMass, 1.0, FamilyOptions{3, 4.0, -1, 0}),
      std::invalid_argument);
  const auto fam = family();
  CHECK(fam.members().size() == 3);
  // Unit target norm under the continuum tent formula.
  for (const auto& phi : fam.members()) {
    const double axis = 2.0 * phi.half_width / (kMass.q + 1.0);
    CHECK(std::pow(phi.height, kMass.q) * axis == doctest::Approx(1.0));
  }
  // Inhomogeneous mode forces a shift-only scan.
  CHECK(fam.dilation_range() == 0);
}

TEST_CASE("pairing examples") {
  const auto fam = family();
  const TestFunctional& phi = fam.members().front();
  CHECK(pairing(GridFunction::zero_like(1, 1.0), phi) == 0.0);

  // Self pairing of a sampled tent against the closed form of the discrete
  // sum: h A^2 (2m^2 + 1) / (3m) for half-width m*h, center on a node.
  const GridFunction tphi = phi.materialize(0, 1.0);
  const double m = phi.half_width;
  const double expected =
      phi.height * phi.height * (2.0 * m * m + 1.0) / (3.0 * m);
  CHECK(pairing(tphi, phi) == doctest::Approx(expected).epsilon(1e-10));

  // Bilinearity.
  Rng rng(9);
  const GridFunction u = gen::random_smooth(rng, 1, 1.0, 6.0);
  const GridFunction v = gen::random_smooth(rng, 1, 1.0, 6.0);
  const double a = 2.75;
  CHECK(pairing(u.scaled(a) + v, phi) ==
        doctest::Approx(a * pairing(u, phi) + pairing(v, phi)).epsilon(1e-12));
}

TEST_CASE("grid-grid pairing reconciles levels") {
  const GridFunction a = gen::tent(1, 1.0, 0, 1.0, 4.0, {0});
  const GridFunction b = gen::tent(1, 1.0, 2, 1.0, 4.0, {0});
  // Same continuum tent at different levels: pairing equals the level-2
  // discrete sum of the squared tent.
  const double direct = pairing(b, b);
  CHECK(pairing(a, b) == doctest::Approx(direct).epsilon(1e-14));
  const GridFunction c(1, {0}, {1}, 0, 0.3, {1.0});
  CHECK_THROWS_AS(pairing(a, c), std::invalid_argument);
}

TEST_CASE("defect of zero and location independence of a bump") {
  const auto fam = family(24);
  CHECK(d_weak_defect(GridFunction::zero_like(1, 1.0), fam) == 0.0);
  const GridFunction bump = gen::tent(1, 1.0, 0, 1.0, 2.0, {0});
  const double at_origin = d_weak_defect(bump, fam);
  CHECK(at_origin > 0.0);
  for (Index shift : {-20, -7, 5, 18}) {
    GridFunction moved = bump;
    moved.translate({shift});
    CHECK(d_weak_defect(moved, fam) == at_origin);
  }
}

TEST_CASE("scan invariance under in-range dislocations") {
  const auto fam = family(24);
  Rng rng(31);
  const GridFunction u = gen::random_smooth(rng, 1, 1.0, 5.0).trimmed();
  const double base = d_weak_defect(u, fam);
  for (Index shift : {-6, 3, 11}) {
    const GridFunction moved =
        apply(Dislocation::lattice_shift({shift}), u, kSpec);
    CHECK(d_weak_defect(moved, fam) == base);
  }
}

TEST_CASE("defect scans are deterministic across worker counts") {
  const auto fam = family(24);
  Rng rng(77);
  const GridFunction u = gen::random_smooth(rng, 1, 1.0, 6.0).trimmed();
  const ScanHit h1 = best_recentering(u, fam, 1);
  const ScanHit h4 = best_recentering(u, fam, 4);
  CHECK(h1.g == h4.g);
  CHECK(h1.member == h4.member);
  CHECK(h1.value == h4.value);
}

TEST_CASE("spreading family has strictly decreasing defect") {
  const auto fam = family(16);
  const FunctionSequence seq = gen::spreading(kSpec, 1.0, 0.08, 4.0, 7);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& u : seq.members()) {
    const double d = d_weak_defect(u.trimmed(), fam);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("estimate_weak_limit: constant tail returns the constant") {
  const auto fam = family();
  const GridFunction w = gen::tent(1, 1.0, 0, 0.9, 3.0, {1});
  std::vector<GridFunction> tail(6, w);
  const WeakLimitEstimate wl = estimate_weak_limit(tail, fam);
  CHECK(wl.converged);
  for (double d : wl.discrepancies) CHECK(d == 0.0);
  CHECK(wl.estimate.value_at({1}) == doctest::Approx(0.9));
  CHECK_FALSE(wl.masked_any);
}

TEST_CASE("estimate_weak_limit requires at least 4 members") {
  const auto fam = family();
  std::vector<GridFunction> tail(3, GridFunction::zero_like(1, 1.0));
  CHECK_THROWS_AS(estimate_weak_limit(tail, fam), std::invalid_argument);
}

TEST_CASE("estimate_weak_limit: escaping bump is masked out of the limit") {
  const auto fam = family();
  const GridFunction w = gen::tent(1, 1.0, 0, 1.1, 3.0, {0});
  std::vector<GridFunction> tail;
  for (int k = 1; k <= 8; ++k) {
    GridFunction esc = gen::tent(1, 1.0, 0, 0.8, 3.0, {0});
    esc.translate({12 * k});
    tail.push_back(w + esc);
  }
  const WeakLimitEstimate wl = estimate_weak_limit(tail, fam);
  CHECK(wl.converged);
  CHECK(wl.masked_any);
  // Pairings of the estimate match those of w.
  for (const auto& phi : fam.members())
    CHECK(pairing(wl.estimate, phi) ==
          doctest::Approx(pairing(w, phi)).epsilon(1e-9));
  // And the escaping part is gone pointwise.
  CHECK(wl.estimate.value_at({12 * 8}) == 0.0);
}

TEST_CASE("estimate_weak_limit: oscillating tail does not converge") {
  const auto fam = family();
  const GridFunction w = gen::tent(1, 1.0, 0, 1.0, 3.0, {0});
  std::vector<GridFunction> tail;
  for (int k = 1; k <= 8; ++k) tail.push_back(w.scaled(k % 2 ? 1.0 : -1.0));
  const WeakLimitEstimate wl = estimate_weak_limit(tail, fam);
  CHECK_FALSE(wl.converged);
}

TEST_CASE("cocompactness_check exponent gate") {
  const auto fam = family();
  const FunctionSequence seq =
      gen::constant(kSpec, gen::tent(1, 1.0, 0, 1.0, 2.0, {0}), 6);
  CHECK_THROWS_AS(cocompactness_check(seq, MassSpec::make(1.5), fam),
                  std::invalid_argument);
}

TEST_CASE("cocompactness_check: zero sequence is trivially consistent") {
  const auto fam = family();
  const FunctionSequence seq =
      gen::constant(kSpec, GridFunction::zero_like(1, 1.0), 6);
  const CocompactnessReport rep = cocompactness_check(seq, kMass, fam);
  CHECK(rep.verdict == CocompactnessVerdict::Consistent);
}

TEST_CASE("cocompactness_check: spreading family is consistent") {
  const auto fam = family(16);
  const FunctionSequence seq = gen::spreading(kSpec, 1.0, 0.08, 4.0, 7);
  const CocompactnessReport rep = cocompactness_check(seq, kMass, fam);
  CHECK(rep.verdict == CocompactnessVerdict::Consistent);
  CHECK(rep.defect_trend.pass());
  CHECK(rep.norm_trend.pass());
}

TEST_CASE("cocompactness_check: fixed bump never triggers the premise") {
  const auto fam = family();
  const FunctionSequence seq =
      gen::constant(kSpec, gen::tent(1, 1.0, 0, 1.0, 2.0, {0}), 6);
  const CocompactnessReport rep = cocompactness_check(seq, kMass, fam);
  CHECK(rep.verdict == CocompactnessVerdict::PremiseNotTriggered);
}

TEST_CASE("weak-null families (strong null implies defect null)") {
  const auto fam = family(16);
  for (int familyIdx = 0; familyIdx < 3; ++familyIdx) {
    std::vector<double> energies, defects;
    for (int m = 0; m < 7; ++m) {
      const double k = std::ldexp(1.0, m);
      GridFunction u;
      if (familyIdx == 0) u = gen::tent(1, 1.0, 0, 0.8 / k, 4.0, {0});
      if (familyIdx == 1)
        u = gen::tent(1, 1.0, 0, 0.6 / k, 3.0, {static_cast<Index>(2 * k)});
      if (familyIdx == 2)
        u = gen::sample_box(1, 1.0, 0, 4.0 * k + 2.0,
                            [&](const std::vector<double>& x) {
                              const double v = 1.0 - std::abs(x[0]) / (4.0 * k);
                              return v > 0.0 ? 0.3 * std::pow(k, -0.75) * v
                                             : 0.0;
                            });
      energies.push_back(eval_F(u, kSpec));
      defects.push_back(d_weak_defect(u.trimmed(), fam));
    }
    CHECK(decreasing_tail(energies, 0.5, 1e-12, 0.5).monotone);
    CHECK(decreasing_tail(defects, 0.05, 1e-12, 0.5).pass());
  }
}

TEST_CASE("far-field defect sees escaping bumps and ignores confined ones") {
  const auto fam = family(32);
  const GridFunction confined = gen::tent(1, 1.0, 0, 1.0, 3.0, {2});
  CHECK(d_weak_defect_far(confined, fam, 10.0) == 0.0);
  GridFunction far_bump = gen::tent(1, 1.0, 0, 1.0, 3.0, {0});
  far_bump.translate({25});
  CHECK(d_weak_defect_far(far_bump, fam, 10.0) > 0.1);
}
