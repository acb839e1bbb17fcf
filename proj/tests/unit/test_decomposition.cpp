#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "disloc/decomposition.hpp"
#include "disloc/generators.hpp"
#include "disloc/rng.hpp"

using namespace disloc;

namespace {

const EnergySpec kSpec = EnergySpec::inhomogeneous(1, 2.0);
const MassSpec kMass = MassSpec::make(4.0);

TestFunctionalFamily family(int shift_radius = 56) {
  FamilyOptions fo;
  fo.shift_radius = shift_radius;
  return TestFunctionalFamily::make(kSpec, kMass, 1.0, fo);
}

double max_error_vs(const GridFunction& w, const GridFunction& truth) {
  const GridFunction diff = w - truth;
  return diff.max_abs();
}

} // namespace

TEST_CASE("zero sequence: empty decomposition") {
  const auto fam = family();
  const FunctionSequence seq =
      gen::constant(kSpec, GridFunction::zero_like(1, 1.0), 6);
  const DecompositionResult res = decompose(seq, kSpec, fam);
  CHECK(res.profile_count() == 0);
  CHECK_FALSE(res.truncated);
  CHECK(res.rounds.front().defect_before == 0.0);
  CHECK(verify_separation(res).pass);
  CHECK(verify_uniform_tail(res, kSpec).pass);
}

TEST_CASE("constant sequence: single identity profile") {
  const auto fam = family();
  const GridFunction w = gen::tent(1, 1.0, 0, 1.0, 4.0, {0});
  const FunctionSequence seq = gen::constant(kSpec, w, 8);
  const DecompositionResult res = decompose(seq, kSpec, fam);
  REQUIRE(res.profile_count() == 1);
  CHECK(res.dislocations.front().elems.front().is_identity());
  CHECK(max_error_vs(res.profiles.front(), w) < 1e-12);
  for (const auto& r : res.remainders) CHECK(r.max_abs() < 1e-12);
  CHECK(verify_energy_inequality(res, seq, kSpec).pass);
  CHECK(verify_additivity(res, kSpec).pass);
  CHECK(verify_reconstruction(res, seq, kSpec, kMass, fam).pass);
}

TEST_CASE("two-bump recovery with exact dislocations") {
  const auto fam = family();
  const double a = 1.25, b = 0.75;
  const FunctionSequence seq = gen::two_bump(kSpec, 1.0, a, b, 4.0, 4, 12);
  const DecompositionResult res = decompose(seq, kSpec, fam);
  REQUIRE(res.profile_count() == 2);

  const GridFunction truth1 = gen::tent(1, 1.0, 0, a, 4.0, {0});
  const GridFunction truth2 = gen::tent(1, 1.0, 0, b, 4.0, {0});
  CHECK(max_error_vs(res.profiles[0], truth1) < 1e-3);
  CHECK(max_error_vs(res.profiles[1], truth2) < 1e-3);

  for (int k = seq.k0(); k <= seq.k1(); ++k) {
    CHECK(res.dislocations[0].at(k).is_identity());
    CHECK(res.dislocations[1].at(k).shift_at_level(0) == IndexVec{4 * k});
    CHECK(res.dislocations[1].at(k).dilation == 0);
  }

  CHECK(verify_separation(res).pass);
  const VerifyReport ve = verify_energy_inequality(res, seq, kSpec);
  CHECK(ve.pass);
  CHECK(std::abs(ve.values[2]) < 1e-3); // slack
  CHECK(verify_additivity(res, kSpec).pass);
  CHECK(verify_reconstruction(res, seq, kSpec, kMass, fam).pass);
  CHECK(verify_uniform_tail(res, kSpec).pass);

  // Round ledger: the accepted profile obeys the half-rule bookkeeping and
  // the best pairing strictly decreases across extraction rounds.
  for (const auto& r : res.rounds)
    if (r.accepted) CHECK(r.half_rule_ok);
  for (std::size_t i = 0; i + 1 < res.rounds.size(); ++i)
    CHECK(res.rounds[i + 1].defect_before < res.rounds[i].defect_before);
}

TEST_CASE("spreading sequence yields no profiles") {
  const auto fam = family(16);
  const FunctionSequence seq = gen::spreading(kSpec, 1.0, 0.08, 4.0, 7);
  const DecompositionResult res = decompose(seq, kSpec, fam);
  CHECK(res.profile_count() == 0);
  CHECK_FALSE(res.round_failure);
}

TEST_CASE("escaping bump: zero first profile plus one dislocated profile") {
  const auto fam = family();
  const GridFunction w = gen::tent(1, 1.0, 0, 1.0, 3.0, {0});
  const FunctionSequence seq = FunctionSequence::from_generator(
      1, 10,
      [&](int k) {
        GridFunction moved = w;
        moved.translate({5 * k});
        return moved;
      },
      kSpec);
  const DecompositionResult res = decompose(seq, kSpec, fam);
  REQUIRE(res.profile_count() == 2);
  CHECK(res.profiles[0].is_zero()); // renumbered placeholder, g^(1) = id
  CHECK(res.dislocations[0].elems.front().is_identity());
  CHECK(max_error_vs(res.profiles[1], w) < 1e-9);
  CHECK(verify_separation(res).pass);
}

TEST_CASE("profile cap truncates and reconstruction reports residual mass") {
  const auto fam = family(80);
  // Three escaping bumps at different speeds, cap at 2 profiles.
  const GridFunction w = gen::tent(1, 1.0, 0, 1.0, 3.0, {0});
  const FunctionSequence seq = FunctionSequence::from_generator(
      1, 10,
      [&](int k) {
        GridFunction b1 = w, b2 = w.scaled(0.8), b3 = w.scaled(0.6);
        b1.translate({4 * k});
        b2.translate({-4 * k});
        b3.translate({8 * k});
        return b1 + b2 + b3;
      },
      kSpec);
  DecomposeOptions opts;
  opts.max_profiles = 2;
  const DecompositionResult res = decompose(seq, kSpec, fam, opts);
  CHECK(res.truncated);
  CHECK(res.profile_count() == 2);
  const VerifyReport vr = verify_reconstruction(res, seq, kSpec, kMass, fam);
  CHECK_FALSE(vr.pass);
  CHECK(vr.detail.find("remainder mass") != std::string::npos);
}

TEST_CASE("hand-built coincident dislocations fail separation") {
  DecompositionResult res;
  res.h0 = 1.0;
  res.profiles = {gen::tent(1, 1.0, 0, 1.0, 2.0, {0}),
                  gen::tent(1, 1.0, 0, 0.5, 2.0, {0})};
  DislocationSequence ds;
  ds.k0 = 1;
  for (int k = 1; k <= 8; ++k)
    ds.elems.push_back(Dislocation::lattice_shift({3 * k}));
  res.dislocations = {ds, ds};
  const VerifyReport rep = verify_separation(res);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("overlapping profiles fail additivity") {
  DecompositionResult res;
  res.h0 = 1.0;
  const GridFunction w = gen::tent(1, 1.0, 0, 1.0, 4.0, {0});
  res.profiles = {w, w};
  res.dislocations = {
      DislocationSequence::constant(1, 8, Dislocation::identity(1)),
      DislocationSequence::constant(1, 8, Dislocation::lattice_shift({1}))};
  const VerifyReport rep = verify_additivity(res, kSpec);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("uniform tail ledger for one and two profiles") {
  const auto fam = family();
  {
    const GridFunction w = gen::tent(1, 1.0, 0, 1.0, 4.0, {0});
    const FunctionSequence seq = gen::constant(kSpec, w, 8);
    const DecompositionResult res = decompose(seq, kSpec, fam);
    const VerifyReport rep = verify_uniform_tail(res, kSpec);
    REQUIRE(rep.values.size() == 2);
    CHECK(rep.values[0] == doctest::Approx(eval_F(w, kSpec)));
    CHECK(rep.values[1] == 0.0);
    CHECK(rep.pass);
  }
  {
    const FunctionSequence seq = gen::two_bump(kSpec, 1.0, 1.0, 0.6, 4.0, 4, 12);
    const DecompositionResult res = decompose(seq, kSpec, fam);
    const VerifyReport rep = verify_uniform_tail(res, kSpec);
    REQUIRE(rep.values.size() == 3);
    CHECK(rep.values[0] >= rep.values[1]);
    CHECK(rep.values[1] >= rep.values[2]);
    CHECK(rep.values[2] == 0.0);
  }
}

TEST_CASE("idempotence: re-decomposing a reconstruction recovers profiles") {
  const auto fam = family();
  const FunctionSequence seq = gen::two_bump(kSpec, 1.0, 1.25, 0.75, 4.0, 4, 12);
  const DecompositionResult first = decompose(seq, kSpec, fam);
  REQUIRE(first.profile_count() == 2);

  const FunctionSequence rebuilt = FunctionSequence::from_generator(
      seq.k0(), seq.k1(),
      [&](int k) {
        GridFunction u = GridFunction::zero_like(1, 1.0);
        for (int p = 0; p < first.profile_count(); ++p)
          u = u + apply(first.dislocations[static_cast<std::size_t>(p)].at(k),
                        first.profiles[static_cast<std::size_t>(p)], kSpec);
        return u;
      },
      kSpec);
  const DecompositionResult second = decompose(rebuilt, kSpec, fam);
  REQUIRE(second.profile_count() == first.profile_count());
  for (int p = 0; p < first.profile_count(); ++p)
    CHECK(max_error_vs(second.profiles[static_cast<std::size_t>(p)],
                       first.profiles[static_cast<std::size_t>(p)]) < 1e-6);
}

TEST_CASE("permutation of bump labels permutes profiles only") {
  const auto fam = family();
  // Same two escaping bumps, constructed in either label order.
  auto build = [&](bool swapped) {
    const double a = swapped ? 0.7 : 1.1;
    const double b = swapped ? 1.1 : 0.7;
    return FunctionSequence::from_generator(
        1, 10,
        [&, a, b](int k) {
          GridFunction b1 = gen::tent(1, 1.0, 0, a, 3.0, {0});
          GridFunction b2 = gen::tent(1, 1.0, 0, b, 3.0, {0});
          b1.translate({6 * k});
          b2.translate({-6 * k});
          return b1 + b2;
        },
        kSpec);
  };
  const DecompositionResult r1 = decompose(build(false), kSpec, fam);
  const DecompositionResult r2 = decompose(build(true), kSpec, fam);
  REQUIRE(r1.profile_count() == r2.profile_count());
  std::vector<double> e1 = r1.profile_energies, e2 = r2.profile_energies;
  std::sort(e1.begin(), e1.end());
  std::sort(e2.begin(), e2.end());
  for (std::size_t i = 0; i < e1.size(); ++i)
    CHECK(e1[i] == doctest::Approx(e2[i]).epsilon(1e-9));
}

TEST_CASE("half-space support: profiles return to the half-space after one shift") {
  const auto fam = family();
  // Bumps supported in {x >= 0}, escaping to +infinity.
  const FunctionSequence seq = FunctionSequence::from_generator(
      1, 10,
      [&](int k) {
        GridFunction w = gen::tent(1, 1.0, 0, 1.0, 3.0, {3});
        w.translate({5 * k});
        return w;
      },
      kSpec);
  const DecompositionResult res = decompose(seq, kSpec, fam);
  REQUIRE(res.profile_count() >= 1);
  for (const auto& w : res.profiles) {
    if (w.is_zero()) continue;
    // One group element moves the profile back into the half-space.
    bool found = false;
    for (Index z = -8; z <= 8 && !found; ++z) {
      const GridFunction moved =
          apply(Dislocation::lattice_shift({z}), w, kSpec).trimmed();
      if (moved.offset()[0] >= 0) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("decompose rejects short sequences") {
  const auto fam = family();
  const FunctionSequence seq =
      gen::constant(kSpec, gen::tent(1, 1.0, 0, 1.0, 2.0, {0}), 3);
  CHECK_THROWS_AS(decompose(seq, kSpec, fam), std::invalid_argument);
}

TEST_CASE("dilation pair: two profiles at the correct levels") {
  const EnergySpec homog = EnergySpec::homogeneous(2, 1.5);
  const MassSpec critical = MassSpec::make(homog.critical_exponent());
  FamilyOptions fo;
  fo.shift_radius = 16;
  fo.dilation_range = 5;
  const auto fam = TestFunctionalFamily::make(homog, critical, 1.0, fo);
  const FunctionSequence seq =
      gen::dilating_pair(homog, 1.0, 1.2, 0.9, 3.0, 5, 12);
  DecomposeOptions opts;
  opts.weak_limit.tol = 0.1; // dilating part drains slowly out of the probes
  const DecompositionResult res = decompose(seq, homog, fam, opts);
  REQUIRE(res.profile_count() == 2);
  // One profile recentered by the identity, one by per-member dilations.
  for (int k = 1; k <= 5; ++k) CHECK(res.dislocations[0].at(k).dilation == 0);
  for (int k = 2; k <= 5; ++k) CHECK(res.dislocations[1].at(k).dilation == k);
  // The dilation action itself preserves F to near machine accuracy.
  const GridFunction& w = res.profiles[1];
  const double f0 = eval_F(w, homog);
  const double f1 = eval_F(apply(Dislocation::dilation_by(3, 2), w, homog), homog);
  CHECK(std::abs(f1 - f0) <= 1e-12 * f0);
}
