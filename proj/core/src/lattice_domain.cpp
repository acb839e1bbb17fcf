#include "disloc/lattice_domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace disloc {

namespace {

template <class Fn>
void for_each_box(const IndexVec& lo, const IndexVec& hi, Fn&& fn) {
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

LatticeDomain LatticeDomain::from_predicate(int dim, Predicate pred,
                                            std::string description) {
  LatticeDomain d;
  d.dim_ = dim;
  d.pred_ = std::move(pred);
  d.description_ = std::move(description);
  return d;
}

LatticeDomain LatticeDomain::half_space(IndexVec normal, Index offset) {
  const int dim = static_cast<int>(normal.size());
  std::ostringstream os;
  os << "half-space x.n >= " << offset;
  return from_predicate(
      dim,
      [normal, offset](const IndexVec& x) {
        Index dot = 0;
        for (std::size_t d = 0; d < normal.size(); ++d) dot += normal[d] * x[d];
        return dot >= offset;
      },
      os.str());
}

LatticeDomain LatticeDomain::ball(IndexVec center, double radius) {
  return ball_union({{std::move(center), radius}});
}

LatticeDomain LatticeDomain::ball_union(
    std::vector<std::pair<IndexVec, double>> balls) {
  if (balls.empty())
    throw std::invalid_argument("ball_union: need at least one ball");
  const int dim = static_cast<int>(balls.front().first.size());
  std::ostringstream os;
  os << "union of " << balls.size() << " ball(s)";
  return from_predicate(
      dim,
      [balls](const IndexVec& x) {
        for (const auto& [c, r] : balls) {
          double s = 0.0;
          for (std::size_t d = 0; d < c.size(); ++d) {
            const double diff = static_cast<double>(x[d] - c[d]);
            s += diff * diff;
          }
          if (s <= r * r) return true;
        }
        return false;
      },
      os.str());
}

LatticeDomain LatticeDomain::expanding_balls(int dim, int axis, int count) {
  if (axis < 0 || axis >= dim)
    throw std::invalid_argument("expanding_balls: axis out of range");
  std::ostringstream os;
  os << "union of B(k^2 e" << axis + 1 << ", k), k = 1.." << count;
  return from_predicate(
      dim,
      [dim, axis, count](const IndexVec& x) {
        for (Index k = 1; k <= count; ++k) {
          double s = 0.0;
          for (int d = 0; d < dim; ++d) {
            const double diff =
                static_cast<double>(x[static_cast<std::size_t>(d)]) -
                (d == axis ? static_cast<double>(k * k) : 0.0);
            s += diff * diff;
          }
          if (s <= static_cast<double>(k * k)) return true;
        }
        return false;
      },
      os.str());
}

LatticeDomain LatticeDomain::finite_set(int dim, std::vector<IndexVec> points) {
  std::ostringstream os;
  os << "finite set of " << points.size() << " point(s)";
  return from_predicate(
      dim,
      [points](const IndexVec& x) {
        return std::find(points.begin(), points.end(), x) != points.end();
      },
      os.str());
}

LatticeDomain LatticeDomain::box(IndexVec lo, IndexVec hi) {
  const int dim = static_cast<int>(lo.size());
  return from_predicate(
      dim,
      [lo, hi](const IndexVec& x) {
        for (std::size_t d = 0; d < lo.size(); ++d)
          if (x[d] < lo[d] || x[d] > hi[d]) return false;
        return true;
      },
      "box");
}

LatticeDomain LatticeDomain::periodic(int dim, IndexVec periods,
                                      std::vector<IndexVec> motif) {
  for (Index p : periods)
    if (p < 1) throw std::invalid_argument("periodic: periods must be >= 1");
  return from_predicate(
      dim,
      [periods, motif](const IndexVec& x) {
        IndexVec r(x.size());
        for (std::size_t d = 0; d < x.size(); ++d) {
          r[d] = x[d] % periods[d];
          if (r[d] < 0) r[d] += periods[d];
        }
        return std::find(motif.begin(), motif.end(), r) != motif.end();
      },
      "periodic motif");
}

FlaskReport flask_check(const LatticeDomain& dom,
                        const std::vector<DislocationSequence>& shift_families,
                        const FlaskOptions& opts) {
  FlaskReport report;
  report.verdict = FlaskVerdict::Pass;
  const int dim = dom.dim();

  for (const auto& family : shift_families) {
    FlaskFamilyResult fr;
    if (family.elems.empty())
      throw std::invalid_argument("flask_check: empty shift family");
    for (const auto& g : family.elems)
      if (g.dilation != 0)
        throw std::invalid_argument("flask_check: families must be pure shifts");

    const bool constant =
        std::all_of(family.elems.begin(), family.elems.end(),
                    [&](const Dislocation& g) { return g == family.elems.front(); });
    if (!constant) {
      DivergenceOptions dv = opts.divergence;
      dv.h0 = opts.h0;
      const DivergenceReport div = diverges(family, dv);
      if (!div.diverges)
        throw std::invalid_argument(
            "flask_check: shift family neither constant nor divergent (" +
            div.note + ")");
    }

    std::vector<IndexVec> shifts;
    for (const auto& g : family.elems) shifts.push_back(g.shift_at_level(0));
    const std::size_t n = shifts.size();
    const std::size_t tail_from = n - (n + 1) / 2;

    // liminf over the scan window: eventually in every shifted copy.
    std::vector<IndexVec> liminf;
    const IndexVec wlo(static_cast<std::size_t>(dim), -opts.window_radius);
    const IndexVec whi(static_cast<std::size_t>(dim), opts.window_radius);
    for_each_box(wlo, whi, [&](const IndexVec& x) {
      IndexVec probe(static_cast<std::size_t>(dim));
      for (std::size_t k = tail_from; k < n; ++k) {
        for (int d = 0; d < dim; ++d)
          probe[static_cast<std::size_t>(d)] =
              x[static_cast<std::size_t>(d)] - shifts[k][static_cast<std::size_t>(d)];
        if (!dom.contains(probe)) return;
      }
      liminf.push_back(x);
    });
    fr.liminf_size = liminf.size();

    if (liminf.empty()) {
      fr.verdict = FlaskVerdict::Pass;
      fr.witness = Dislocation::identity(dim);
      fr.note = "liminf empty over the scan window";
      report.families.push_back(std::move(fr));
      continue;
    }

    // Witness search over shells of increasing sup-norm.
    bool found = false;
    IndexVec best_candidate;
    std::size_t best_covered = 0;
    IndexVec best_uncovered;
    const IndexVec zlo(static_cast<std::size_t>(dim), -opts.witness_radius);
    const IndexVec zhi(static_cast<std::size_t>(dim), opts.witness_radius);
    for (Index shell = 0; shell <= opts.witness_radius && !found; ++shell) {
      for_each_box(zlo, zhi, [&](const IndexVec& z) {
        if (found) return;
        Index linf = 0;
        for (Index c : z) linf = std::max(linf, std::abs(c));
        if (linf != shell) return;
        std::size_t covered = 0;
        IndexVec first_uncovered;
        IndexVec probe(static_cast<std::size_t>(dim));
        for (const auto& x : liminf) {
          for (int d = 0; d < dim; ++d)
            probe[static_cast<std::size_t>(d)] =
                x[static_cast<std::size_t>(d)] - z[static_cast<std::size_t>(d)];
          if (dom.contains(probe)) {
            ++covered;
          } else if (first_uncovered.empty()) {
            first_uncovered = x;
          }
        }
        if (covered == liminf.size()) {
          found = true;
          fr.witness = Dislocation::lattice_shift(z);
          return;
        }
        if (covered > best_covered || best_candidate.empty()) {
          best_covered = covered;
          best_candidate = z;
          best_uncovered = first_uncovered;
        }
      });
    }

    if (found) {
      fr.verdict = FlaskVerdict::Pass;
      fr.note = "witness covers the liminf (" + std::to_string(liminf.size()) +
                " point(s)): " + fr.witness.to_string();
      report.families.push_back(std::move(fr));
      continue;
    }

    // No witness: FAIL only when every candidate leaves an interior point
    // uncovered; boundary-only misses are window artifacts.
    bool interior_everywhere = true;
    IndexVec interior_evidence;
    IndexVec probe(static_cast<std::size_t>(dim));
    for_each_box(zlo, zhi, [&](const IndexVec& z) {
      if (!interior_everywhere) return;
      bool has_interior_uncovered = false;
      for (const auto& x : liminf) {
        Index linf = 0;
        for (Index c : x) linf = std::max(linf, std::abs(c));
        if (linf > opts.window_radius - opts.interior_margin) continue;
        for (int d = 0; d < dim; ++d)
          probe[static_cast<std::size_t>(d)] =
              x[static_cast<std::size_t>(d)] - z[static_cast<std::size_t>(d)];
        if (!dom.contains(probe)) {
          has_interior_uncovered = true;
          interior_evidence = x;
          break;
        }
      }
      if (!has_interior_uncovered) interior_everywhere = false;
    });

    if (interior_everywhere) {
      fr.verdict = FlaskVerdict::Fail;
      fr.uncovered_point = interior_evidence;
      fr.note = "every candidate within the witness radius leaves interior "
                "liminf points uncovered";
    } else {
      fr.verdict = FlaskVerdict::Inconclusive;
      fr.uncovered_point = best_uncovered;
      fr.note = "only boundary-adjacent liminf points stay uncovered; the "
                "scan radius is too small to certify";
    }
    report.families.push_back(std::move(fr));
  }

  for (const auto& fr : report.families) {
    if (fr.verdict == FlaskVerdict::Fail) {
      report.verdict = FlaskVerdict::Fail;
      break;
    }
    if (fr.verdict == FlaskVerdict::Inconclusive)
      report.verdict = FlaskVerdict::Inconclusive;
  }
  report.note = "checked " + std::to_string(report.families.size()) +
                " shift family(ies) against " + dom.description();
  return report;
}

} // namespace disloc
