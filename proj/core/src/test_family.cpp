#include "disloc/test_family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "disloc/parallel.hpp"

namespace disloc {

int default_workers() {
  if (const char* env = std::getenv("DISLOC_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

double TestFunctional::operator()(const std::vector<double>& x) const {
  double v = height;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double t = 1.0 - std::abs(x[d] - center[d]) / half_width;
    if (t <= 0.0) return 0.0;
    v *= t;
  }
  return v;
}

GridFunction TestFunctional::materialize(int level, double h0) const {
  const int dim = static_cast<int>(center.size());
  const double h = std::ldexp(h0, -level);
  IndexVec lo(dim), shape(dim);
  for (int d = 0; d < dim; ++d) {
    lo[d] = static_cast<Index>(std::ceil((center[d] - half_width) / h - 1e-9));
    const Index hi =
        static_cast<Index>(std::floor((center[d] + half_width) / h + 1e-9));
    shape[d] = hi - lo[d] + 1;
  }
  GridFunction u = GridFunction::zeros(dim, lo, shape, level, h0);
  std::vector<double> x(dim);
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    IndexVec g = u.node_index(flat);
    for (int d = 0; d < dim; ++d) x[d] = static_cast<double>(g[d]) * h;
    u.local(flat) = (*this)(x);
  }
  return u;
}

TestFunctionalFamily TestFunctionalFamily::make(const EnergySpec& energy,
                                                const MassSpec& mass, double h0,
                                                FamilyOptions opts) {
  if (opts.scales < 1)
    throw std::invalid_argument("TestFunctionalFamily: need at least one scale");
  if (!(opts.radius > 0.0))
    throw std::invalid_argument("TestFunctionalFamily: radius must be positive");
  if (opts.shift_radius < 0 || opts.dilation_range < 0)
    throw std::invalid_argument("TestFunctionalFamily: empty search range");
  if (energy.mode == EnergyMode::Inhomogeneous) opts.dilation_range = 0;

  TestFunctionalFamily fam;
  fam.energy_ = energy;
  fam.mass_ = mass;
  fam.h0_ = h0;
  fam.opts_ = opts;
  const int dim = energy.dim;
  for (int s = 0; s < opts.scales; ++s) {
    TestFunctional phi;
    phi.center.assign(static_cast<std::size_t>(dim), 0.0);
    phi.half_width = std::ldexp(opts.radius, -s);
    phi.scale_index = s;
    // Unit target norm: int |A tent|^q = A^q (2r/(q+1))^N per tensor axis.
    const double axis = 2.0 * phi.half_width / (mass.q + 1.0);
    phi.height = std::pow(axis, -static_cast<double>(dim) / mass.q);
    fam.members_.push_back(std::move(phi));
  }
  return fam;
}

double pairing(const GridFunction& u, const TestFunctional& phi) {
  const int dim = u.dim();
  if (static_cast<int>(phi.center.size()) != dim)
    throw std::invalid_argument("pairing: dimension mismatch");
  const double h = u.spacing();
  double hN = 1.0;
  for (int d = 0; d < dim; ++d) hN *= h;
  IndexVec lo(dim), hi(dim);
  for (int d = 0; d < dim; ++d) {
    const Index a =
        static_cast<Index>(std::ceil((phi.center[d] - phi.half_width) / h));
    const Index b =
        static_cast<Index>(std::floor((phi.center[d] + phi.half_width) / h));
    lo[d] = std::max(a, u.offset()[d]);
    hi[d] = std::min(b, u.offset()[d] + u.shape()[d] - 1);
    if (hi[d] < lo[d]) return 0.0;
  }
  double acc = 0.0;
  IndexVec idx = lo;
  std::vector<double> x(dim);
  while (true) {
    for (int d = 0; d < dim; ++d) x[d] = static_cast<double>(idx[d]) * h;
    acc += u.value_at(idx) * phi(x);
    int d = dim - 1;
    while (d >= 0) {
      if (++idx[d] <= hi[d]) break;
      idx[d] = lo[d];
      --d;
    }
    if (d < 0) break;
  }
  return acc * hN;
}

double pairing(const GridFunction& u, const GridFunction& v) {
  require_compatible(u, v);
  const int lvl = std::max(u.level(), v.level());
  const GridFunction a = (u.level() == lvl) ? u : u.refined_to(lvl);
  const GridFunction b = (v.level() == lvl) ? v : v.refined_to(lvl);
  const int dim = a.dim();
  const double h = a.spacing();
  double hN = 1.0;
  for (int d = 0; d < dim; ++d) hN *= h;
  IndexVec lo(dim), hi(dim);
  for (int d = 0; d < dim; ++d) {
    lo[d] = std::max(a.offset()[d], b.offset()[d]);
    hi[d] = std::min(a.offset()[d] + a.shape()[d], b.offset()[d] + b.shape()[d]) - 1;
    if (hi[d] < lo[d]) return 0.0;
  }
  double acc = 0.0;
  IndexVec idx = lo;
  while (true) {
    acc += a.value_at(idx) * b.value_at(idx);
    int d = dim - 1;
    while (d >= 0) {
      if (++idx[d] <= hi[d]) break;
      idx[d] = lo[d];
      --d;
    }
    if (d < 0) break;
  }
  return acc * hN;
}

double pairing_defect(const GridFunction& u, const TestFunctionalFamily& fam) {
  double m = 0.0;
  for (const auto& phi : fam.members())
    m = std::max(m, std::abs(pairing(u, phi)));
  return m;
}

namespace {

struct Candidate {
  int j;
  IndexVec y; // shift in u-lattice units
  std::uint64_t key;
};

// Pairing of the recentered function g^-1 u against phi, where
// g = (dilation j, shift y at u's level):  g^-1 u lives at level L - j with
// samples scaled by 2^(-j(N-p)/p) and node positions (i - y) * h', h' = h * 2^j.
double recentered_pairing(const GridFunction& u, const EnergySpec& energy,
                          int j, const IndexVec& y, const TestFunctional& phi) {
  const int dim = u.dim();
  const double hp = std::ldexp(u.spacing(), j);
  double hpN = 1.0;
  for (int d = 0; d < dim; ++d) hpN *= hp;
  const double w =
      (j == 0) ? 1.0
               : std::pow(2.0, -static_cast<double>(j) *
                                   (static_cast<double>(dim) - energy.p) /
                                   energy.p);
  IndexVec lo(dim), hi(dim);
  for (int d = 0; d < dim; ++d) {
    const double clo = (phi.center[d] - phi.half_width) / hp;
    const double chi = (phi.center[d] + phi.half_width) / hp;
    lo[d] = std::max(static_cast<Index>(std::ceil(clo)) + y[d], u.offset()[d]);
    hi[d] = std::min(static_cast<Index>(std::floor(chi)) + y[d],
                     u.offset()[d] + u.shape()[d] - 1);
    if (hi[d] < lo[d]) return 0.0;
  }
  double acc = 0.0;
  IndexVec idx = lo;
  std::vector<double> x(dim);
  while (true) {
    for (int d = 0; d < dim; ++d)
      x[d] = static_cast<double>(idx[d] - y[d]) * hp;
    acc += u.value_at(idx) * phi(x);
    int d = dim - 1;
    while (d >= 0) {
      if (++idx[d] <= hi[d]) break;
      idx[d] = lo[d];
      --d;
    }
    if (d < 0) break;
  }
  return w * hpN * acc;
}

struct LocalBest {
  double magnitude = -1.0;
  double value = 0.0;
  std::uint64_t key = 0;
  int j = 0;
  IndexVec y;
  int member = -1;
};

void consider(LocalBest& best, double value, std::uint64_t key, int j,
              const IndexVec& y, int member) {
  const double mag = std::abs(value);
  if (mag > best.magnitude ||
      (mag == best.magnitude && key < best.key)) {
    best.magnitude = mag;
    best.value = value;
    best.key = key;
    best.j = j;
    best.y = y;
    best.member = member;
  }
}

IndexVec unflatten_shift(std::size_t flat, int dim, Index side, Index radius) {
  IndexVec y(static_cast<std::size_t>(dim));
  for (int d = dim - 1; d >= 0; --d) {
    y[static_cast<std::size_t>(d)] =
        static_cast<Index>(flat % static_cast<std::size_t>(side)) - radius;
    flat /= static_cast<std::size_t>(side);
  }
  return y;
}

} // namespace

ScanHit best_recentering(const GridFunction& u, const TestFunctionalFamily& fam,
                         int workers) {
  if (u.dim() != fam.dim())
    throw std::invalid_argument("best_recentering: dimension mismatch");
  const ScanHit nothing{Dislocation::identity(u.dim()), -1, 0.0, 0.0};
  if (u.is_zero()) return nothing;

  const int dim = u.dim();
  const Index radius = fam.shift_radius();
  const Index side = 2 * radius + 1;
  std::size_t ybox = 1;
  for (int d = 0; d < dim; ++d) ybox *= static_cast<std::size_t>(side);
  const int jlo = -fam.dilation_range();
  const int jhi = fam.dilation_range();
  const std::size_t nmembers = fam.members().size();

  LocalBest best;
  for (int j = jlo; j <= jhi; ++j) {
    auto chunk_results = run_chunked<LocalBest>(
        ybox, workers, [&](std::size_t begin, std::size_t end) {
          LocalBest local;
          for (std::size_t yf = begin; yf < end; ++yf) {
            const IndexVec y = unflatten_shift(yf, dim, side, radius);
            for (std::size_t m = 0; m < nmembers; ++m) {
              const double val = recentered_pairing(
                  u, fam.energy(), j, y, fam.members()[m]);
              if (val == 0.0) continue;
              const std::uint64_t key =
                  (static_cast<std::uint64_t>(j - jlo) * ybox + yf) * nmembers + m;
              consider(local, val, key, j, y, static_cast<int>(m));
            }
          }
          return local;
        });
    for (const auto& local : chunk_results)
      if (local.member >= 0)
        consider(best, local.value, local.key, local.j, local.y, local.member);
  }
  if (best.member < 0) return nothing;
  ScanHit hit;
  hit.g = Dislocation::make(best.j, best.y, u.level());
  hit.member = best.member;
  hit.value = best.value;
  hit.magnitude = best.magnitude;
  return hit;
}

double d_weak_defect(const GridFunction& u, const TestFunctionalFamily& fam,
                     int workers) {
  return best_recentering(u, fam, workers).magnitude;
}

double d_weak_defect_far(const GridFunction& u, const TestFunctionalFamily& fam,
                         double min_radius, int workers) {
  if (u.is_zero()) return 0.0;
  const int dim = u.dim();
  const Index radius = fam.shift_radius();
  const Index side = 2 * radius + 1;
  std::size_t ybox = 1;
  for (int d = 0; d < dim; ++d) ybox *= static_cast<std::size_t>(side);
  const double h = u.spacing();

  auto chunk_results = run_chunked<double>(
      ybox, workers, [&](std::size_t begin, std::size_t end) {
        double local = 0.0;
        for (std::size_t yf = begin; yf < end; ++yf) {
          const IndexVec y = unflatten_shift(yf, dim, side, radius);
          double norm2 = 0.0;
          for (Index c : y) {
            const double phys = static_cast<double>(c) * h;
            norm2 += phys * phys;
          }
          if (std::sqrt(norm2) <= min_radius) continue;
          for (const auto& phi : fam.members())
            local = std::max(local,
                             std::abs(recentered_pairing(u, fam.energy(), 0, y, phi)));
        }
        return local;
      });
  double best = 0.0;
  for (double v : chunk_results) best = std::max(best, v);
  return best;
}

std::vector<ScanHit> scan_peaks(const GridFunction& u,
                                const TestFunctionalFamily& fam, int count,
                                double min_separation, int workers) {
  std::vector<ScanHit> peaks;
  if (count < 1 || u.is_zero()) return peaks;

  const int dim = u.dim();
  const Index radius = fam.shift_radius();
  const Index side = 2 * radius + 1;
  std::size_t ybox = 1;
  for (int d = 0; d < dim; ++d) ybox *= static_cast<std::size_t>(side);
  const int jlo = -fam.dilation_range();
  const int jhi = fam.dilation_range();

  auto add_peak = [&](std::vector<ScanHit>& list, const ScanHit& hit) {
    for (auto& existing : list) {
      if (group_distance(existing.g, hit.g, fam.h0()) < min_separation) {
        if (hit.magnitude > existing.magnitude) existing = hit;
        return;
      }
    }
    list.push_back(hit);
    std::sort(list.begin(), list.end(), [](const ScanHit& a, const ScanHit& b) {
      return a.magnitude > b.magnitude;
    });
    if (static_cast<int>(list.size()) > count) list.pop_back();
  };

  for (int j = jlo; j <= jhi; ++j) {
    auto chunk_results = run_chunked<std::vector<ScanHit>>(
        ybox, workers, [&](std::size_t begin, std::size_t end) {
          std::vector<ScanHit> local;
          for (std::size_t yf = begin; yf < end; ++yf) {
            const IndexVec y = unflatten_shift(yf, dim, side, radius);
            for (std::size_t m = 0; m < fam.members().size(); ++m) {
              const double val = recentered_pairing(
                  u, fam.energy(), j, y, fam.members()[m]);
              if (val == 0.0) continue;
              ScanHit hit;
              hit.g = Dislocation::make(j, y, u.level());
              hit.member = static_cast<int>(m);
              hit.value = val;
              hit.magnitude = std::abs(val);
              add_peak(local, hit);
            }
          }
          return local;
        });
    for (const auto& local : chunk_results)
      for (const auto& hit : local) add_peak(peaks, hit);
  }
  return peaks;
}

} // namespace disloc
