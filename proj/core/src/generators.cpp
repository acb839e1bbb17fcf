#include "disloc/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace disloc {
namespace gen {

GridFunction tent(int dim, double h0, int level, double height,
                  double half_width, const IndexVec& center) {
  const double h = std::ldexp(h0, -level);
  const Index m = static_cast<Index>(std::floor(half_width / h + 1e-9));
  IndexVec lo(dim), shape(dim);
  for (int d = 0; d < dim; ++d) {
    lo[d] = center[d] - m;
    shape[d] = 2 * m + 1;
  }
  GridFunction u = GridFunction::zeros(dim, lo, shape, level, h0);
  for (std::size_t flat = 0; flat < u.size(); ++flat) {
    const IndexVec g = u.node_index(flat);
    double v = height;
    for (int d = 0; d < dim; ++d) {
      const double x = static_cast<double>(g[d] - center[d]) * h;
      v *= std::max(0.0, 1.0 - std::abs(x) / half_width);
    }
    u.local(flat) = v;
  }
  return u;
}

GridFunction sample_box(int dim, double h0, int level, double extent,
                        const std::function<double(const std::vector<double>&)>& f) {
  return GridFunction::sample(dim, -extent, extent, level, h0, f);
}

GridFunction random_smooth(Rng& rng, int dim, double h0, double extent,
                           int max_bumps) {
  const int nb = static_cast<int>(rng.uniform_int(1, max_bumps));
  std::vector<std::vector<double>> centers;
  std::vector<double> widths, amps;
  for (int b = 0; b < nb; ++b) {
    std::vector<double> c(dim);
    for (int d = 0; d < dim; ++d) c[d] = rng.uniform(-0.5 * extent, 0.5 * extent);
    centers.push_back(c);
    widths.push_back(rng.uniform(0.4, 0.25 * extent));
    amps.push_back(rng.uniform(0.2, 1.0));
  }
  return sample_box(dim, h0, 0, extent, [&](const std::vector<double>& x) {
    double v = 0.0;
    for (int b = 0; b < nb; ++b) {
      double r2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double dx = x[d] - centers[static_cast<std::size_t>(b)][d];
        r2 += dx * dx;
      }
      const double w = widths[static_cast<std::size_t>(b)];
      v += amps[static_cast<std::size_t>(b)] * std::exp(-r2 / (w * w));
    }
    return v;
  });
}

FunctionSequence two_bump(const EnergySpec& spec, double h0, double a, double b,
                          double hw, Index sep, int count) {
  const GridFunction phi = tent(spec.dim, h0, 0, 1.0, hw, IndexVec(spec.dim, 0));
  return FunctionSequence::from_generator(
      1, count,
      [&](int k) {
        GridFunction moved = phi.scaled(b);
        IndexVec delta(static_cast<std::size_t>(spec.dim), 0);
        delta[0] = sep * k;
        moved.translate(delta);
        return phi.scaled(a) + moved;
      },
      spec);
}

FunctionSequence spreading(const EnergySpec& spec, double h0, double amp,
                           double hw, int count) {
  return FunctionSequence::from_generator(
      0, count - 1,
      [&](int m) {
        const double k = std::ldexp(1.0, m); // 1, 2, 4, ...
        const double scale = amp / std::sqrt(k);
        return sample_box(spec.dim, h0, 0, hw * k + 2.0,
                          [&](const std::vector<double>& x) {
                            double v = scale;
                            for (double xd : x)
                              v *= std::max(0.0, 1.0 - std::abs(xd) / (hw * k));
                            return v;
                          });
      },
      spec);
}

FunctionSequence dilating_pair(const EnergySpec& spec, double h0, double amp0,
                               double amp1, double hw, int count,
                               Index base_offset) {
  if (spec.mode != EnergyMode::Homogeneous)
    throw std::invalid_argument("dilating_pair: homogeneous mode only");
  IndexVec center(static_cast<std::size_t>(spec.dim), 0);
  center[0] = base_offset;
  const GridFunction base = tent(spec.dim, h0, 0, amp0, hw, center);
  const GridFunction fine = tent(spec.dim, h0, 0, amp1, hw, IndexVec(spec.dim, 0));
  return FunctionSequence::from_generator(
      1, count,
      [&](int k) {
        return base + apply(Dislocation::dilation_by(k, spec.dim), fine, spec);
      },
      spec);
}

FunctionSequence constant(const EnergySpec& spec, const GridFunction& w,
                          int count) {
  return FunctionSequence::from_generator(1, count,
                                          [&](int) { return w; }, spec);
}

FunctionSequence mirror(const EnergySpec& spec, double h0, double height,
                        double hw, Index sep, int count) {
  const GridFunction w = tent(spec.dim, h0, 0, height, hw, IndexVec(spec.dim, 0));
  return FunctionSequence::from_generator(
      1, count,
      [&](int k) {
        GridFunction right = w;
        GridFunction left = w;
        IndexVec dr(static_cast<std::size_t>(spec.dim), 0), dl = dr;
        dr[0] = sep * k;
        dl[0] = -sep * k;
        right.translate(dr);
        left.translate(dl);
        return left + right;
      },
      spec);
}

FunctionSequence radial_2d(const EnergySpec& spec, double h0, int count) {
  if (spec.dim != 2)
    throw std::invalid_argument("radial_2d: two dimensions expected");
  const GridFunction w =
      sample_box(2, h0, 0, 12.0, [](const std::vector<double>& x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return std::exp(-r2 / 9.0);
      });
  const GridFunction z =
      sample_box(2, h0, 0, 12.0, [](const std::vector<double>& x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return 0.5 * std::exp(-r2 / 4.0);
      });
  return FunctionSequence::from_generator(
      1, count,
      [&](int k) { return w + z.scaled(1.0 / static_cast<double>(k)); }, spec);
}

FunctionSequence half_mass_pair(const EnergySpec& spec, const MassSpec& mass,
                                double h0, double t, double hw, Index sep,
                                int count) {
  GridFunction v = tent(spec.dim, h0, 0, 1.0, hw, IndexVec(spec.dim, 0));
  const double g = eval_G(v, mass);
  v = v.scaled(std::pow(0.5 * t / g, 1.0 / mass.q));
  return FunctionSequence::from_generator(
      1, count,
      [&](int k) {
        GridFunction moved = v;
        IndexVec delta(static_cast<std::size_t>(spec.dim), 0);
        delta[0] = sep * k;
        moved.translate(delta);
        return v + moved;
      },
      spec);
}

} // namespace gen
} // namespace disloc
