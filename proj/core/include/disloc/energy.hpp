#pragma once

#include <functional>

#include "disloc/grid_function.hpp"

namespace disloc {

enum class EnergyMode { Inhomogeneous, Homogeneous };

/// The norm-defining convex functional F.  Inhomogeneous mode is the p-th
/// power of the full Sobolev norm (gradient + mass), homogeneous mode the
/// gradient part alone, which requires p < N so that the critical dilation
/// weight is defined.
struct EnergySpec {
  double p = 2.0;
  EnergyMode mode = EnergyMode::Inhomogeneous;
  int dim = 1;

  static EnergySpec inhomogeneous(int dim, double p);
  static EnergySpec homogeneous(int dim, double p);
  /// Sample-scaling exponent weight for one dilation level: 2^((N-p)/p).
  double dilation_weight_base() const;
  double critical_exponent() const; // p* = N p / (N - p), requires p < N
};

/// The target-space functional G(u) = sum |u|^q h^N.
struct MassSpec {
  double q = 4.0;
  static MassSpec make(double q);
};

/// F(u) = sum_i (|grad_h u(i)|^p [+ |u(i)|^p]) h^N with forward differences.
double eval_F(const GridFunction& u, const EnergySpec& spec);

/// G(u) = sum_i |u(i)|^q h^N.
double eval_G(const GridFunction& u, const MassSpec& spec);

/// Target-space norm G(u)^(1/q).
double target_norm(const GridFunction& u, const MassSpec& spec);

/// Luxembourg gauge of a general convex functional: the unique lambda > 0
/// with F(u/lambda) = 1 (0 for u == 0).  Bracketing by doubling/halving an
/// initial guess, then bisection to the given relative tolerance, then one
/// secant polish inside the final bracket.
double gauge_norm(const GridFunction& u,
                  const std::function<double(const GridFunction&)>& functional,
                  double rel_tol = 1e-12);

/// Gauge of eval_F; uses an allocation-free scaled evaluation path.
double gauge_norm(const GridFunction& u, const EnergySpec& spec,
                  double rel_tol = 1e-12);

/// Brezis-Lieb defect |G(u+v) - G(u) - G(v)|.
double bl_defect(const GridFunction& u, const GridFunction& v,
                 const MassSpec& spec);

/// Discrete gradient fields d/du_i of F and G (h^N factors included),
/// laid out over u's window.  Used by the variational solvers.
std::vector<double> grad_F(const GridFunction& u, const EnergySpec& spec);
std::vector<double> grad_G(const GridFunction& u, const MassSpec& spec);

} // namespace disloc
