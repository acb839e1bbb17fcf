#pragma once

#include <cstdint>

#include "disloc/dislocation.hpp"
#include "disloc/rng.hpp"
#include "disloc/sequence.hpp"

namespace disloc {
namespace gen {

/// Tensor tent of the given physical half-width and height, centered at a
/// lattice node.
GridFunction tent(int dim, double h0, int level, double height,
                  double half_width, const IndexVec& center);

/// Gaussians and similar closed forms sampled over [-extent, extent]^N.
GridFunction sample_box(int dim, double h0, int level, double extent,
                        const std::function<double(const std::vector<double>&)>& f);

/// Random sum of 1..max_bumps positive Gaussians over [-extent, extent]^N.
GridFunction random_smooth(Rng& rng, int dim, double h0, double extent,
                           int max_bumps = 3);

/// u_k = a phi + b phi(. - sep k), phi a tent of half-width hw.
FunctionSequence two_bump(const EnergySpec& spec, double h0, double a, double b,
                          double hw, Index sep, int count);

/// u_k = amp k^-1/2 tent(x / k), k = 2^m, m = 0..count-1.
FunctionSequence spreading(const EnergySpec& spec, double h0, double amp,
                           double hw, int count);

/// u_k = B(. - base_offset e1) + (dilation by k) B', homogeneous mode.  The
/// base bump sits away from the origin so that the two components stay
/// support-disjoint at every level.
FunctionSequence dilating_pair(const EnergySpec& spec, double h0, double amp0,
                               double amp1, double hw, int count,
                               Index base_offset = 12);

FunctionSequence constant(const EnergySpec& spec, const GridFunction& w,
                          int count);

/// u_k = w(x - sep k) + w(-x - sep k), an even mirror pair escaping both ways.
FunctionSequence mirror(const EnergySpec& spec, double h0, double height,
                        double hw, Index sep, int count);

/// Radial 2D members w + z / k (strongly convergent, exactly shell-radial).
FunctionSequence radial_2d(const EnergySpec& spec, double h0, int count);

/// v + w(. - sep k) with G(v) = G(w) = t/2: the dichotomy construction.
FunctionSequence half_mass_pair(const EnergySpec& spec, const MassSpec& mass,
                                double h0, double t, double hw, Index sep,
                                int count);

} // namespace gen
} // namespace disloc
