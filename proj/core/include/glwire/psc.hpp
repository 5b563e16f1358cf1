#pragma once

#include <vector>

#include "glwire/tdgl.hpp"
#include "glwire/types.hpp"

namespace glwire {

/// One phase-slip center: an isolated space-time zero of the order parameter
/// with its Brouwer degree from the phase circulation around it.
struct PSCEvent {
  double x = 0.0;
  double t = 0.0;
  int winding = 0;
  double min_abs_psi = 0.0;
};

/// Finds the zeros of psi(x, t) in a trajectory. Candidate cells where |psi|
/// drops below the threshold are polished by a 2D Newton iteration on
/// (Re psi, Im psi), using barycentric interpolation in x and linear
/// interpolation between snapshots in t; each confirmed zero receives a
/// winding number from the phase circulation around a small rectangle.
/// threshold <= 0 selects 0.25 x the running median of max_x |psi|.
std::vector<PSCEvent> detect_pscs(const Trajectory& traj,
                                  double threshold = 0.0);

/// Re u1'(0) for the leading mode, u1(0) = 1, on the Im lambda1 > 0 branch.
double leading_mode_slope_at_zero(const Grid& grid, double current);

}  // namespace glwire
