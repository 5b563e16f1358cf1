#pragma once

#include <utility>

#include "glwire/grid.hpp"
#include "glwire/types.hpp"

namespace glwire {

/// Perturbation data at an eigenvalue collision: the coalesced eigenvalue
/// lambda0 and Jordan mode u0, the canonical functions K, zeta, w, and the
/// scalar functionals entering the eigenvalue splitting
///   lambda ~ lambda0 + sqrt(eps) lambda1 + eps lambda2.
struct CollisionExpansion {
  double I_c = 0.0;
  Complex lambda0;
  Vec u0;
  Vec K;
  Vec zeta;
  Vec w;
  Complex a1, b, theta1, theta2, d1, d2, d3;
};

/// Coalesced eigenvalue and Jordan mode at a collision current. The input
/// must lie within find_collision's tolerance of a true collision; the pair
/// gap is re-refined internally and checked against 1e-3. The mode is phase
/// rotated so Re u0 is even and Im u0 odd, and scaled so u0(0) = 1.
std::pair<Complex, Vec> jordan_mode(const Grid& grid, double I_c, int ell = 1);

/// Minimum-norm solution of L y = rhs with the grid's boundary conditions,
/// where L = M + lambda0 is singular with kernel span{u0}. Solvability
/// (PT-orthogonality of rhs to u0) is required; the kernel component is fixed
/// by <y, u0> = 0 through a bordered augmented solve.
Vec solve_constrained(const Grid& grid, const Mat& L, const Vec& rhs,
                      const Vec& u0);

/// Full expansion at the collision: canonical functions and the functionals
/// a1 (s23-type), b, theta1, theta2, d1..d3.
CollisionExpansion expansion_coefficients(const Grid& grid, double I_c,
                                          int ell = 1);

/// Predicted eigenvalue pair at I = I_c + eps*a:
///   lambda1 = +-sqrt(-a a1 / b),
///   lambda2 = ((lambda1)^2 d1 + a (d2 - d3)) / (2 b),
/// identical and real for both branches. Requires |eps*a| <= 0.5.
std::pair<Complex, Complex> lambda_split(const CollisionExpansion& exp,
                                         double a, double eps);

}  // namespace glwire
