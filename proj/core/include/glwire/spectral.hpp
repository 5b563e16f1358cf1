#pragma once

#include <utility>
#include <vector>

#include "glwire/grid.hpp"
#include "glwire/types.hpp"

namespace glwire {

/// Eigenpair of M u := u_xx + i x I u with the sign convention M u = -lambda u,
/// so lambda = -(matrix eigenvalue). Ordered by ascending Re lambda; within a
/// conjugate pair the member with Im lambda < 0 comes first. The eigenfunction
/// is scaled to u(0) = 1 whenever the mode does not vanish at x = 0 (at I = 0
/// the even-index modes do; those fall back to max-abs scaling).
struct EigenPair {
  Complex lambda;
  Vec u;
  double residual = 0.0;
};

/// Dense n x n matrix of u -> u_xx + i x I u + shift u with the grid's
/// boundary condition written into the first and last rows.
Mat assemble_operator(const Grid& grid, double current, double shift);

/// Interior operator with boundary unknowns eliminated, plus the 2 x (n-2)
/// map reconstructing [u(1); u(-1)] from interior values (zero for Dirichlet).
struct ReducedOperator {
  Mat interior;
  Mat boundary;
};
ReducedOperator reduce_operator(const Grid& grid, double current, double shift);

/// The k eigenpairs of smallest Re lambda; k <= n-2.
std::vector<EigenPair> eigenpairs(const Grid& grid, double current, int k);

/// Gamma_1(I) = Re lambda_1(I): the normal state loses stability when the
/// control parameter crosses this curve.
double transition_curve(const Grid& grid, double current);

/// Current at which the pair (lambda_{2l-1}, lambda_{2l}) collides and turns
/// complex, located by bisection on the sign of Im lambda_{2l-1}. The bracket
/// must be real on the left and complex on the right.
double find_collision(const Grid& grid, int ell, double lo, double hi,
                      double tol = 1e-4);

/// Currents below which the whole spectrum is provably real:
/// pi^2/8 (Neumann), 3 pi^2/8 (Dirichlet).
double reality_bound(Bc bc);

/// Large-current expansion of the leading eigenvalue:
/// 1.17 I^(2/3) + i (I - 2.02 I^(2/3)).
Complex large_I_asymptotic(double current);

/// Leading eigenvalue of u_yy + i s y u + lambda u = 0 on [0, Y] with
/// Dirichlet ends (s = potential_sign), converged in the truncation Y:
/// doubling Y must move the result by less than 1e-4.
Complex airy_halfline_leading(double truncation = 20.0, int n = 128,
                              double potential_sign = 1.0);

/// High-frequency quantization of the real branch: for each integer m in
/// [m_lo, m_hi] with eps*m*pi > 2 sqrt(2)/3 (eps = I^(-1/2)), solves
///   (2 sqrt(2)/3) (1+a^2)^(3/4) (cos g + sin g) = eps m pi,
/// g = (3/2) atan(a), and returns the eigenvalue estimates I*a_m.
/// Indices without a root are skipped.
std::vector<double> jbkw_real_branch(double current, int m_lo, int m_hi);

/// Eigenvalue tracks over a range of currents, matched by continuity, with
/// the detected collision currents (ell, I_ell).
struct SpectrumScan {
  std::vector<double> currents;
  std::vector<std::vector<Complex>> tracks;     // tracks[j][i]
  std::vector<std::vector<double>> residuals;   // residuals[j][i]
  std::vector<std::pair<int, double>> collisions;
};
SpectrumScan scan_spectrum(const Grid& grid, double lo, double hi, int samples,
                           int k, int workers = 1);

}  // namespace glwire
