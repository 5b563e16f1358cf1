#pragma once

#include "glwire/grid.hpp"
#include "glwire/spectral.hpp"
#include "glwire/types.hpp"

namespace glwire {

/// Cubic interaction coefficients of the reduced dynamics at a given current.
///
/// On the stationary side (real lambda_1) only chi11 is meaningful and the
/// u2-dependent fields are computed with u2 = u1 (making chi12 = 2 chi11).
/// On the periodic side lambda1 is the Im > 0 member of the leading pair and
/// u2 = u1*(-x), the exact PT partner.
struct BifCoeffs {
  double I = 0.0;
  Complex lambda1;
  Complex beta;                    // int u1^2
  Complex gamma11, gamma21;        // int |u_i|^2 u1^2
  Complex c1111, c1122, c1212;     // int u_i u_j theta_kl
  Complex chi11, chi12;
  Complex chi_hat;                 // chi12 - chi11
  Complex chi_tilde;               // -(chi11 + chi12)
  double omega = 0.0;              // -Im chi_tilde / Re chi_tilde
};

/// Assembles all coefficients from the leading eigenfunctions at current I.
/// I must be away from a collision; |beta| < 1e-8 is rejected because the
/// normalization degenerates there.
BifCoeffs chi_coefficients(const Grid& grid, double current);

/// Same integrals for caller-provided modes; used by normalization tests.
BifCoeffs chi_from_modes(const Grid& grid, double current, Complex lambda1,
                         const Vec& u1, const Vec& u2);

/// Current at which Re chi11 changes sign (the stationary branch switches
/// between super- and subcritical); bisection to width 1e-3.
double find_Ik(const Grid& grid, double lo, double hi);

enum class Regime { NtoS_stable, NtoS_unstable, NtoP_stable };

struct BranchPrediction {
  Regime regime;
  double eps = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;  // 0 for stationary branches
  double period = 0.0;     // +inf for stationary branches
  bool stable = false;
};

/// Leading-order bifurcating branch at distance eps past the transition
/// curve. Stationary side: amplitude sqrt(eps / -Re chi11) (stable, eps > 0)
/// or sqrt(|eps| / Re chi11) (unstable, eps < 0). Periodic side: amplitude
/// sqrt(eps / Re chi_tilde), frequency Im lambda1 + omega eps.
BranchPrediction predict_branch(const BifCoeffs& coeffs, double eps);

/// The pair of unstable periodic branches above the collision:
/// |beta_1| = sqrt(eps) / (2 sqrt(-Re chi11)), beta_2 = +-i beta_1,
/// frequency Im lambda1 + eps Im chi11 / Re chi11.
BranchPrediction unstable_periodic_prediction(const BifCoeffs& coeffs,
                                              double eps);

}  // namespace glwire
