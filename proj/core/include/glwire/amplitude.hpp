#pragma once

#include <array>
#include <utility>
#include <vector>

#include "glwire/bifurcation.hpp"
#include "glwire/types.hpp"

namespace glwire {

/// Slow-time envelope pair of the two critical modes.
struct AlphaState {
  Complex a1, a2;
  double tau = 0.0;
};

/// Radius-squared / PT-defect coordinates: A = R^2 = |b1|^2 + |b2|^2 and
/// gamma = i(b1* b2 - b1 b2*). Cauchy-Schwarz forces |gamma| <= A.
struct RGState {
  double A = 0.0;
  double gamma = 0.0;
  double t = 0.0;
};

/// Lab-frame mode coefficients w_j = sqrt(eps) e^{(-1)^j i Im(lambda1) t} a_j;
/// the unambiguous realization of the center-manifold system used by the
/// return map.
struct OmegaState {
  Complex w1, w2;
  double t = 0.0;
};

/// PT-invariant polar coordinates (R, theta) of the real (b1, b2) flow.
struct PolarState {
  double R = 0.0;
  double theta = 0.0;
  double t = 0.0;
};

std::pair<Complex, Complex> alpha_rhs(const AlphaState& s, Complex chi11,
                                      Complex chi12);

/// d r / d tau for the modulus ratio r = |a1|/|a2|:
/// -Re(chi_hat) |a2|^2 r (r^2 - 1).
double riccati_rhs(double r, double a2sq, Complex chi_hat);

/// Truncated (A, gamma) system:
///   A'     = 2 [ (eps - Re chi_tilde A) A - Re chi_hat gamma^2 ]
///   gamma' = 2 [ eps - Re(chi_tilde + chi_hat) A ] gamma.
/// chi11 must satisfy chi11 = -(chi_tilde + chi_hat)/2.
std::pair<double, double> rg_rhs(const RGState& s, double eps,
                                 Complex chi_tilde, Complex chi_hat,
                                 Complex chi11);

std::pair<Complex, Complex> omega_rhs(const OmegaState& s, double eps,
                                      double im_lambda1, Complex chi11,
                                      Complex chi12);

/// Truncated polar reduced system:
///   R'     = eps R - Re chi_tilde R^3
///   theta' = Im lambda1 - Im chi_tilde R^2.
std::pair<double, double> polar_rhs(const PolarState& s, double eps,
                                    double im_lambda1, Complex chi_tilde);

/// Fixed-step classical RK4 trajectory sampled every `stride` steps (the
/// initial and final states are always included). `step_halving_error` is
/// the end-state discrepancy against a dt/2 integration; `blew_up` reports
/// a state norm above 1e6 (the trajectory stops there, which is genuine
/// behaviour in the subcritical regime, not an error).
template <class State>
struct IntegrateResult {
  std::vector<State> samples;
  double step_halving_error = 0.0;
  bool blew_up = false;
};

IntegrateResult<AlphaState> integrate_alpha(const AlphaState& init,
                                            Complex chi11, Complex chi12,
                                            double t_end, double dt,
                                            int stride = 1);
IntegrateResult<RGState> integrate_rg(const RGState& init, double eps,
                                      Complex chi_tilde, Complex chi_hat,
                                      Complex chi11, double t_end, double dt,
                                      int stride = 1);
IntegrateResult<OmegaState> integrate_omega(const OmegaState& init, double eps,
                                            double im_lambda1, Complex chi11,
                                            Complex chi12, double t_end,
                                            double dt, int stride = 1);
IntegrateResult<PolarState> integrate_polar(const PolarState& init, double eps,
                                            double im_lambda1,
                                            Complex chi_tilde, double t_end,
                                            double dt, int stride = 1);

enum class EqStability { Stable, Unstable, Saddle };

struct Equilibrium {
  RGState state;
  EqStability stability;
  std::array<Complex, 2> eigenvalues;
};

/// The four critical points of the truncated (A, gamma) system with their
/// linearization eigenvalues: the node at (gamma, A) = (0, eps/Re chi_tilde)
/// (two negative eigenvalues), the normal state (double positive), and the
/// two saddles at (eps/(2|Re chi11|)) (+-1, 1). Requires Re chi_tilde > 0
/// and Re chi_hat > 0.
std::vector<Equilibrium> equilibria(double eps, const BifCoeffs& coeffs);

/// Poincare return-map data for the unstable periodic orbit w2 = 0,
/// |w1| = sqrt(eps / -Re chi11), on the section Im w1 = 0 (crossed with
/// Re w1 > 0 in the rotation sense of the orbit). `analytic` carries
/// {mu, e^(a+ib), e^(a-ib)}; `numeric` the eigenvalues of the
/// central-difference Jacobian of the integrated return map. The two are
/// checked against each other within 5 eps^2.
struct ReturnMapEigs {
  std::array<Complex, 3> analytic;
  std::array<Complex, 3> numeric;
  double period = 0.0;       // p^eps of the unstable orbit
  double radial_mu = 0.0;    // e^{-2 eps p}
  double growth_a = 0.0;     // eps (Re chi_hat / -Re chi11) p
  double angle_b = 0.0;      // (Im lambda1 + eps Im chi12 / Re chi11) p
};
ReturnMapEigs poincare_return_eigs(double eps, const BifCoeffs& coeffs);

}  // namespace glwire
