#include "glwire/bifurcation.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace glwire {

namespace {

constexpr double kComplexTol = 1e-4;  // |Im lambda_1| above this: periodic side

// theta_kl = int_0^x ( u_k (u_l)_x^* - u_l^* (u_k)_x ) dx'
Vec theta_kl(const Grid& g, const Vec& uk, const Vec& ul) {
  Vec ukx = g.derivative(uk);
  Vec ulx = g.derivative(ul);
  Vec integrand =
      uk.cwiseProduct(ulx.conjugate()) - ul.conjugate().cwiseProduct(ukx);
  return g.antiderivative_from_zero(integrand);
}

}  // namespace

BifCoeffs chi_from_modes(const Grid& g, double current, Complex lambda1,
                         const Vec& u1, const Vec& u2) {
  BifCoeffs c;
  c.I = current;
  c.lambda1 = lambda1;

  auto quad = [&](const Vec& v) { return g.quadrature(v); };
  Vec u1sq = u1.cwiseProduct(u1);

  c.beta = quad(u1sq);
  if (std::abs(c.beta) < 1e-8)
    throw DegenerateNormalization(
        "chi_coefficients: |int u1^2| < 1e-8 (current too close to a "
        "collision)");

  c.gamma11 = quad(u1.cwiseAbs2().cast<Complex>().cwiseProduct(u1sq));
  c.gamma21 = quad(u2.cwiseAbs2().cast<Complex>().cwiseProduct(u1sq));

  Vec th11 = theta_kl(g, u1, u1);
  Vec th22 = theta_kl(g, u2, u2);
  Vec th12 = theta_kl(g, u1, u2);

  c.c1111 = quad(u1sq.cwiseProduct(th11));
  c.c1122 = quad(u1sq.cwiseProduct(th22));
  c.c1212 = quad(u1.cwiseProduct(u2).cwiseProduct(th12));

  c.chi11 = (0.5 * c.c1111 - c.gamma11) / c.beta;
  c.chi12 = (0.5 * c.c1122 + 0.5 * c.c1212 - 2.0 * c.gamma21) / c.beta;
  c.chi_hat = c.chi12 - c.chi11;
  c.chi_tilde = -(c.chi11 + c.chi12);
  // With the Im lambda1 > 0 convention the slow phase of the u1 coefficient
  // drifts at -Im(chi_tilde)/Re(chi_tilde) per slow-time unit, so the lab
  // frequency Im lambda1 + omega*eps needs omega with the sign below. (The
  // opposite-signed form floating around pairs with the conjugate mode.)
  c.omega = c.chi_tilde.imag() / c.chi_tilde.real();
  return c;
}

BifCoeffs chi_coefficients(const Grid& grid, double current) {
  auto ps = eigenpairs(grid, current, 2);
  // Refuse the near-collision zone: the pair gap shrinks like
  // 2 sqrt(2.42 |I - I_c|), so a gap below 0.1 means |I - I_c| < ~1e-3,
  // where beta degenerates and the chi's blow up.
  if (std::abs(ps[1].lambda - ps[0].lambda) < 0.1)
    throw DegenerateNormalization(
        "chi_coefficients: leading pair gap " +
        std::to_string(std::abs(ps[1].lambda - ps[0].lambda)) +
        " indicates a current within ~1e-3 of a collision");
  const bool periodic = std::abs(ps[0].lambda.imag()) > kComplexTol;
  if (!periodic) {
    const Vec& u1 = ps[0].u;
    return chi_from_modes(grid, current, ps[0].lambda, u1, u1);
  }
  // Periodic side: lambda1 is the Im > 0 member; u2 is the exact PT partner
  // u1*(-x) rather than a second eigensolve, so the chi12 integrals see the
  // pairing they assume.
  const EigenPair& top = ps[0].lambda.imag() > 0 ? ps[0] : ps[1];
  Vec u2 = grid.reflect_conjugate(top.u);
  return chi_from_modes(grid, current, top.lambda, top.u, u2);
}

double find_Ik(const Grid& grid, double lo, double hi) {
  if (!(lo < hi)) throw InvalidInput("find_Ik: empty bracket");
  auto re_chi11 = [&](double current) {
    return chi_coefficients(grid, current).chi11.real();
  };
  double flo = re_chi11(lo), fhi = re_chi11(hi);
  if (!(flo < 0.0 && fhi > 0.0))
    throw BracketInvalid("find_Ik: Re chi11 must change sign over the bracket");
  while (hi - lo > 1e-3) {
    double mid = 0.5 * (lo + hi);
    (re_chi11(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BranchPrediction predict_branch(const BifCoeffs& c, double eps) {
  BranchPrediction p;
  p.eps = eps;
  const bool periodic = std::abs(c.lambda1.imag()) > kComplexTol;

  if (periodic) {
    if (eps <= 0)
      throw InvalidRegime("predict_branch: periodic branch needs eps > 0");
    if (c.chi_tilde.real() <= 0)
      throw InvalidRegime("predict_branch: Re chi_tilde <= 0");
    p.regime = Regime::NtoP_stable;
    p.amplitude = std::sqrt(eps / c.chi_tilde.real());
    p.frequency = c.lambda1.imag() + c.omega * eps;
    p.period = 2.0 * kPi / p.frequency;
    p.stable = true;
    return p;
  }

  const double re11 = c.chi11.real();
  if (std::abs(re11) < 1e-3)
    throw InvalidRegime(
        "predict_branch: |Re chi11| < 1e-3; the expansion breaks down near "
        "I_k");
  p.frequency = 0.0;
  p.period = std::numeric_limits<double>::infinity();
  if (re11 < 0) {
    if (eps <= 0)
      throw InvalidRegime("predict_branch: supercritical branch needs eps > 0");
    p.regime = Regime::NtoS_stable;
    p.amplitude = std::sqrt(eps / -re11);
    p.stable = true;
  } else {
    if (eps >= 0)
      throw InvalidRegime("predict_branch: subcritical branch needs eps < 0");
    p.regime = Regime::NtoS_unstable;
    p.amplitude = std::sqrt(-eps / re11);
    p.stable = false;
  }
  return p;
}

BranchPrediction unstable_periodic_prediction(const BifCoeffs& c, double eps) {
  if (eps <= 0)
    throw InvalidRegime("unstable_periodic_prediction: eps must be positive");
  if (c.chi11.real() >= 0)
    throw InvalidRegime("unstable_periodic_prediction: needs Re chi11 < 0");
  if (std::abs(c.lambda1.imag()) <= kComplexTol)
    throw InvalidRegime("unstable_periodic_prediction: not on the periodic "
                        "side");
  BranchPrediction p;
  p.regime = Regime::NtoP_stable;  // periodic in form ...
  p.eps = eps;
  p.amplitude = std::sqrt(eps) / (2.0 * std::sqrt(-c.chi11.real()));
  p.frequency =
      c.lambda1.imag() + eps * c.chi11.imag() / c.chi11.real();
  p.period = 2.0 * kPi / p.frequency;
  p.stable = false;  // ... but saddle-type unstable
  return p;
}

}  // namespace glwire
