#include "glwire/amplitude.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace glwire {

namespace {

constexpr double kBlowUp = 1e6;

// Classical RK4 on a flat double array viewed as the state.
template <int N, class Rhs>
std::array<double, N> rk4_step(const std::array<double, N>& y, double t,
                               double dt, const Rhs& rhs) {
  auto axpy = [](const std::array<double, N>& a, double s,
                 const std::array<double, N>& b) {
    std::array<double, N> r;
    for (int i = 0; i < N; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  std::array<double, N> k1 = rhs(y, t);
  std::array<double, N> k2 = rhs(axpy(y, dt / 2, k1), t + dt / 2);
  std::array<double, N> k3 = rhs(axpy(y, dt / 2, k2), t + dt / 2);
  std::array<double, N> k4 = rhs(axpy(y, dt, k3), t + dt);
  std::array<double, N> out;
  for (int i = 0; i < N; ++i)
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

template <int N, class Rhs>
struct RawResult {
  std::vector<std::pair<double, std::array<double, N>>> samples;
  bool blew_up = false;
  std::array<double, N> final_state{};
};

template <int N, class Rhs>
RawResult<N, Rhs> run_fixed(const std::array<double, N>& init, double t_end,
                            double dt, int stride, const Rhs& rhs) {
  if (!(dt > 0.0) || !(t_end > 0.0))
    throw InvalidInput("integrate: dt and t_end must be positive");
  if (stride < 1) throw InvalidInput("integrate: stride must be >= 1");
  RawResult<N, Rhs> out;
  const long steps = std::lround(t_end / dt);
  std::array<double, N> y = init;
  double t = 0.0;
  out.samples.push_back({t, y});
  for (long s = 1; s <= steps; ++s) {
    y = rk4_step<N>(y, t, dt, rhs);
    t = s * dt;
    double norm = 0.0;
    for (double v : y) norm = std::max(norm, std::abs(v));
    if (!(norm < kBlowUp)) {
      out.blew_up = true;
      out.samples.push_back({t, y});
      break;
    }
    if (s % stride == 0 || s == steps) out.samples.push_back({t, y});
  }
  out.final_state = y;
  return out;
}

template <int N, class Rhs>
double halving_error(const std::array<double, N>& init, double t_end,
                     double dt, const Rhs& rhs,
                     const std::array<double, N>& coarse_final) {
  auto fine = run_fixed<N>(init, t_end, dt / 2.0, 1 << 20, rhs);
  double err = 0.0;
  for (int i = 0; i < N; ++i)
    err = std::max(err, std::abs(fine.final_state[i] - coarse_final[i]));
  return err;
}

void check_chi_consistency(Complex chi_tilde, Complex chi_hat, Complex chi11) {
  const double scale =
      std::max({1.0, std::abs(chi_tilde), std::abs(chi_hat)});
  if (std::abs(chi11 + 0.5 * (chi_tilde + chi_hat)) > 1e-9 * scale)
    throw InvalidInput(
        "rg system: chi11 != -(chi_tilde + chi_hat)/2; inconsistent "
        "coefficients");
}

}  // namespace

std::pair<Complex, Complex> alpha_rhs(const AlphaState& s, Complex chi11,
                                      Complex chi12) {
  const double n1 = std::norm(s.a1), n2 = std::norm(s.a2);
  return {s.a1 + (chi11 * n1 + chi12 * n2) * s.a1,
          s.a2 + (std::conj(chi11) * n2 + std::conj(chi12) * n1) * s.a2};
}

double riccati_rhs(double r, double a2sq, Complex chi_hat) {
  if (!(r > 0.0)) throw InvalidInput("riccati_rhs: r must be positive");
  if (a2sq < 0.0) throw InvalidInput("riccati_rhs: |a2|^2 must be >= 0");
  return -chi_hat.real() * a2sq * r * (r * r - 1.0);
}

std::pair<double, double> rg_rhs(const RGState& s, double eps,
                                 Complex chi_tilde, Complex chi_hat,
                                 Complex chi11) {
  check_chi_consistency(chi_tilde, chi_hat, chi11);
  const double a_dot = 2.0 * ((eps - chi_tilde.real() * s.A) * s.A -
                              chi_hat.real() * s.gamma * s.gamma);
  const double g_dot =
      2.0 * (eps - (chi_tilde.real() + chi_hat.real()) * s.A) * s.gamma;
  return {a_dot, g_dot};
}

std::pair<Complex, Complex> omega_rhs(const OmegaState& s, double eps,
                                      double im_lambda1, Complex chi11,
                                      Complex chi12) {
  const double n1 = std::norm(s.w1), n2 = std::norm(s.w2);
  const Complex rot(0.0, im_lambda1);
  return {(-rot + eps) * s.w1 + (chi11 * n1 + chi12 * n2) * s.w1,
          (rot + eps) * s.w2 +
              (std::conj(chi11) * n2 + std::conj(chi12) * n1) * s.w2};
}

std::pair<double, double> polar_rhs(const PolarState& s, double eps,
                                    double im_lambda1, Complex chi_tilde) {
  return {eps * s.R - chi_tilde.real() * s.R * s.R * s.R,
          im_lambda1 - chi_tilde.imag() * s.R * s.R};
}

IntegrateResult<AlphaState> integrate_alpha(const AlphaState& init,
                                            Complex chi11, Complex chi12,
                                            double t_end, double dt,
                                            int stride) {
  auto rhs = [&](const std::array<double, 4>& y, double) {
    AlphaState s{{y[0], y[1]}, {y[2], y[3]}, 0.0};
    auto [d1, d2] = alpha_rhs(s, chi11, chi12);
    return std::array<double, 4>{d1.real(), d1.imag(), d2.real(), d2.imag()};
  };
  std::array<double, 4> y0{init.a1.real(), init.a1.imag(), init.a2.real(),
                           init.a2.imag()};
  auto raw = run_fixed<4>(y0, t_end, dt, stride, rhs);
  IntegrateResult<AlphaState> out;
  out.blew_up = raw.blew_up;
  for (auto& [t, y] : raw.samples)
    out.samples.push_back({{y[0], y[1]}, {y[2], y[3]}, t});
  if (!raw.blew_up)
    out.step_halving_error =
        halving_error<4>(y0, t_end, dt, rhs, raw.final_state);
  return out;
}

IntegrateResult<RGState> integrate_rg(const RGState& init, double eps,
                                      Complex chi_tilde, Complex chi_hat,
                                      Complex chi11, double t_end, double dt,
                                      int stride) {
  if (init.A < 0.0 || std::abs(init.gamma) > init.A + 1e-12)
    throw InvalidInput("integrate_rg: initial state violates |gamma| <= A");
  auto rhs = [&](const std::array<double, 2>& y, double) {
    RGState s{y[0], y[1], 0.0};
    auto [da, dg] = rg_rhs(s, eps, chi_tilde, chi_hat, chi11);
    return std::array<double, 2>{da, dg};
  };
  std::array<double, 2> y0{init.A, init.gamma};
  auto raw = run_fixed<2>(y0, t_end, dt, stride, rhs);
  IntegrateResult<RGState> out;
  out.blew_up = raw.blew_up;
  for (auto& [t, y] : raw.samples) out.samples.push_back({y[0], y[1], t});
  if (!raw.blew_up)
    out.step_halving_error =
        halving_error<2>(y0, t_end, dt, rhs, raw.final_state);
  return out;
}

IntegrateResult<OmegaState> integrate_omega(const OmegaState& init, double eps,
                                            double im_lambda1, Complex chi11,
                                            Complex chi12, double t_end,
                                            double dt, int stride) {
  auto rhs = [&](const std::array<double, 4>& y, double) {
    OmegaState s{{y[0], y[1]}, {y[2], y[3]}, 0.0};
    auto [d1, d2] = omega_rhs(s, eps, im_lambda1, chi11, chi12);
    return std::array<double, 4>{d1.real(), d1.imag(), d2.real(), d2.imag()};
  };
  std::array<double, 4> y0{init.w1.real(), init.w1.imag(), init.w2.real(),
                           init.w2.imag()};
  auto raw = run_fixed<4>(y0, t_end, dt, stride, rhs);
  IntegrateResult<OmegaState> out;
  out.blew_up = raw.blew_up;
  for (auto& [t, y] : raw.samples)
    out.samples.push_back({{y[0], y[1]}, {y[2], y[3]}, t});
  if (!raw.blew_up)
    out.step_halving_error =
        halving_error<4>(y0, t_end, dt, rhs, raw.final_state);
  return out;
}

IntegrateResult<PolarState> integrate_polar(const PolarState& init, double eps,
                                            double im_lambda1,
                                            Complex chi_tilde, double t_end,
                                            double dt, int stride) {
  auto rhs = [&](const std::array<double, 2>& y, double) {
    PolarState s{y[0], y[1], 0.0};
    auto [dr, dth] = polar_rhs(s, eps, im_lambda1, chi_tilde);
    return std::array<double, 2>{dr, dth};
  };
  std::array<double, 2> y0{init.R, init.theta};
  auto raw = run_fixed<2>(y0, t_end, dt, stride, rhs);
  IntegrateResult<PolarState> out;
  out.blew_up = raw.blew_up;
  for (auto& [t, y] : raw.samples) out.samples.push_back({y[0], y[1], t});
  if (!raw.blew_up)
    out.step_halving_error =
        halving_error<2>(y0, t_end, dt, rhs, raw.final_state);
  return out;
}

std::vector<Equilibrium> equilibria(double eps, const BifCoeffs& c) {
  if (!(eps > 0.0)) throw InvalidInput("equilibria: eps must be positive");
  const double rt = c.chi_tilde.real();
  const double rh = c.chi_hat.real();
  if (!(rt > 0.0) || !(rh > 0.0))
    throw InvalidRegime("equilibria: requires Re chi_tilde > 0 and "
                        "Re chi_hat > 0");
  const double s = rt + rh;  // = -2 Re chi11

  // Jacobian of (gamma, A) -> (gamma', A') evaluated at a critical point.
  auto eigs_at = [&](double gamma, double a) {
    Eigen::Matrix2d j;
    j(0, 0) = 2.0 * (eps - s * a);
    j(0, 1) = -2.0 * s * gamma;
    j(1, 0) = -4.0 * rh * gamma;
    j(1, 1) = 2.0 * (eps - 2.0 * rt * a);
    Eigen::EigenSolver<Eigen::Matrix2d> es(j);
    std::array<Complex, 2> out{es.eigenvalues()(0), es.eigenvalues()(1)};
    if (out[0].real() > out[1].real()) std::swap(out[0], out[1]);
    return out;
  };

  std::vector<Equilibrium> out;
  out.push_back({{eps / rt, 0.0, 0.0}, EqStability::Stable,
                 eigs_at(0.0, eps / rt)});
  out.push_back({{0.0, 0.0, 0.0}, EqStability::Unstable, eigs_at(0.0, 0.0)});
  out.push_back({{eps / s, eps / s, 0.0}, EqStability::Saddle,
                 eigs_at(eps / s, eps / s)});
  out.push_back({{eps / s, -eps / s, 0.0}, EqStability::Saddle,
                 eigs_at(-eps / s, eps / s)});
  return out;
}

ReturnMapEigs poincare_return_eigs(double eps, const BifCoeffs& c) {
  if (!(eps > 0.0))
    throw InvalidInput("poincare_return_eigs: eps must be positive");
  if (c.chi11.real() >= 0.0)
    throw InvalidRegime("poincare_return_eigs: requires Re chi11 < 0");
  const double lam = std::abs(c.lambda1.imag());
  if (lam <= 0.0)
    throw InvalidRegime("poincare_return_eigs: periodic side only");

  ReturnMapEigs out;
  const double r11 = c.chi11.real(), i11 = c.chi11.imag();
  const double i12 = c.chi12.imag();
  out.period = 2.0 * kPi / (lam + eps * i11 / r11);
  out.radial_mu = std::exp(-2.0 * eps * out.period);
  out.growth_a = eps * (c.chi_hat.real() / -r11) * out.period;
  // Transverse rotation angle per return; the eps correction carries
  // Im chi12 / Re chi11 with the sign fixed by the linearization about the
  // w2 = 0 orbit.
  out.angle_b = (lam + eps * i12 / r11) * out.period;
  out.analytic = {Complex(out.radial_mu, 0.0),
                  std::exp(Complex(out.growth_a, out.angle_b)),
                  std::exp(Complex(out.growth_a, -out.angle_b))};

  // Numeric return map of the truncated system on the section Im w1 = 0.
  const double rho = std::sqrt(eps / -r11);
  const double dt = out.period / 4096.0;

  auto rhs = [&](const std::array<double, 4>& y, double) {
    OmegaState s{{y[0], y[1]}, {y[2], y[3]}, 0.0};
    auto [d1, d2] = omega_rhs(s, eps, lam, c.chi11, c.chi12);
    return std::array<double, 4>{d1.real(), d1.imag(), d2.real(), d2.imag()};
  };

  // One return: advance until Im w1 crosses zero downward with Re w1 > 0.
  auto return_map = [&](const std::array<double, 3>& x) {
    std::array<double, 4> y{x[0], 0.0, x[1], x[2]};
    double t = 0.0;
    const double t_max = 3.0 * out.period;
    std::array<double, 4> prev = y;
    while (t < t_max) {
      prev = y;
      y = rk4_step<4>(y, t, dt, rhs);
      t += dt;
      if (t > 0.5 * out.period && prev[1] > 0.0 && y[1] <= 0.0 &&
          y[0] > 0.0) {
        // refine the crossing time by bisection on the step length
        double lo = 0.0, hi = dt;
        std::array<double, 4> base = prev;
        for (int it = 0; it < 60; ++it) {
          double mid = 0.5 * (lo + hi);
          auto probe = rk4_step<4>(base, t - dt, mid, rhs);
          (probe[1] > 0.0 ? lo : hi) = mid;
        }
        auto hit = rk4_step<4>(base, t - dt, 0.5 * (lo + hi), rhs);
        return std::array<double, 3>{hit[0], hit[2], hit[3]};
      }
    }
    throw ReturnFailure(
        "poincare_return_eigs: section not re-crossed within 3 nominal "
        "periods");
  };

  // Central-difference Jacobian at the fixed point (rho, 0, 0).
  const std::array<double, 3> fp{rho, 0.0, 0.0};
  const double h = 1e-4 * rho;
  Eigen::Matrix3d jac;
  for (int j = 0; j < 3; ++j) {
    std::array<double, 3> xp = fp, xm = fp;
    xp[j] += h;
    xm[j] -= h;
    auto fp_p = return_map(xp);
    auto fp_m = return_map(xm);
    for (int i = 0; i < 3; ++i) jac(i, j) = (fp_p[i] - fp_m[i]) / (2.0 * h);
  }
  Eigen::EigenSolver<Eigen::Matrix3d> es(jac);
  for (int i = 0; i < 3; ++i) out.numeric[i] = es.eigenvalues()(i);

  // Pair up and verify agreement at the O(eps^2) level.
  const double tol = 5.0 * eps * eps;
  std::array<bool, 3> used{false, false, false};
  for (const Complex& a : out.analytic) {
    int best = -1;
    double bd = 1e300;
    for (int i = 0; i < 3; ++i) {
      if (used[i]) continue;
      double d = std::abs(a - out.numeric[i]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    used[best] = true;
    if (bd > tol)
      throw NumericalFailure(
          "poincare_return_eigs: finite-difference return-map eigenvalue "
          "differs from the analytic value by " + std::to_string(bd));
  }
  return out;
}

}  // namespace glwire
