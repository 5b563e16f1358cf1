#include "glwire/tdgl.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "glwire/io.hpp"
#include "glwire/spectral.hpp"

namespace glwire {

namespace {

// j = psi psi_x^* - psi^* psi_x; purely imaginary by construction.
Vec supercurrent_density(const Grid& grid, const Vec& psi) {
  Vec px = grid.d1() * psi;
  return psi.cwiseProduct(px.conjugate()) - psi.conjugate().cwiseProduct(px);
}

}  // namespace

Vec electric_potential(const Grid& grid, const WireState& s) {
  Vec j = supercurrent_density(grid, s.psi);
  Vec phi = 0.5 * kI * (grid.antideriv0() * j);
  phi -= s.current * grid.nodes().cast<Complex>();
  return phi;
}

Vec nonlinearity(const Grid& grid, const WireState& s) {
  Vec j = supercurrent_density(grid, s.psi);
  Vec accum = grid.antideriv0() * j;
  return -s.psi.cwiseAbs2().cast<Complex>().cwiseProduct(s.psi) +
         0.5 * s.psi.cwiseProduct(accum);
}

TdglStepper::TdglStepper(const Grid& grid, double current, double gamma,
                         double dt, bool nonlinear)
    : grid_(grid), current_(current), gamma_(gamma), dt_(dt),
      nonlinear_(nonlinear) {
  if (!(dt > 0.0)) throw InvalidInput("tdgl: dt must be positive");
  const int n = grid.n();
  Mat lin = grid.d2().cast<Complex>();
  for (int k = 0; k < n; ++k)
    lin(k, k) += kI * grid.nodes()(k) * current + gamma;

  Mat lhs = -0.5 * lin;
  Mat rhs = 0.5 * lin;
  for (int k = 0; k < n; ++k) {
    lhs(k, k) += 1.0 / dt;
    rhs(k, k) += 1.0 / dt;
  }
  // boundary rows: exact homogeneous conditions every step
  lhs.row(0).setZero();
  lhs.row(n - 1).setZero();
  rhs.row(0).setZero();
  rhs.row(n - 1).setZero();
  if (grid.bc() == Bc::Dirichlet) {
    lhs(0, 0) = 1.0;
    lhs(n - 1, n - 1) = 1.0;
  } else {
    lhs.row(0) = grid.d1().row(0).cast<Complex>();
    lhs.row(n - 1) = grid.d1().row(n - 1).cast<Complex>();
  }
  rhs_op_ = std::move(rhs);
  lu_.compute(lhs);
}

WireState TdglStepper::step(const WireState& s) {
  if (s.psi.size() != grid_.n())
    throw InvalidInput("tdgl: state size does not match the grid");
  const int n = grid_.n();

  auto advance = [&](const Vec& psi, const Vec& n_star) {
    Vec rhs = rhs_op_ * psi;
    if (nonlinear_) {
      rhs += n_star;
      rhs(0) = 0.0;
      rhs(n - 1) = 0.0;
    }
    Vec out = lu_.solve(rhs);
    if (!out.allFinite())
      throw NumericalFailure("tdgl: linear solve produced non-finite values");
    return out;
  };

  Vec n_now = nonlinear_ ? nonlinearity(grid_, s) : Vec::Zero(n).eval();
  Vec psi_next;
  if (!nonlinear_) {
    psi_next = advance(s.psi, n_now);
  } else if (have_prev_) {
    psi_next = advance(s.psi, (1.5 * n_now - 0.5 * n_prev_).eval());
  } else {
    // bootstrap: explicit predictor on N, trapezoid corrector
    Vec pred = advance(s.psi, n_now);
    WireState mid{pred, s.t + dt_, current_, gamma_};
    Vec n_mid = nonlinearity(grid_, mid);
    psi_next = advance(s.psi, (0.5 * (n_now + n_mid)).eval());
  }
  n_prev_ = std::move(n_now);
  have_prev_ = nonlinear_;
  ++step_index_;
  return {std::move(psi_next), s.t + dt_, current_, gamma_};
}

Observables measure(const Grid& grid, const WireState& s) {
  Observables o;
  o.l2_norm = grid.norm_l2(s.psi);
  o.h1_norm = grid.norm_h1(s.psi);
  o.psi_at_0 = grid.interpolate_at(s.psi, 0.0);
  Vec j = supercurrent_density(grid, s.psi);
  Vec phi = electric_potential(grid, s);
  Vec phix = grid.d1() * phi;
  double dev = 0.0;
  for (int k = 0; k < grid.n(); ++k) {
    Complex total = 0.5 * kI * j(k) - phix(k);
    dev = std::max(dev, std::abs(total - s.current));
  }
  o.current_dev = dev;
  return o;
}

Vec initial_field(const Grid& grid, const SimConfig& cfg) {
  std::string kind = cfg.init;
  double scale = 0.01;
  std::string payload;
  if (auto pos = kind.find(':'); pos != std::string::npos) {
    payload = kind.substr(pos + 1);
    kind = kind.substr(0, pos);
    if (kind != "file") {
      try {
        scale = std::stod(payload);
      } catch (...) {
        throw InvalidInput("init: bad scale suffix '" + payload + "'");
      }
    }
  }

  if (kind == "file") {
    SnapshotData snap = read_snapshot_csv(payload);
    if (int(snap.x.size()) != grid.n())
      throw InvalidInput("init file: snapshot has " +
                         std::to_string(snap.x.size()) + " nodes, grid has " +
                         std::to_string(grid.n()));
    for (int k = 0; k < grid.n(); ++k)
      if (std::abs(snap.x[k] - grid.nodes()(k)) > 1e-10)
        throw InvalidInput("init file: node mismatch with the grid");
    Vec psi(grid.n());
    for (int k = 0; k < grid.n(); ++k) psi(k) = snap.psi[k];
    return psi;
  }

  if (kind == "u1" || kind == "v1v2") {
    auto ps = eigenpairs(grid, cfg.current, 2);
    if (kind == "u1") return (scale * ps[0].u).eval();
    const Vec& u1 = ps[0].u;
    Vec u2 = grid.reflect_conjugate(u1);
    Vec v1 = u1 + u2;
    Vec v2 = kI * (u1 - u2);
    return (scale * (0.8 * v1 + 0.6 * v2)).eval();
  }

  if (kind == "random_pt" || kind == "random") {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int modes = 8;
    Vec f = Vec::Zero(grid.n());
    for (int m = 1; m <= modes; ++m) {
      Complex c(gauss(rng), gauss(rng));
      for (int k = 0; k < grid.n(); ++k) {
        double sarg = m * kPi * (grid.nodes()(k) + 1.0) / 2.0;
        double shape = grid.bc() == Bc::Dirichlet ? std::sin(sarg)
                                                  : std::cos(sarg);
        f(k) += c * shape;
      }
    }
    if (kind == "random_pt") f = 0.5 * (f + grid.reflect_conjugate(f)).eval();
    double mx = f.cwiseAbs().maxCoeff();
    if (mx > 0) f *= scale / mx;
    return f;
  }

  throw InvalidInput("init: unknown initial data '" + cfg.init + "'");
}

Trajectory simulate(const SimConfig& cfg) {
  if (cfg.n < 8) throw InvalidInput("simulate: n must be >= 8");
  if (cfg.current < 0) throw InvalidInput("simulate: I must be nonnegative");
  if (!(cfg.dt > 0) || !(cfg.t_end > 0))
    throw InvalidInput("simulate: dt and t_end must be positive");
  if (cfg.stride < 1) throw InvalidInput("simulate: stride must be >= 1");

  Grid grid = Grid::chebyshev(cfg.n, cfg.bc);
  const double gamma1 = transition_curve(grid, cfg.current);

  Trajectory traj{grid};
  traj.current = cfg.current;
  traj.gamma = gamma1 + cfg.gamma_offset;
  traj.gamma_offset = cfg.gamma_offset;
  traj.dt = cfg.dt;

  WireState state{initial_field(grid, cfg), 0.0, cfg.current, traj.gamma};
  TdglStepper stepper(grid, cfg.current, traj.gamma, cfg.dt, cfg.nonlinear);

  traj.snapshots.push_back({state, measure(grid, state)});
  const long steps = std::lround(cfg.t_end / cfg.dt);
  for (long k = 1; k <= steps; ++k) {
    WireState next = stepper.step(state);
    if (!next.psi.allFinite()) {
      traj.aborted = true;
      break;
    }
    state = std::move(next);
    if (k % cfg.stride == 0 || k == steps)
      traj.snapshots.push_back({state, measure(grid, state)});
  }
  return traj;
}

SimReport analyze(const Trajectory& traj, double transient_frac) {
  SimReport rep;
  if (traj.snapshots.empty()) return rep;
  const double t_end = traj.snapshots.back().state.t;
  const double t_cut = transient_frac * t_end;

  std::vector<double> ts;
  std::vector<Complex> psi0;
  double last_max = 0.0;
  for (const Snapshot& s : traj.snapshots) {
    double mx = s.state.psi.cwiseAbs().maxCoeff();
    last_max = mx;
    if (s.state.t < t_cut) continue;
    rep.amplitude_max = std::max(rep.amplitude_max, mx);
    rep.psi0_amplitude = std::max(rep.psi0_amplitude, std::abs(s.obs.psi_at_0));
    rep.current_dev_max = std::max(rep.current_dev_max, s.obs.current_dev);
    ts.push_back(s.state.t);
    psi0.push_back(s.obs.psi_at_0);
  }
  rep.final_max_abs = last_max;

  // period from up-crossings of Re psi(0, t)
  std::vector<double> crossings;
  for (size_t i = 1; i < psi0.size(); ++i) {
    double a = psi0[i - 1].real(), b = psi0[i].real();
    if (a < 0.0 && b >= 0.0) {
      double frac = a / (a - b);
      crossings.push_back(ts[i - 1] + frac * (ts[i] - ts[i - 1]));
    }
  }
  rep.crossings = int(crossings.size());
  if (crossings.size() >= 3) {
    std::vector<double> gaps;
    for (size_t i = 1; i < crossings.size(); ++i)
      gaps.push_back(crossings[i] - crossings[i - 1]);
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= gaps.size();
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    rep.period = mean;
    rep.period_std = std::sqrt(var / gaps.size());
  }

  // steadiness: drift of max_x |psi| over the last 10% of the run
  double t_tail = 0.9 * t_end;
  double lo = 1e300, hi = 0.0;
  for (const Snapshot& s : traj.snapshots) {
    if (s.state.t < t_tail) continue;
    double mx = s.state.psi.cwiseAbs().maxCoeff();
    lo = std::min(lo, mx);
    hi = std::max(hi, mx);
  }
  rep.steady = hi > 0.0 && (hi - lo) <= 1e-3 * hi;
  return rep;
}

}  // namespace glwire
