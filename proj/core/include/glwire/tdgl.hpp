#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "glwire/grid.hpp"
#include "glwire/types.hpp"

namespace glwire {

/// Order-parameter samples with the drive parameters they evolve under.
struct WireState {
  Vec psi;
  double t = 0.0;
  double current = 0.0;  // applied current I
  double gamma = 0.0;    // control parameter Gamma
};

/// phi(x) = -I x + (i/2) int_0^x (psi psi_x^* - psi^* psi_x) dx',
/// normalized so phi(0) = 0. Real-valued up to roundoff.
Vec electric_potential(const Grid& grid, const WireState& s);

/// N[psi] = -|psi|^2 psi + (1/2) psi int_0^x (psi psi_x^* - psi^* psi_x) dx'.
Vec nonlinearity(const Grid& grid, const WireState& s);

/// One IMEX step: Crank-Nicolson on psi_xx + i x I psi + Gamma psi,
/// second-order Adams-Bashforth extrapolation of the nonlocal nonlinearity,
/// boundary rows enforced exactly. The first step runs a predictor-corrector
/// substep to seed the history. Owns the factorization and the N-history;
/// one stepper drives one simulation.
class TdglStepper {
 public:
  TdglStepper(const Grid& grid, double current, double gamma, double dt,
              bool nonlinear = true);

  WireState step(const WireState& s);
  double dt() const { return dt_; }
  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  double current_, gamma_, dt_;
  bool nonlinear_;
  Mat rhs_op_;  // (1/dt + L/2), boundary rows zeroed
  Eigen::PartialPivLU<Mat> lu_;  // (1/dt - L/2) with boundary rows
  Vec n_prev_;
  bool have_prev_ = false;
  long step_index_ = 0;
};

struct Observables {
  double l2_norm = 0.0;
  double h1_norm = 0.0;
  Complex psi_at_0;
  double current_dev = 0.0;  // max_x |(i/2)(psi psi_x^* - psi_x psi^*) - phi_x - I|
};

struct Snapshot {
  WireState state;
  Observables obs;
};

struct Trajectory {
  Grid grid;
  double current = 0.0;
  double gamma = 0.0;
  double gamma_offset = 0.0;
  double dt = 0.0;
  bool aborted = false;  // NaN detected; snapshots end at the last valid state
  std::vector<Snapshot> snapshots;
};

/// Initial data selector: "u1", "v1v2", "random_pt", "random", or
/// "file:<path>" (a snapshot CSV on the same grid). The first four accept an
/// optional ":<scale>" suffix (default 0.01), e.g. "u1:0.05".
struct SimConfig {
  int n = 128;
  Bc bc = Bc::Dirichlet;
  double current = 20.0;
  double gamma_offset = 0.01;  // Gamma = Re lambda_1 + gamma_offset
  double dt = 1e-3;
  double t_end = 100.0;
  std::string init = "u1";
  std::uint64_t seed = 0;
  int stride = 100;
  bool nonlinear = true;
};

Observables measure(const Grid& grid, const WireState& s);

Trajectory simulate(const SimConfig& cfg);

/// Post-run summary over the post-transient window.
struct SimReport {
  double amplitude_max = 0.0;   // max over x and post-transient t of |psi|
  double psi0_amplitude = 0.0;  // max over post-transient t of |psi(0, t)|
  double period = 0.0;          // 0 when no oscillation was detected
  double period_std = 0.0;
  int crossings = 0;            // up-crossings of Re psi(0, t) used
  double current_dev_max = 0.0;
  double final_max_abs = 0.0;
  bool steady = false;          // max_x |psi| drift < 0.1% over the last 10%
};
SimReport analyze(const Trajectory& traj, double transient_frac = 0.4);

/// The configured initial field (exposed for tests and tooling).
Vec initial_field(const Grid& grid, const SimConfig& cfg);

}  // namespace glwire
