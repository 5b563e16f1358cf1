#include "glwire/psc.hpp"

#include <algorithm>
#include <cmath>

#include "glwire/spectral.hpp"

namespace glwire {

namespace {

// Space-time interpolating view of a trajectory: barycentric in x, linear
// between snapshots in t. Snapshot derivatives are cached on demand.
class FieldView {
 public:
  explicit FieldView(const Trajectory& traj) : traj_(traj) {
    dpsi_.resize(traj.snapshots.size());
  }

  double t_first() const { return traj_.snapshots.front().state.t; }
  double t_last() const { return traj_.snapshots.back().state.t; }

  Complex value(double x, double t) const {
    auto [k, s] = locate(t);
    const Vec& a = traj_.snapshots[k].state.psi;
    const Vec& b = traj_.snapshots[k + 1].state.psi;
    return (1.0 - s) * traj_.grid.interpolate_at(a, x) +
           s * traj_.grid.interpolate_at(b, x);
  }

  Complex dx(double x, double t) const {
    auto [k, s] = locate(t);
    return (1.0 - s) * traj_.grid.interpolate_at(deriv(k), x) +
           s * traj_.grid.interpolate_at(deriv(k + 1), x);
  }

  Complex dt(double x, double t) const {
    auto [k, s] = locate(t);
    (void)s;
    const Vec& a = traj_.snapshots[k].state.psi;
    const Vec& b = traj_.snapshots[k + 1].state.psi;
    double span = traj_.snapshots[k + 1].state.t - traj_.snapshots[k].state.t;
    return (traj_.grid.interpolate_at(b, x) - traj_.grid.interpolate_at(a, x)) /
           span;
  }

 private:
  std::pair<size_t, double> locate(double t) const {
    const auto& snaps = traj_.snapshots;
    size_t lo = 0, hi = snaps.size() - 1;
    t = std::clamp(t, snaps.front().state.t, snaps.back().state.t);
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      (snaps[mid].state.t <= t ? lo : hi) = mid;
    }
    double span = snaps[lo + 1].state.t - snaps[lo].state.t;
    return {lo, (t - snaps[lo].state.t) / span};
  }

  const Vec& deriv(size_t k) const {
    if (dpsi_[k].size() == 0)
      dpsi_[k] = traj_.grid.d1() * traj_.snapshots[k].state.psi;
    return dpsi_[k];
  }

  const Trajectory& traj_;
  mutable std::vector<Vec> dpsi_;
};

int winding_number(const FieldView& f, double x0, double t0, double hx,
                   double ht) {
  // phase circulation around the rectangle [x0 +- hx] x [t0 +- ht]
  const int per_edge = 64;
  std::vector<Complex> ring;
  ring.reserve(4 * per_edge);
  for (int i = 0; i < per_edge; ++i)  // bottom: left -> right
    ring.push_back(f.value(x0 - hx + 2.0 * hx * i / per_edge, t0 - ht));
  for (int i = 0; i < per_edge; ++i)  // right: bottom -> top
    ring.push_back(f.value(x0 + hx, t0 - ht + 2.0 * ht * i / per_edge));
  for (int i = 0; i < per_edge; ++i)  // top: right -> left
    ring.push_back(f.value(x0 + hx - 2.0 * hx * i / per_edge, t0 + ht));
  for (int i = 0; i < per_edge; ++i)  // left: top -> bottom
    ring.push_back(f.value(x0 - hx, t0 + ht - 2.0 * ht * i / per_edge));

  double total = 0.0;
  for (size_t i = 0; i < ring.size(); ++i) {
    Complex a = ring[i];
    Complex b = ring[(i + 1) % ring.size()];
    if (a == Complex(0.0) || b == Complex(0.0)) return 0;  // degenerate ring
    total += std::arg(b / a);
  }
  return int(std::lround(total / (2.0 * kPi)));
}

}  // namespace

std::vector<PSCEvent> detect_pscs(const Trajectory& traj, double threshold) {
  if (traj.snapshots.size() < 3) return {};
  const Grid& grid = traj.grid;
  const int n = grid.n();

  if (threshold <= 0.0) {
    std::vector<double> maxima;
    maxima.reserve(traj.snapshots.size());
    for (const Snapshot& s : traj.snapshots)
      maxima.push_back(s.state.psi.cwiseAbs().maxCoeff());
    std::nth_element(maxima.begin(), maxima.begin() + maxima.size() / 2,
                     maxima.end());
    threshold = 0.25 * maxima[maxima.size() / 2];
  }
  if (threshold <= 0.0) return {};

  FieldView field(traj);
  const double span =
      traj.snapshots[1].state.t - traj.snapshots[0].state.t;

  std::vector<PSCEvent> events;
  auto already_known = [&](double x, double t) {
    for (const PSCEvent& e : events)
      if (std::abs(e.x - x) < 2e-3 && std::abs(e.t - t) < std::max(2e-3, span))
        return true;
    return false;
  };

  for (size_t k = 0; k + 1 < traj.snapshots.size(); ++k) {
    const Snapshot& a = traj.snapshots[k];
    const Snapshot& b = traj.snapshots[k + 1];
    for (int j = 0; j < n; ++j) {
      // the Dirichlet ends are structural zeros, not slips
      if (std::abs(grid.nodes()(j)) > 0.95) continue;
      double local = std::min(std::abs(a.state.psi(j)), std::abs(b.state.psi(j)));
      if (local >= threshold) continue;

      // Newton polish on (Re psi, Im psi)(x, t)
      double x = grid.nodes()(j);
      double t = 0.5 * (a.state.t + b.state.t);
      bool converged = false;
      for (int it = 0; it < 40; ++it) {
        Complex v = field.value(x, t);
        if (std::abs(v) <= 1e-11) {
          converged = true;
          break;
        }
        Complex vx = field.dx(x, t);
        Complex vt = field.dt(x, t);
        double det = vx.real() * vt.imag() - vt.real() * vx.imag();
        if (std::abs(det) < 1e-14) break;
        double step_x = (v.real() * vt.imag() - vt.real() * v.imag()) / det;
        double step_t = (vx.real() * v.imag() - v.real() * vx.imag()) / det;
        x -= step_x;
        t -= step_t;
        if (std::abs(x) > 0.95 || t < field.t_first() || t > field.t_last())
          break;
        if (std::abs(step_x) < 1e-13 && std::abs(step_t) < 1e-13) {
          converged = std::abs(field.value(x, t)) <= 1e-9;
          break;
        }
      }
      if (!converged) continue;  // candidate dropped
      if (already_known(x, t)) continue;

      PSCEvent ev;
      ev.x = x;
      ev.t = t;
      ev.min_abs_psi = local;
      double hx = std::min(0.03, 0.999 - std::abs(x));
      double ht = std::min(1.2 * span, 0.45 * (field.t_last() - field.t_first()));
      ht = std::min({ht, t - field.t_first(), field.t_last() - t});
      ev.winding = winding_number(field, x, t, hx, ht);
      events.push_back(ev);
    }
  }

  std::sort(events.begin(), events.end(), [](const PSCEvent& a, const PSCEvent& b) {
    return a.t != b.t ? a.t < b.t : a.x < b.x;
  });
  return events;
}

double leading_mode_slope_at_zero(const Grid& grid, double current) {
  auto ps = eigenpairs(grid, current, 2);
  if (std::abs(ps[0].lambda.imag()) <= 1e-5)
    throw InvalidRegime(
        "leading_mode_slope_at_zero: leading pair is real (I <= I_c)");
  const EigenPair& top = ps[0].lambda.imag() > 0 ? ps[0] : ps[1];
  return grid.interpolate_at(grid.derivative(top.u), 0.0).real();
}

}  // namespace glwire
