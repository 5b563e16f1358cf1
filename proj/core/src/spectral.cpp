#include "glwire/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>

namespace glwire {

namespace {

constexpr double kImagTol = 1e-5;  // |Im lambda| above this counts as complex

// Sort ascending by Re; within groups of equal Re (to tol) ascending by Im,
// so a conjugate pair lists its Im < 0 member first.
void sort_spectrum(std::vector<Complex>& v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  size_t lo = 0;
  while (lo < v.size()) {
    size_t hi = lo + 1;
    while (hi < v.size() &&
           v[hi].real() - v[hi - 1].real() <=
               1e-9 * std::max(1.0, std::abs(v[hi])))
      ++hi;
    std::sort(v.begin() + lo, v.begin() + hi,
              [](Complex a, Complex b) { return a.imag() < b.imag(); });
    lo = hi;
  }
}

struct Spectrum {
  std::vector<Complex> lambdas;  // sorted, all n-2 of them
  std::vector<Vec> vectors;      // full-grid, matching lambdas
  Mat full;                      // operator without boundary rows replaced
};

Spectrum solve_spectrum(const Grid& grid, double current) {
  const int n = grid.n();
  ReducedOperator red = reduce_operator(grid, current, 0.0);

  Eigen::ComplexEigenSolver<Mat> es(red.interior, true);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigenpairs: dense eigensolver failed at I = " +
                           std::to_string(current));

  const int m = n - 2;
  std::vector<Complex> lam(m);
  for (int j = 0; j < m; ++j) lam[j] = -es.eigenvalues()(j);
  std::vector<Complex> sorted = lam;
  sort_spectrum(sorted);

  // Match sorted eigenvalues back to solver columns.
  std::vector<int> order(m);
  std::vector<bool> used(m, false);
  for (int s = 0; s < m; ++s) {
    int best = -1;
    double bd = 0.0;
    for (int j = 0; j < m; ++j) {
      if (used[j]) continue;
      double d = std::abs(lam[j] - sorted[s]);
      if (best < 0 || d < bd) {
        best = j;
        bd = d;
      }
    }
    used[best] = true;
    order[s] = best;
  }

  Spectrum out;
  out.lambdas = std::move(sorted);
  out.vectors.resize(m);
  for (int s = 0; s < m; ++s) {
    Vec ui = es.eigenvectors().col(order[s]);
    Vec u(n);
    u.segment(1, m) = ui;
    Eigen::Vector2cd b = red.boundary * ui;
    u(0) = b(0);
    u(n - 1) = b(1);
    out.vectors[s] = std::move(u);
  }

  Mat full = grid.d2().cast<Complex>();
  for (int j = 0; j < n; ++j) full(j, j) += kI * grid.nodes()(j) * current;
  out.full = std::move(full);
  return out;
}

void normalize_mode(const Grid& grid, Vec& u) {
  Complex at0 = grid.interpolate_at(u, 0.0);
  double maxabs = u.cwiseAbs().maxCoeff();
  if (std::abs(at0) > 1e-8 * maxabs) {
    u /= at0;
  } else {
    // Mode vanishes at x = 0 (even-index modes at I = 0); scale by max-abs
    // and make the largest sample real positive for determinism.
    int idx = 0;
    u.cwiseAbs().maxCoeff(&idx);
    u *= std::abs(u(idx)) / (u(idx) * maxabs);
  }
}

double interior_residual(const Mat& full, Complex lambda, const Vec& u) {
  const int n = int(u.size());
  Vec r = full * u + lambda * u;
  return r.segment(1, n - 2).norm() / u.norm();
}

}  // namespace

Mat assemble_operator(const Grid& grid, double current, double shift) {
  if (current < 0) throw InvalidInput("assemble_operator: I must be nonnegative");
  const int n = grid.n();
  Mat a = grid.d2().cast<Complex>();
  for (int j = 0; j < n; ++j)
    a(j, j) += kI * grid.nodes()(j) * current + shift;
  a.row(0).setZero();
  a.row(n - 1).setZero();
  if (grid.bc() == Bc::Dirichlet) {
    a(0, 0) = 1.0;
    a(n - 1, n - 1) = 1.0;
  } else {
    a.row(0) = grid.d1().row(0).cast<Complex>();
    a.row(n - 1) = grid.d1().row(n - 1).cast<Complex>();
  }
  return a;
}

ReducedOperator reduce_operator(const Grid& grid, double current, double shift) {
  if (current < 0) throw InvalidInput("reduce_operator: I must be nonnegative");
  const int n = grid.n();
  const int m = n - 2;
  Mat op = grid.d2().cast<Complex>();
  for (int j = 0; j < n; ++j)
    op(j, j) += kI * grid.nodes()(j) * current + shift;

  ReducedOperator red;
  if (grid.bc() == Bc::Dirichlet) {
    red.interior = op.block(1, 1, m, m);
    red.boundary = Mat::Zero(2, m);
    return red;
  }
  // Neumann: u'(+-1) = 0 gives two equations for the boundary unknowns;
  // eliminate them by a 2x2 Schur solve.
  Eigen::Matrix2cd bb;
  bb << grid.d1()(0, 0), grid.d1()(0, n - 1),
        grid.d1()(n - 1, 0), grid.d1()(n - 1, n - 1);
  Mat bi(2, m);
  bi.row(0) = grid.d1().row(0).segment(1, m).cast<Complex>();
  bi.row(1) = grid.d1().row(n - 1).segment(1, m).cast<Complex>();
  Mat s = -bb.inverse() * bi;  // [u_0; u_{n-1}] = s * u_int
  Mat a_ii = op.block(1, 1, m, m);
  Mat a_ib(m, 2);
  a_ib.col(0) = op.block(1, 0, m, 1);
  a_ib.col(1) = op.block(1, n - 1, m, 1);
  red.interior = a_ii + a_ib * s;
  red.boundary = s;
  return red;
}

std::vector<EigenPair> eigenpairs(const Grid& grid, double current, int k) {
  if (k < 1 || k > grid.n() - 2)
    throw InvalidInput("eigenpairs: need 1 <= k <= n-2");
  Spectrum sp = solve_spectrum(grid, current);
  std::vector<EigenPair> out(k);
  for (int j = 0; j < k; ++j) {
    out[j].lambda = sp.lambdas[j];
    Vec u = sp.vectors[j];
    normalize_mode(grid, u);
    out[j].residual = interior_residual(sp.full, sp.lambdas[j], u);
    out[j].u = std::move(u);
  }
  return out;
}

double transition_curve(const Grid& grid, double current) {
  return eigenpairs(grid, current, 1)[0].lambda.real();
}

double find_collision(const Grid& grid, int ell, double lo, double hi,
                      double tol) {
  if (ell < 1) throw InvalidInput("find_collision: ell must be >= 1");
  if (!(lo < hi)) throw InvalidInput("find_collision: empty bracket");
  const int k = 2 * ell;
  auto complex_pair = [&](double current) {
    auto ps = eigenpairs(grid, current, k);
    return std::abs(ps[k - 2].lambda.imag()) > kImagTol;
  };
  if (complex_pair(lo) || !complex_pair(hi))
    throw BracketInvalid(
        "find_collision: pair must be real at the left end and complex at "
        "the right end of the bracket");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (complex_pair(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double reality_bound(Bc bc) {
  return bc == Bc::Neumann ? kPi * kPi / 8.0 : 3.0 * kPi * kPi / 8.0;
}

Complex large_I_asymptotic(double current) {
  if (current <= 0) throw InvalidInput("large_I_asymptotic: I must be positive");
  const double p = std::pow(current, 2.0 / 3.0);
  return Complex(1.17 * p, current - 2.02 * p);
}

Complex airy_halfline_leading(double truncation, int n, double potential_sign) {
  if (truncation < 10.0)
    throw InvalidInput("airy_halfline_leading: truncation must be >= 10");
  if (n < 64) throw InvalidInput("airy_halfline_leading: n must be >= 64");

  auto leading = [&](double y_max) {
    Grid g = Grid::chebyshev(n, Bc::Dirichlet);
    const int m = n - 2;
    // y = y_max (1 + xi)/2 on descending xi; d/dy = (2/y_max) d/dxi.
    const double jac = 2.0 / y_max;
    Mat a = (jac * jac) * g.d2().block(1, 1, m, m).cast<Complex>();
    for (int j = 0; j < m; ++j) {
      const double y = y_max * (1.0 + g.nodes()(j + 1)) / 2.0;
      a(j, j) += kI * potential_sign * y;
    }
    Eigen::ComplexEigenSolver<Mat> es(a, false);
    if (es.info() != Eigen::Success)
      throw NumericalFailure("airy_halfline_leading: eigensolver failed");
    Complex best(0, 0);
    bool have = false;
    for (int j = 0; j < m; ++j) {
      Complex lam = -es.eigenvalues()(j);
      // Keep the boundary-layer family at y = 0; modes pinned to the far
      // end carry |Im lambda| ~ y_max.
      if (std::abs(lam.imag()) > y_max / 2.0) continue;
      if (!have || lam.real() < best.real()) {
        best = lam;
        have = true;
      }
    }
    if (!have)
      throw NumericalFailure("airy_halfline_leading: no candidate eigenvalue");
    return best;
  };

  Complex at_y = leading(truncation);
  Complex at_2y = leading(2.0 * truncation);
  if (std::abs(at_y - at_2y) >= 1e-4)
    throw TruncationInsufficient(
        "airy_halfline_leading: doubling the truncation moved the eigenvalue "
        "by " + std::to_string(std::abs(at_y - at_2y)));
  return at_y;
}

std::vector<double> jbkw_real_branch(double current, int m_lo, int m_hi) {
  if (current < 10.0)
    throw InvalidInput("jbkw_real_branch: valid for I >= 10");
  if (m_lo > m_hi) throw InvalidInput("jbkw_real_branch: empty index range");
  const double eps = 1.0 / std::sqrt(current);
  const double floor_value = 2.0 * std::sqrt(2.0) / 3.0;

  // lhs(0) = 2 sqrt(2)/3 and lhs -> infinity; monotone on [0, inf).
  auto lhs = [&](double a) {
    const double g = 1.5 * std::atan(a);
    return floor_value * std::pow(1.0 + a * a, 0.75) *
           (std::cos(g) + std::sin(g));
  };

  std::vector<double> out;
  for (int m = m_lo; m <= m_hi; ++m) {
    const double target = eps * m * kPi;
    if (target <= floor_value) continue;
    double a_hi = 1.0;
    int guard = 0;
    while (lhs(a_hi) < target && guard++ < 200) a_hi *= 2.0;
    if (lhs(a_hi) < target) continue;  // no root in reach: skip
    double a_lo = 0.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a_lo + a_hi);
      (lhs(mid) < target ? a_lo : a_hi) = mid;
    }
    out.push_back(current * 0.5 * (a_lo + a_hi));
  }
  return out;
}

SpectrumScan scan_spectrum(const Grid& grid, double lo, double hi, int samples,
                           int k, int workers) {
  if (!(lo < hi) || samples < 2)
    throw InvalidInput("scan_spectrum: need lo < hi and samples >= 2");
  if (k < 2 || k > grid.n() - 2)
    throw InvalidInput("scan_spectrum: need 2 <= k <= n-2");

  const int probe = std::min(grid.n() - 2, k + 2);
  using Sample = std::pair<std::vector<Complex>, std::vector<double>>;
  auto solve_at = [&](double current) {
    auto ps = eigenpairs(grid, current, probe);
    Sample s;
    for (const auto& p : ps) {
      s.first.push_back(p.lambda);
      s.second.push_back(p.residual);
    }
    return s;
  };

  std::map<double, Sample> table;
  {
    std::vector<double> currents(samples);
    for (int i = 0; i < samples; ++i)
      currents[i] = lo + (hi - lo) * i / (samples - 1);
    if (workers <= 1) {
      for (double c : currents) table.emplace(c, solve_at(c));
    } else {
      std::vector<std::future<Sample>> futs;
      futs.reserve(currents.size());
      for (double c : currents)
        futs.push_back(std::async(std::launch::async, solve_at, c));
      for (int i = 0; i < samples; ++i)
        table.emplace(currents[i], futs[i].get());
    }
  }

  // Continuity matching with step halving: if the best match moves farther
  // than half the gap to the next candidate, refine the step in between.
  auto match_ok = [&](const std::vector<Complex>& from,
                      const std::vector<Complex>& to) {
    for (const auto& f : from) {
      double best = 1e300, second = 1e300;
      for (const auto& t : to) {
        double d = std::abs(f - t);
        if (d < best) {
          second = best;
          best = d;
        } else if (d < second) {
          second = d;
        }
      }
      if (best > 0.5 * second && best > 1e-9) return false;
    }
    return true;
  };

  std::vector<std::pair<double, Sample>> points(table.begin(), table.end());
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    int depth = 0;
    while (depth < 6) {
      std::vector<Complex> a(points[i].second.first.begin(),
                             points[i].second.first.begin() + k);
      std::vector<Complex> b(points[i + 1].second.first.begin(),
                             points[i + 1].second.first.begin() + k);
      if (match_ok(a, b)) break;
      double mid = 0.5 * (points[i].first + points[i + 1].first);
      points.insert(points.begin() + i + 1, {mid, solve_at(mid)});
      ++depth;
    }
  }

  SpectrumScan scan;
  scan.tracks.resize(k);
  scan.residuals.resize(k);
  for (const auto& [current, sample] : points) {
    scan.currents.push_back(current);
    for (int j = 0; j < k; ++j) {
      scan.tracks[j].push_back(sample.first[j]);
      scan.residuals[j].push_back(sample.second[j]);
    }
  }

  // Collisions: pair 2l-1, 2l turning complex between adjacent samples.
  for (int ell = 1; 2 * ell <= k; ++ell) {
    const auto& tr = scan.tracks[2 * ell - 2];
    for (size_t i = 0; i + 1 < tr.size(); ++i) {
      const bool was = std::abs(tr[i].imag()) > kImagTol;
      const bool now = std::abs(tr[i + 1].imag()) > kImagTol;
      if (!was && now) {
        try {
          double ic = find_collision(grid, ell, scan.currents[i],
                                     scan.currents[i + 1]);
          scan.collisions.emplace_back(ell, ic);
        } catch (const BracketInvalid&) {
          // transient mismatch (e.g. track reordering); skip
        }
      }
    }
  }
  return scan;
}

}  // namespace glwire
