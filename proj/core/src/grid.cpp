#include "glwire/grid.hpp"

#include <cmath>
#include <string>

namespace glwire {

struct Grid::Data {
  int n = 0;
  Bc bc = Bc::Dirichlet;
  GridKind kind = GridKind::Chebyshev;
  RVec nodes;
  RMat d1;
  RMat d2;
  RVec qweights;
  RMat antideriv0;
  RVec barweights;  // barycentric weights (Chebyshev); unused for FD
};

namespace {

void check_size(const Vec& g, int n, const char* who) {
  if (g.size() != n) {
    throw InvalidInput(std::string(who) + ": grid function has length " +
                       std::to_string(g.size()) + ", grid has " +
                       std::to_string(n) + " nodes");
  }
}

// Reverse rows and columns: (R A R)(i,j) = A(n-1-i, n-1-j).
RMat reflected(const RMat& a) {
  return a.reverse();
}

// Clenshaw-Curtis weights on the n = N+1 Gauss-Lobatto nodes; exact for
// polynomials of degree <= N.
RVec clenshaw_curtis(int n) {
  const int N = n - 1;
  RVec w(n);
  if (N % 2 == 0) {
    w(0) = w(N) = 1.0 / (N * N - 1.0);
    for (int i = 1; i < N; ++i) {
      double v = 1.0;
      for (int k = 1; k <= N / 2 - 1; ++k)
        v -= 2.0 * std::cos(2.0 * k * i * kPi / N) / (4.0 * k * k - 1.0);
      v -= std::cos(N * i * kPi / N) / (N * N - 1.0);
      w(i) = 2.0 * v / N;
    }
  } else {
    w(0) = w(N) = 1.0 / (N * N);
    for (int i = 1; i < N; ++i) {
      double v = 1.0;
      for (int k = 1; k <= (N - 1) / 2; ++k)
        v -= 2.0 * std::cos(2.0 * k * i * kPi / N) / (4.0 * k * k - 1.0);
      w(i) = 2.0 * v / N;
    }
  }
  // Symmetrize so reversal is exact.
  for (int i = 0; i < n / 2; ++i) {
    double m = 0.5 * (w(i) + w(N - i));
    w(i) = w(N - i) = m;
  }
  return w;
}

// Antiderivative-from-zero operator via the Chebyshev coefficient expansion:
// values -> coefficients -> integrated coefficients -> values, shifted so the
// interpolant vanishes at x = 0.
RMat chebyshev_antideriv0(int n) {
  const int N = n - 1;
  // Coefficients a_k of the degree-N interpolant (discrete cosine transform).
  RMat cfv(n, n);
  for (int k = 0; k <= N; ++k) {
    const double ck = (k == 0 || k == N) ? 2.0 : 1.0;
    for (int j = 0; j <= N; ++j) {
      const double cj = (j == 0 || j == N) ? 2.0 : 1.0;
      cfv(k, j) = 2.0 / (N * ck * cj) * std::cos(k * j * kPi / N);
    }
  }
  // b = S a with int T_0 = T_1, int T_1 = T_2/4 (+const),
  // int T_k = T_{k+1}/(2k+2) - T_{k-1}/(2k-2) for k >= 2.
  RMat s = RMat::Zero(n + 1, n);
  s(1, 0) = 1.0;
  s(1, 2) -= 0.5;  // b_1 = a_0 - a_2/2
  for (int m = 2; m <= N + 1; ++m) {
    s(m, m - 1) += 1.0 / (2.0 * m);
    if (m + 1 <= N) s(m, m + 1) -= 1.0 / (2.0 * m);
  }
  // Evaluate sum_m b_m T_m at the nodes and at x = 0.
  RMat ev(n, n + 1);
  RVec at0(n + 1);
  for (int m = 0; m <= N + 1; ++m) {
    at0(m) = std::cos(m * kPi / 2.0);
    for (int j = 0; j <= N; ++j) ev(j, m) = std::cos(m * j * kPi / N);
  }
  RMat q = (ev - RVec::Ones(n) * at0.transpose()) * s * cfv;
  // Enforce Q R = -R Q exactly: int_0^x of g(-s) is -(Q g)(-x).
  return 0.5 * (q - reflected(q));
}

}  // namespace

Grid Grid::chebyshev(int n, Bc bc) {
  if (n < 8) throw InvalidInput("grid: node count must be >= 8");
  auto data = std::make_shared<Data>();
  data->n = n;
  data->bc = bc;
  data->kind = GridKind::Chebyshev;

  const int N = n - 1;
  // x_j = cos(j pi/N) computed as sin(pi (N-2j)/(2N)) and mirrored, so the
  // node set is antisymmetric to the last bit.
  RVec x(n);
  for (int j = 0; j <= N / 2; ++j) {
    x(j) = std::sin(kPi * (N - 2.0 * j) / (2.0 * N));
    x(N - j) = -x(j);
  }
  if (N % 2 == 0) x(N / 2) = 0.0;
  data->nodes = x;

  RVec c(n);
  for (int j = 0; j <= N; ++j)
    c(j) = ((j == 0 || j == N) ? 2.0 : 1.0) * ((j % 2 == 0) ? 1.0 : -1.0);

  RMat d = RMat::Zero(n, n);
  for (int i = 0; i <= N; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      d(i, j) = (c(i) / c(j)) / (x(i) - x(j));
      rowsum += d(i, j);
    }
    d(i, i) = -rowsum;  // negative-sum trick: exact derivative of constants
  }
  // d/dx anticommutes with reflection; enforce it exactly so PT symmetry of
  // assembled operators holds at the matrix level.
  d = 0.5 * (d - reflected(d)).eval();
  data->d1 = d;
  RMat dd = d * d;
  data->d2 = 0.5 * (dd + reflected(dd));

  data->qweights = clenshaw_curtis(n);
  data->antideriv0 = chebyshev_antideriv0(n);

  RVec bw(n);
  for (int j = 0; j <= N; ++j)
    bw(j) = ((j % 2 == 0) ? 1.0 : -1.0) * ((j == 0 || j == N) ? 0.5 : 1.0);
  data->barweights = bw;

  return Grid(std::move(data));
}

Grid Grid::finite_difference(int n, Bc bc) {
  if (n < 8) throw InvalidInput("grid: node count must be >= 8");
  auto data = std::make_shared<Data>();
  data->n = n;
  data->bc = bc;
  data->kind = GridKind::FiniteDifference;

  const int N = n - 1;
  const double h = 2.0 / N;
  RVec x(n);
  for (int j = 0; j <= N; ++j) x(j) = double(N - 2 * j) / N;
  data->nodes = x;

  // Descending nodes: x_{j-1} = x_j + h.
  RMat d1 = RMat::Zero(n, n);
  for (int j = 1; j < N; ++j) {
    d1(j, j - 1) = 1.0 / (2.0 * h);
    d1(j, j + 1) = -1.0 / (2.0 * h);
  }
  d1(0, 0) = 3.0 / (2.0 * h);
  d1(0, 1) = -4.0 / (2.0 * h);
  d1(0, 2) = 1.0 / (2.0 * h);
  d1(N, N) = -3.0 / (2.0 * h);
  d1(N, N - 1) = 4.0 / (2.0 * h);
  d1(N, N - 2) = -1.0 / (2.0 * h);
  data->d1 = 0.5 * (d1 - reflected(d1));

  RMat d2 = RMat::Zero(n, n);
  for (int j = 1; j < N; ++j) {
    d2(j, j - 1) = 1.0 / (h * h);
    d2(j, j) = -2.0 / (h * h);
    d2(j, j + 1) = 1.0 / (h * h);
  }
  const double hh = h * h;
  d2(0, 0) = 2.0 / hh;
  d2(0, 1) = -5.0 / hh;
  d2(0, 2) = 4.0 / hh;
  d2(0, 3) = -1.0 / hh;
  d2(N, N) = 2.0 / hh;
  d2(N, N - 1) = -5.0 / hh;
  d2(N, N - 2) = 4.0 / hh;
  d2(N, N - 3) = -1.0 / hh;
  data->d2 = 0.5 * (d2 + reflected(d2));

  RVec w = RVec::Constant(n, h);
  w(0) = w(N) = h / 2.0;
  data->qweights = w;

  // Cumulative trapezoid from x_0 = 1, shifted to vanish at x = 0.
  RMat q = RMat::Zero(n, n);
  for (int j = 1; j <= N; ++j) {
    q.row(j) = q.row(j - 1);
    q(j, j - 1) += -h / 2.0;  // integrating downhill: dx = -h
    q(j, j) += -h / 2.0;
  }
  // Row for the value at 0 (0 is a node iff N is even).
  Eigen::RowVectorXd at0;
  if (N % 2 == 0) {
    at0 = q.row(N / 2);
  } else {
    at0 = 0.5 * (q.row(N / 2) + q.row(N / 2 + 1));
  }
  q -= RVec::Ones(n) * at0;
  data->antideriv0 = 0.5 * (q - reflected(q));

  data->barweights = RVec();
  return Grid(std::move(data));
}

Grid::Grid(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

int Grid::n() const { return d_->n; }
Bc Grid::bc() const { return d_->bc; }
GridKind Grid::kind() const { return d_->kind; }
const RVec& Grid::nodes() const { return d_->nodes; }
const RMat& Grid::d1() const { return d_->d1; }
const RMat& Grid::d2() const { return d_->d2; }
const RVec& Grid::qweights() const { return d_->qweights; }
const RMat& Grid::antideriv0() const { return d_->antideriv0; }

Vec Grid::derivative(const Vec& g) const {
  check_size(g, d_->n, "derivative");
  return d_->d1 * g;
}

Complex Grid::quadrature(const Vec& g) const {
  check_size(g, d_->n, "quadrature");
  Complex acc = 0.0;
  for (int j = 0; j < d_->n; ++j) acc += d_->qweights(j) * g(j);
  return acc;
}

Vec Grid::antiderivative_from_zero(const Vec& g) const {
  check_size(g, d_->n, "antiderivative_from_zero");
  return d_->antideriv0 * g;
}

Complex Grid::interpolate_at(const Vec& g, double x) const {
  check_size(g, d_->n, "interpolate_at");
  if (!(std::abs(x) <= 1.0 + 1e-14))
    throw OutOfDomain("interpolate_at: x = " + std::to_string(x) +
                      " is outside [-1,1]");
  const RVec& nodes = d_->nodes;
  const int n = d_->n;
  if (d_->kind == GridKind::FiniteDifference) {
    // Piecewise-linear, consistent with the second-order stencils.
    if (x >= nodes(0)) return g(0);
    if (x <= nodes(n - 1)) return g(n - 1);
    int j = int((nodes(0) - x) / (2.0 / (n - 1)));
    j = std::min(std::max(j, 0), n - 2);
    while (j > 0 && x > nodes(j)) --j;
    while (j < n - 2 && x < nodes(j + 1)) ++j;
    const double s = (nodes(j) - x) / (nodes(j) - nodes(j + 1));
    return (1.0 - s) * g(j) + s * g(j + 1);
  }
  Complex num = 0.0;
  double den = 0.0;
  for (int j = 0; j < n; ++j) {
    const double dx = x - nodes(j);
    if (std::abs(dx) < 1e-14) return g(j);
    const double t = d_->barweights(j) / dx;
    num += t * g(j);
    den += t;
  }
  return num / den;
}

double Grid::norm_l2(const Vec& g) const {
  check_size(g, d_->n, "norm_l2");
  double acc = 0.0;
  for (int j = 0; j < d_->n; ++j) acc += d_->qweights(j) * std::norm(g(j));
  return std::sqrt(std::max(acc, 0.0));
}

double Grid::norm_h1(const Vec& g) const {
  check_size(g, d_->n, "norm_h1");
  const Vec gx = d_->d1 * g;
  double acc = 0.0;
  for (int j = 0; j < d_->n; ++j)
    acc += d_->qweights(j) * (std::norm(g(j)) + std::norm(gx(j)));
  return std::sqrt(std::max(acc, 0.0));
}

Vec Grid::reflect_conjugate(const Vec& g) const {
  check_size(g, d_->n, "reflect_conjugate");
  return g.reverse().conjugate();
}

}  // namespace glwire
