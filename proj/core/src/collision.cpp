#include "glwire/collision.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "glwire/spectral.hpp"

namespace glwire {

namespace {

constexpr double kImagTol = 1e-5;

// Bilinear (unconjugated) pairing: int f g dx.
Complex pair_bilinear(const Grid& grid, const Vec& f, const Vec& g) {
  return grid.quadrature(f.cwiseProduct(g));
}

// Re-refine the collision current inside a +-5e-4 window of the hint. The
// bisection predicate stays sharp down to |I - I_c| ~ 1e-10, where the pair
// splitting falls below the complexity tolerance.
double refine_collision(const Grid& grid, double hint, int ell) {
  const int k = 2 * ell;
  auto complex_pair = [&](double current) {
    auto ps = eigenpairs(grid, current, k);
    return std::abs(ps[k - 2].lambda.imag()) > kImagTol;
  };
  double lo = hint - 5e-4, hi = hint + 5e-4;
  if (complex_pair(lo) || !complex_pair(hi)) {
    auto ps = eigenpairs(grid, hint, k);
    double gap = std::abs(ps[k - 1].lambda - ps[k - 2].lambda);
    throw NotAtCollision(
        "jordan_mode: I = " + std::to_string(hint) +
        " is not at a collision (pair gap " + std::to_string(gap) + ")");
  }
  for (int it = 0; it < 45 && hi - lo > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    (complex_pair(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Jordan mode at an already-refined collision current.
std::pair<Complex, Vec> jordan_core(const Grid& grid, double I_star, int ell) {
  const int k = 2 * ell;
  auto ps = eigenpairs(grid, I_star, k);
  const Complex la = ps[k - 2].lambda, lb = ps[k - 1].lambda;
  if (std::abs(lb - la) > 1e-3)
    throw NotAtCollision("jordan_mode: pair gap " +
                         std::to_string(std::abs(lb - la)) +
                         " exceeds 1e-3 after refinement");
  const Complex lambda0 = 0.5 * (la + lb);

  // Null vector of M + lambda0 on the reduced interior operator. At the
  // defective point the smallest singular value is O(|I - I_c|) while the
  // next one is O(1), so the singular vector stays well conditioned where
  // the individual eigenvectors of the pair do not.
  ReducedOperator red = reduce_operator(grid, I_star, lambda0.real());
  Mat shifted = red.interior;
  for (int j = 0; j < shifted.rows(); ++j) shifted(j, j) += kI * lambda0.imag();
  Eigen::JacobiSVD<Mat> svd(shifted, Eigen::ComputeThinV);
  Vec ui = svd.matrixV().col(shifted.cols() - 1);

  const int n = grid.n();
  Vec u0(n);
  u0.segment(1, n - 2) = ui;
  Eigen::Vector2cd bnd = red.boundary * ui;
  u0(0) = bnd(0);
  u0(n - 1) = bnd(1);

  // Phase rotation onto the PT-symmetric representative (Re even, Im odd).
  Vec dag = grid.reflect_conjugate(u0);
  Complex c = u0.dot(dag) / u0.squaredNorm();  // dot conjugates its left side
  double theta = 0.5 * std::arg(c);
  u0 *= Complex(std::cos(theta), std::sin(theta));
  u0 = 0.5 * (u0 + grid.reflect_conjugate(u0)).eval();

  Complex at0 = grid.interpolate_at(u0, 0.0);
  if (std::abs(at0) < 1e-6 * u0.cwiseAbs().maxCoeff())
    throw NumericalFailure("jordan_mode: mode vanishes at x = 0; the "
                           "u0(0) = 1 normalization is unavailable");
  u0 /= at0.real();  // real for a PT-symmetric mode
  u0 = 0.5 * (u0 + grid.reflect_conjugate(u0)).eval();

  return {lambda0, u0};
}

}  // namespace

std::pair<Complex, Vec> jordan_mode(const Grid& grid, double I_c, int ell) {
  if (ell < 1) throw InvalidInput("jordan_mode: ell must be >= 1");
  return jordan_core(grid, refine_collision(grid, I_c, ell), ell);
}

Vec solve_constrained(const Grid& grid, const Mat& L, const Vec& rhs,
                      const Vec& u0) {
  const int n = grid.n();
  if (L.rows() != n || L.cols() != n)
    throw InvalidInput("solve_constrained: operator size mismatch");
  if (rhs.size() != n || u0.size() != n)
    throw InvalidInput("solve_constrained: vector size mismatch");

  const Complex viol = pair_bilinear(grid, rhs, u0);
  const double scale = grid.norm_l2(rhs);
  if (scale > 0 && std::abs(viol) > 1e-5 * scale)
    throw InconsistentRhs("solve_constrained: solvability violated, "
                          "|<rhs, u0>| = " + std::to_string(std::abs(viol)));

  // Bordered augmentation of the collocation system (boundary rows kept, so
  // both boundary conditions work). The border column u0* pairs nonzero
  // against the left kernel (int |u0|^2 != 0) where u0 itself pairs to zero
  // by PT-orthogonality; the constraint row imposes the Hermitian gauge
  // <y, u0> = 0, i.e. the minimum-norm representative.
  Mat aug = Mat::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = L;
  for (int j = 1; j < n - 1; ++j) aug(j, n) = std::conj(u0(j));
  for (int j = 0; j < n; ++j)
    aug(n, j) = grid.qweights()(j) * std::conj(u0(j));

  Vec b = Vec::Zero(n + 1);
  b.segment(1, n - 2) = rhs.segment(1, n - 2);

  Vec sol = aug.partialPivLu().solve(b);
  return sol.head(n);
}

CollisionExpansion expansion_coefficients(const Grid& grid, double I_c,
                                          int ell) {
  if (ell < 1) throw InvalidInput("expansion_coefficients: ell must be >= 1");
  const double I_star = refine_collision(grid, I_c, ell);
  auto [lambda0, u0] = jordan_core(grid, I_star, ell);

  CollisionExpansion ex;
  ex.I_c = I_star;
  ex.lambda0 = lambda0;
  ex.u0 = u0;

  const RVec& x = grid.nodes();
  Vec xu0 = x.cast<Complex>().cwiseProduct(u0);

  // a1 = -i int x u0^2; real under the PT normalization.
  ex.a1 = -kI * pair_bilinear(grid, xu0, u0);

  Mat L = assemble_operator(grid, I_star, 0.0);
  for (int j = 1; j < grid.n() - 1; ++j) L(j, j) += lambda0.real();

  ex.K = solve_constrained(grid, L, u0, u0);
  ex.K = 0.5 * (ex.K + grid.reflect_conjugate(ex.K)).eval();
  ex.b = pair_bilinear(grid, ex.K, u0);

  const Complex int_u0 = grid.quadrature(u0);
  ex.theta1 = ex.b / int_u0;
  ex.theta2 = ex.a1 / int_u0;

  Vec rhs_zeta = ex.K - ex.theta1 * Vec::Ones(grid.n());
  ex.zeta = solve_constrained(grid, L, rhs_zeta, u0);

  Vec rhs_w = -kI * xu0 - ex.theta2 * Vec::Ones(grid.n());
  ex.w = solve_constrained(grid, L, rhs_w, u0);

  ex.d1 = pair_bilinear(grid, ex.zeta, u0);
  ex.d2 = pair_bilinear(grid, ex.w, u0);
  ex.d3 = kI * pair_bilinear(grid, x.cast<Complex>().cwiseProduct(ex.K), u0);
  return ex;
}

std::pair<Complex, Complex> lambda_split(const CollisionExpansion& ex, double a,
                                         double eps) {
  if (eps <= 0) throw InvalidInput("lambda_split: eps must be positive");
  if (std::abs(eps * a) > 0.5)
    throw InvalidInput("lambda_split: |eps a| must be <= 0.5");
  if (std::abs(ex.b) < 1e-10)
    throw DegenerateExpansion("lambda_split: b is numerically zero");

  const Complex l1 = std::sqrt(Complex(-a) * ex.a1 / ex.b);
  // lambda2 depends on lambda1 only through its square, so it is shared by
  // both branches; the combination (lambda1)^2 d1 + a (d2 - d3) is invariant
  // under the kernel gauge of K (shifts of d1 and d3 cancel through the
  // lambda1 relation).
  const Complex l2 = (l1 * l1 * ex.d1 + a * (ex.d2 - ex.d3)) / (2.0 * ex.b);
  const Complex base = ex.lambda0 + eps * l2;
  const Complex corr = std::sqrt(eps) * l1;
  return {base + corr, base - corr};
}

}  // namespace glwire
