#include <cmath>
#include <iostream>

#include "doctest.h"
#include "glwire/collision.hpp"
#include "glwire/spectral.hpp"

using namespace glwire;

namespace {

const Grid& dirichlet_grid() {
  static Grid g = Grid::chebyshev(128, Bc::Dirichlet);
  return g;
}

double collision_current() {
  static double ic = find_collision(dirichlet_grid(), 1, 10.0, 14.0);
  return ic;
}

Complex bilinear(const Grid& g, const Vec& a, const Vec& b) {
  return g.quadrature(a.cwiseProduct(b));
}

// Hermitian pairing <f, g> = int conj(f) g under the grid quadrature.
Complex hermitian(const Grid& g, const Vec& f, const Vec& h) {
  return g.quadrature(f.conjugate().cwiseProduct(h));
}

}  // namespace

TEST_CASE("jordan mode at the first Dirichlet collision") {
  const Grid& g = dirichlet_grid();
  auto [lambda0, u0] = jordan_mode(g, collision_current());

  CHECK(std::abs(lambda0.imag()) <= 1e-5);
  CHECK(lambda0.real() > 0.0);

  // self PT-orthogonality at the collision
  CHECK(std::abs(bilinear(g, u0, u0)) <= 1e-5);

  // PT normalization: u0(-x)* = u0(x), u0(0) = 1
  CHECK((g.reflect_conjugate(u0) - u0).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(std::abs(g.interpolate_at(u0, 0.0) - 1.0) <= 1e-10);

  // off-collision input is rejected
  CHECK_THROWS_AS(jordan_mode(g, 10.0), NotAtCollision);
}

TEST_CASE("constrained solve") {
  const Grid& g = dirichlet_grid();
  const double ic = collision_current();
  auto [lambda0, u0] = jordan_mode(g, ic);

  Mat L = assemble_operator(g, ic, 0.0);
  for (int j = 1; j < g.n() - 1; ++j) L(j, j) += lambda0.real();

  SUBCASE("rhs = u0 gives the canonical K") {
    Vec K = solve_constrained(g, L, u0, u0);
    CHECK(std::abs(K(0)) <= 1e-9);
    CHECK(std::abs(K(g.n() - 1)) <= 1e-9);
    // residual after projecting out the border correction along u0*
    Vec r = L * K - u0;
    Complex mu = bilinear(g, u0, r) / hermitian(g, u0, u0);
    Vec r_proj = r - mu * u0.conjugate();
    CHECK(g.norm_l2(r_proj) <= 1e-6);
    CHECK(g.norm_l2(Vec(L * K - u0)) <= 1e-5);
    // PT symmetry of K
    CHECK((g.reflect_conjugate(K) - K).cwiseAbs().maxCoeff() <= 1e-6);
    // the imposed gauge: <K, u0> = 0
    CHECK(std::abs(hermitian(g, u0, K)) <= 1e-10);
  }

  SUBCASE("rhs = 0 gives the zero function") {
    Vec y = solve_constrained(g, L, Vec::Zero(g.n()), u0);
    CHECK(y.cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("manufactured solution is recovered") {
    // smooth PT-symmetric y0 with Dirichlet ends, gauged like the solver
    Vec y0(g.n());
    for (int j = 0; j < g.n(); ++j) {
      double x = g.nodes()(j);
      y0(j) = Complex((1 - x * x) * std::cos(x), 0.3 * x * (1 - x * x));
    }
    y0 -= (hermitian(g, u0, y0) / hermitian(g, u0, u0)) * u0;
    Vec rhs = L * y0;  // solvable: int (L y0) u0 = int y0 (L u0) ~ 0
    Vec y = solve_constrained(g, L, rhs, u0);
    CHECK((y - y0).cwiseAbs().maxCoeff() <= 1e-7 * y0.cwiseAbs().maxCoeff());
  }

  SUBCASE("inconsistent rhs is rejected") {
    // rhs = K has <K, u0> = b != 0
    Vec K = solve_constrained(g, L, u0, u0);
    CHECK_THROWS_AS(solve_constrained(g, L, K, u0), InconsistentRhs);
  }
}

TEST_CASE("expansion coefficients match the collision functionals") {
  const Grid& g = dirichlet_grid();
  CollisionExpansion ex = expansion_coefficients(g, collision_current());

  std::cout << "I_c=" << ex.I_c << " lambda0=" << ex.lambda0 << "\n"
            << "a1=" << ex.a1 << " b=" << ex.b << " a1/b=" << ex.a1 / ex.b
            << "\n"
            << "theta1=" << ex.theta1 << " theta2=" << ex.theta2 << "\n"
            << "d1=" << ex.d1 << " d2=" << ex.d2 << " d3=" << ex.d3 << "\n";

  CHECK(std::abs(ex.a1.imag()) <= 1e-6);
  CHECK(std::abs(ex.b.imag()) <= 1e-6);
  CHECK(std::abs(ex.a1.real() - 0.29) <= 0.02);
  CHECK(std::abs(ex.b.real() - 0.12) <= 0.02);
  CHECK(std::abs((ex.a1 / ex.b).real() - 2.42) <= 0.15);

  CHECK(std::abs(ex.d1.real() - (-0.014)) <= 0.005);
  CHECK(std::abs(ex.d2.real() - (-0.02)) <= 0.005);
  CHECK(std::abs(ex.d3.real() - (-0.02)) <= 0.005);

  // the two forms of the a1 functional agree
  Vec re = ex.u0.real().cast<Complex>();
  Vec im = ex.u0.imag().cast<Complex>();
  Vec x = g.nodes().cast<Complex>();
  Complex alt = 2.0 * g.quadrature(x.cwiseProduct(re).cwiseProduct(im));
  CHECK(std::abs(ex.a1 - alt) <= 1e-8);
}

TEST_CASE("lambda splitting against the dense eigensolver") {
  const Grid& g = dirichlet_grid();
  CollisionExpansion ex = expansion_coefficients(g, collision_current());

  SUBCASE("branch structure") {
    auto [lp, lm] = lambda_split(ex, 1.0, 1e-4);
    // a > 0: conjugate pair to leading order
    CHECK(lp.imag() > 0.0);
    CHECK(lm.imag() < 0.0);
    CHECK(std::abs(lp - std::conj(lm)) <= 1e-6);

    auto [rp, rm] = lambda_split(ex, -1.0, 1e-4);
    CHECK(std::abs(rp.imag()) <= 1e-9);
    CHECK(std::abs(rm.imag()) <= 1e-9);
    CHECK(rp.real() != rm.real());

    // (lambda1)^2 = -2.42 a within 0.15
    Complex l1sq = Complex(-1.0) * ex.a1 / ex.b;
    CHECK(std::abs(l1sq.real() - (-2.42)) <= 0.15);
  }

  SUBCASE("lambda2 is unique, real, and gauge independent") {
    auto l2_of = [&](const CollisionExpansion& e, double a) {
      auto [p, m] = lambda_split(e, a, 1e-3);
      Complex mean = 0.5 * (p + m);  // lambda1 cancels, leaves lambda0+eps l2
      return (mean - e.lambda0) / 1e-3;
    };
    Complex l2 = l2_of(ex, 1.0);
    CHECK(std::abs(l2.imag()) <= 1e-5);

    // alternate kernel gauge: K -> K + c u0 shifts d1, d3 but not lambda2
    CollisionExpansion alt = ex;
    const Complex c = 0.37;
    alt.K = ex.K + c * ex.u0;
    alt.d3 = ex.d3 - c * ex.a1;
    alt.d1 = ex.d1 + c * ex.b;
    Complex l2_alt = l2_of(alt, 1.0);
    CHECK(std::abs(l2 - l2_alt) <= 1e-9);
  }

  SUBCASE("splitting error is O(delta^(3/2))") {
    auto err_at = [&](double delta) {
      auto ps = eigenpairs(g, ex.I_c + delta, 2);
      auto [lp, lm] = lambda_split(ex, 1.0, delta);
      double e1 = std::abs(lp - ps[1].lambda) + std::abs(lm - ps[0].lambda);
      double e2 = std::abs(lp - ps[0].lambda) + std::abs(lm - ps[1].lambda);
      return 0.5 * std::min(e1, e2);
    };
    double e_small = err_at(0.02);
    double e_big = err_at(0.04);
    double ratio = e_big / e_small;
    std::cout << "split errors: e(0.02)=" << e_small << " e(0.04)=" << e_big
              << " ratio=" << ratio << " (2^1.5=" << std::pow(2.0, 1.5)
              << ")\n";
    CHECK(ratio >= std::pow(2.0, 1.5) / 1.6);
    CHECK(ratio <= std::pow(2.0, 1.5) * 1.6);
  }

  SUBCASE("one-sided differentiability of Re lambda1 at the collision") {
    // O(delta) from above, O(sqrt(delta)) from below
    auto re1 = [&](double current) {
      return eigenpairs(g, current, 1)[0].lambda.real();
    };
    const double base = re1(ex.I_c);
    auto slope_ratio = [&](double sign) {
      double d_big = std::abs(re1(ex.I_c + sign * 1e-2) - base);
      double d_small = std::abs(re1(ex.I_c + sign * 1e-3) - base);
      return d_big / d_small;
    };
    // O(delta): ratio ~ 10; O(sqrt(delta)): ratio ~ sqrt(10) ~ 3.2
    CHECK(slope_ratio(+1.0) > 6.0);
    CHECK(slope_ratio(-1.0) < 6.0);
  }

  SUBCASE("degenerate b is rejected") {
    CollisionExpansion bad = ex;
    bad.b = 0.0;
    CHECK_THROWS_AS(lambda_split(bad, 1.0, 0.01), DegenerateExpansion);
    CHECK_THROWS_AS(lambda_split(ex, 1.0, 0.6), InvalidInput);
  }
}

TEST_CASE("neumann collision expansion is well formed") {
  Grid g = Grid::chebyshev(128, Bc::Neumann);
  double ic = find_collision(g, 1, 1.0, 4.0);
  CollisionExpansion ex = expansion_coefficients(g, ic);
  CHECK(std::abs(ex.a1.imag()) <= 1e-6);
  CHECK(std::abs(ex.b.imag()) <= 1e-6);
  CHECK(std::abs(bilinear(g, ex.u0, ex.u0)) <= 1e-5);
  // a > 0 gives a conjugate pair here too
  auto [lp, lm] = lambda_split(ex, 1.0, 1e-3);
  CHECK(lp.imag() * lm.imag() < 0.0);
}
