#include <cmath>

#include "doctest.h"
#include "glwire/grid.hpp"

using namespace glwire;

namespace {

Vec sample(const Grid& g, double (*f)(double)) {
  Vec v(g.n());
  for (int j = 0; j < g.n(); ++j) v(j) = f(g.nodes()(j));
  return v;
}

}  // namespace

TEST_CASE("chebyshev nodes and ordering") {
  Grid g = Grid::chebyshev(8, Bc::Dirichlet);
  CHECK(g.nodes()(0) == 1.0);
  CHECK(g.nodes()(7) == -1.0);
  for (int j = 0; j < 8; ++j)
    CHECK(g.nodes()(j) == doctest::Approx(std::cos(j * kPi / 7)).epsilon(1e-15));
  // exact antisymmetry
  for (int j = 0; j < 8; ++j) CHECK(g.nodes()(j) == -g.nodes()(7 - j));
  CHECK_THROWS_AS(Grid::chebyshev(7, Bc::Dirichlet), InvalidInput);
}

TEST_CASE("differentiation is spectrally exact on polynomials") {
  Grid g = Grid::chebyshev(16, Bc::Dirichlet);
  const RVec& x = g.nodes();

  Vec one = Vec::Ones(16);
  CHECK((g.derivative(one)).cwiseAbs().maxCoeff() <= 1e-10);

  Vec xs = x.cast<Complex>();
  Vec dx = g.derivative(xs);
  for (int j = 0; j < 16; ++j) CHECK(std::abs(dx(j) - 1.0) <= 1e-8);

  Vec x3(16), want(16);
  for (int j = 0; j < 16; ++j) {
    x3(j) = x(j) * x(j) * x(j);
    want(j) = 3.0 * x(j) * x(j);
  }
  CHECK((g.derivative(x3) - want).cwiseAbs().maxCoeff() <= 1e-9);

  // d2 applied to x^2 is the constant 2 at interior nodes
  Vec x2(16);
  for (int j = 0; j < 16; ++j) x2(j) = x(j) * x(j);
  Vec d2x2 = g.d2() * x2;
  for (int j = 1; j < 15; ++j) CHECK(std::abs(d2x2(j) - 2.0) <= 1e-9);

  // every polynomial of degree <= n-2, spot checked at higher degree
  Grid g32 = Grid::chebyshev(32, Bc::Dirichlet);
  Vec p(32), dp(32);
  for (int j = 0; j < 32; ++j) {
    double t = g32.nodes()(j);
    p(j) = 1.0 + t * (0.5 + t * (-2.0 + t * (1.0 + t * (0.25 + t * 3.0))));
    dp(j) = 0.5 + t * (-4.0 + t * (3.0 + t * (1.0 + t * 15.0)));
  }
  CHECK((g32.derivative(p) - dp).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("quadrature") {
  Grid g = Grid::chebyshev(32, Bc::Dirichlet);

  CHECK(std::abs(g.quadrature(Vec::Ones(32)) - 2.0) <= 1e-12);

  Vec x2 = sample(g, [](double t) { return t * t; });
  CHECK(std::abs(g.quadrature(x2) - 2.0 / 3.0) <= 1e-12);

  // oracle: closed-form antiderivative of exp
  Vec ex = sample(g, [](double t) { return std::exp(t); });
  const double want = std::exp(1.0) - std::exp(-1.0);
  CHECK(std::abs(g.quadrature(ex) - want) <= 1e-12);

  // exact for sampled polynomials of degree <= n-1
  for (int deg : {5, 10, 21, 31}) {
    Vec p(32);
    for (int j = 0; j < 32; ++j) p(j) = std::pow(g.nodes()(j), deg) + 1.0;
    double exact = 2.0 + (deg % 2 == 0 ? 2.0 / (deg + 1) : 0.0);
    CHECK(std::abs(g.quadrature(p) - exact) <= 1e-10 * std::abs(exact));
  }
}

TEST_CASE("antiderivative from zero") {
  Grid g = Grid::chebyshev(32, Bc::Dirichlet);
  const RVec& x = g.nodes();

  Vec f1 = g.antiderivative_from_zero(Vec::Ones(32));
  for (int j = 0; j < 32; ++j) CHECK(std::abs(f1(j) - x(j)) <= 1e-12);

  Vec fx = g.antiderivative_from_zero(x.cast<Complex>().eval());
  for (int j = 0; j < 32; ++j)
    CHECK(std::abs(fx(j) - 0.5 * x(j) * x(j)) <= 1e-12);

  // oracle: closed form int_0^x cos(pi s) ds = sin(pi x)/pi
  Vec c = sample(g, [](double t) { return std::cos(kPi * t); });
  Vec fc = g.antiderivative_from_zero(c);
  for (int j = 0; j < 32; ++j)
    CHECK(std::abs(fc(j) - std::sin(kPi * x(j)) / kPi) <= 1e-10);

  // interpolant vanishes at 0
  CHECK(std::abs(g.interpolate_at(fc, 0.0)) <= 1e-10);

  // d1 recovers the input for smooth data
  Vec back = g.derivative(fc);
  CHECK((back - c).cwiseAbs().maxCoeff() <= 1e-8);

  // quadrature equals F(1) - F(-1)
  Vec ex = sample(g, [](double t) { return std::exp(std::sin(2.0 * t)); });
  Vec fe = g.antiderivative_from_zero(ex);
  CHECK(std::abs(g.quadrature(ex) - (fe(0) - fe(31))) <= 1e-10);
}

TEST_CASE("barycentric interpolation") {
  Grid g = Grid::chebyshev(48, Bc::Dirichlet);

  Vec x2 = sample(g, [](double t) { return t * t; });
  CHECK(std::abs(g.interpolate_at(x2, 0.5) - 0.25) <= 1e-13);

  // a node hits its own sample exactly
  Vec r = sample(g, [](double t) { return std::sin(3.0 * t) + t; });
  for (int j : {0, 5, 24, 47})
    CHECK(g.interpolate_at(r, g.nodes()(j)) == r(j));

  // oracle: closed form sin(0.9)
  Vec s3 = sample(g, [](double t) { return std::sin(3.0 * t); });
  CHECK(std::abs(g.interpolate_at(s3, 0.3) - std::sin(0.9)) <= 1e-10);

  CHECK_THROWS_AS(g.interpolate_at(s3, 1.5), OutOfDomain);
  CHECK_THROWS_AS(g.interpolate_at(s3, -1.0000001), OutOfDomain);
}

TEST_CASE("norms") {
  Grid g = Grid::chebyshev(32, Bc::Dirichlet);
  CHECK(g.norm_h1(Vec::Zero(32)) == 0.0);
  CHECK(g.norm_h1(Vec::Ones(32)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // oracle: int sin^2 = 1, int (pi cos)^2 = pi^2
  Vec s = sample(g, [](double t) { return std::sin(kPi * t); });
  CHECK(std::abs(g.norm_h1(s) - std::sqrt(1.0 + kPi * kPi)) <= 1e-8);
}

TEST_CASE("reflect conjugate") {
  Grid g = Grid::chebyshev(24, Bc::Dirichlet);
  Vec f(24);
  for (int j = 0; j < 24; ++j) {
    double t = g.nodes()(j);
    f(j) = Complex(std::cos(t), std::sin(2.0 * t));
  }
  Vec fd = g.reflect_conjugate(f);
  for (int j = 0; j < 24; ++j) {
    CHECK(fd(j) == std::conj(f(23 - j)));
  }
  // PT-symmetric input is a fixed point: cos even, sin odd -> f = f*(-x)
  CHECK((fd - f).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("size mismatch is rejected") {
  Grid g = Grid::chebyshev(16, Bc::Dirichlet);
  Vec bad = Vec::Zero(8);
  CHECK_THROWS_AS(g.quadrature(bad), InvalidInput);
  CHECK_THROWS_AS(g.derivative(bad), InvalidInput);
}

TEST_CASE("finite-difference grid behind the same contract") {
  Grid g = Grid::finite_difference(201, Bc::Dirichlet);
  CHECK(g.kind() == GridKind::FiniteDifference);
  CHECK(g.nodes()(0) == 1.0);
  CHECK(g.nodes()(200) == -1.0);
  for (int j = 0; j <= 200; ++j) CHECK(g.nodes()(j) == -g.nodes()(200 - j));

  CHECK((g.derivative(Vec::Ones(201))).cwiseAbs().maxCoeff() <= 1e-12);
  Vec x2 = sample(g, [](double t) { return t * t; });
  Vec dx2 = g.derivative(x2);
  for (int j = 0; j <= 200; ++j)
    CHECK(std::abs(dx2(j) - 2.0 * g.nodes()(j)) <= 1e-10);

  // second-order quadrature and antiderivative
  Vec ex = sample(g, [](double t) { return std::exp(t); });
  CHECK(std::abs(g.quadrature(ex) - (std::exp(1.0) - std::exp(-1.0))) <= 1e-4);
  Vec fe = g.antiderivative_from_zero(ex);
  for (int j : {0, 50, 100, 150, 200})
    CHECK(std::abs(fe(j) - (std::exp(g.nodes()(j)) - 1.0)) <= 1e-4);
}
