#include <cmath>
#include <iostream>

#include "doctest.h"
#include "glwire/bifurcation.hpp"

using namespace glwire;

namespace {

const Grid& grid128() {
  static Grid g = Grid::chebyshev(128, Bc::Dirichlet);
  return g;
}

}  // namespace

TEST_CASE("coefficients on the stationary side (I=7, I=11)") {
  BifCoeffs c7 = chi_coefficients(grid128(), 7.0);
  std::cout << "I=7: beta=" << c7.beta << " gamma11=" << c7.gamma11
            << " c1111=" << c7.c1111 << " chi11=" << c7.chi11 << "\n";
  CHECK(std::abs(c7.beta - 0.785) <= 0.01);
  CHECK(std::abs(c7.gamma11 - 0.652) <= 0.01);
  CHECK(std::abs(c7.c1111 - 0.375) <= 0.01);
  CHECK(std::abs(c7.chi11 - (-0.592)) <= 0.01);
  CHECK(std::abs(c7.chi11.imag()) <= 1e-6);  // real below the collision

  BifCoeffs c11 = chi_coefficients(grid128(), 11.0);
  std::cout << "I=11: beta=" << c11.beta << " gamma11=" << c11.gamma11
            << " c1111=" << c11.c1111 << " chi11=" << c11.chi11 << "\n";
  CHECK(std::abs(c11.chi11 - 0.03) <= 0.01);
  CHECK(std::abs(c11.beta - 0.403) <= 0.01);
  CHECK(std::abs(c11.gamma11 - 0.449) <= 0.01);
  CHECK(std::abs(c11.c1111 - 0.924) <= 0.01);

  // identities hold by construction
  CHECK(std::abs(c7.chi_hat - (c7.chi12 - c7.chi11)) == 0.0);
  CHECK(std::abs(c7.chi_tilde + c7.chi11 + c7.chi12) <= 1e-15);
  CHECK(std::abs(c7.chi11 + 0.5 * (c7.chi_tilde + c7.chi_hat)) <= 1e-15);
}

TEST_CASE("coefficients on the periodic side (I=20)") {
  BifCoeffs c = chi_coefficients(grid128(), 20.0);
  std::cout << "I=20: lambda1=" << c.lambda1 << " chi11=" << c.chi11
            << " chi12=" << c.chi12 << "\n     chi_hat=" << c.chi_hat
            << " chi_tilde=" << c.chi_tilde << " omega=" << c.omega
            << " amp=" << 1.0 / std::sqrt(c.chi_tilde.real()) << "\n";

  CHECK(c.lambda1.real() == doctest::Approx(8.64).epsilon(0.004));
  CHECK(c.lambda1.imag() == doctest::Approx(5.25).epsilon(0.006));
  CHECK(1.0 / std::sqrt(c.chi_tilde.real()) == doctest::Approx(0.92).epsilon(0.033));
  CHECK(c.omega == doctest::Approx(-1.81).epsilon(0.028));

  // sign structure used throughout the periodic analysis
  CHECK(c.chi_hat.real() > 0.0);
  CHECK(c.chi_tilde.real() > 0.0);
  CHECK(c.chi11.real() < 0.0);
}

TEST_CASE("sign structure over the scan range") {
  for (double current : {13.0, 15.0, 20.0, 25.0}) {
    BifCoeffs c = chi_coefficients(grid128(), current);
    CHECK(c.chi_hat.real() > 0.0);
    CHECK(c.chi_tilde.real() > 0.0);
  }
}

TEST_CASE("normalization invariance of chi") {
  const Grid& g = grid128();
  auto ps = eigenpairs(g, 20.0, 2);
  const EigenPair& top = ps[0].lambda.imag() > 0 ? ps[0] : ps[1];
  Vec u2 = g.reflect_conjugate(top.u);
  BifCoeffs base = chi_from_modes(g, 20.0, top.lambda, top.u, u2);

  // Every term of chi scales as c^2 |c|^2 / c^2 = |c|^2 under u1 -> c u1,
  // so phase rotations leave chi unchanged and a general rescale obeys the
  // exact |c|^2 law; both are consistency checks of the integral code.
  for (Complex scale : {Complex(2.0, 0.0), Complex(0.0, 1.0), Complex(1.0, 1.0)}) {
    Vec su1 = scale * top.u;
    Vec su2 = g.reflect_conjugate(su1);
    BifCoeffs scaled = chi_from_modes(g, 20.0, top.lambda, su1, su2);
    const double s2 = std::norm(scale);
    CHECK(std::abs(scaled.chi11 - s2 * base.chi11) <= 1e-9 * s2);
    CHECK(std::abs(scaled.chi12 - s2 * base.chi12) <= 1e-9 * s2);
  }
}

TEST_CASE("continuity of chi11 on the stationary range") {
  double prev = chi_coefficients(grid128(), 5.0).chi11.real();
  for (double current = 5.1; current <= 10.55; current += 0.1) {
    double now = chi_coefficients(grid128(), current).chi11.real();
    CHECK(std::abs(now - prev) < 0.05);
    prev = now;
  }
}

TEST_CASE("I_k location") {
  double ik = find_Ik(grid128(), 9.0, 12.0);
  std::cout << "I_k = " << ik << "\n";
  CHECK(std::abs(ik - 10.93) <= 0.05);

  CHECK(chi_coefficients(grid128(), ik - 1.0).chi11.real() < 0.0);
  CHECK(chi_coefficients(grid128(), ik + 0.5).chi11.real() > 0.0);

  // resolution oracle: n=256 result within 1e-3
  Grid g256 = Grid::chebyshev(256, Bc::Dirichlet);
  double ik256 = find_Ik(g256, 9.0, 12.0);
  CHECK(std::abs(ik - ik256) <= 1e-3);

  CHECK_THROWS_AS(find_Ik(grid128(), 5.0, 7.0), BracketInvalid);
}

TEST_CASE("branch predictions") {
  SUBCASE("supercritical stationary at I=7") {
    BifCoeffs c = chi_coefficients(grid128(), 7.0);
    BranchPrediction p = predict_branch(c, 0.01);
    CHECK(p.regime == Regime::NtoS_stable);
    CHECK(p.stable);
    CHECK(p.amplitude == doctest::Approx(std::sqrt(0.01 / 0.592)).epsilon(0.02));
    CHECK(p.frequency == 0.0);
    CHECK(std::isinf(p.period));
    CHECK_THROWS_AS(predict_branch(c, -0.01), InvalidRegime);
  }

  SUBCASE("subcritical stationary at I=11.5") {
    BifCoeffs c = chi_coefficients(grid128(), 11.5);
    REQUIRE(c.chi11.real() > 0.0);
    BranchPrediction p = predict_branch(c, -0.01);
    CHECK(p.regime == Regime::NtoS_unstable);
    CHECK_FALSE(p.stable);
    CHECK(p.amplitude == doctest::Approx(std::sqrt(0.01 / c.chi11.real())));
    CHECK_THROWS_AS(predict_branch(c, +0.01), InvalidRegime);
  }

  SUBCASE("periodic at I=20") {
    BifCoeffs c = chi_coefficients(grid128(), 20.0);
    BranchPrediction p = predict_branch(c, 0.01);
    CHECK(p.regime == Regime::NtoP_stable);
    CHECK(p.stable);
    CHECK(p.amplitude == doctest::Approx(0.92 * std::sqrt(0.01)).epsilon(0.033));
    CHECK(p.frequency == doctest::Approx(5.25 - 0.0181).epsilon(0.006));
    CHECK(p.period == doctest::Approx(2.0 * kPi / p.frequency));
    CHECK_THROWS_AS(predict_branch(c, -0.01), InvalidRegime);
  }

  SUBCASE("amplitude vanishes with eps") {
    BifCoeffs c = chi_coefficients(grid128(), 7.0);
    BranchPrediction p1 = predict_branch(c, 1e-6);
    BranchPrediction p2 = predict_branch(c, 4e-6);
    CHECK(p1.amplitude < 2e-3);
    CHECK(p2.amplitude == doctest::Approx(2.0 * p1.amplitude).epsilon(1e-12));
  }
}

TEST_CASE("unstable periodic prediction at I=20") {
  BifCoeffs c = chi_coefficients(grid128(), 20.0);
  const double eps = 0.01;
  BranchPrediction p = unstable_periodic_prediction(c, eps);
  CHECK_FALSE(p.stable);
  CHECK(p.amplitude ==
        doctest::Approx(std::sqrt(eps) / (2.0 * std::sqrt(-c.chi11.real()))));

  // R^2 = 2 |beta1|^2 equals the saddle ordinate eps / (2 |Re chi11|)
  double r_squared = 2.0 * p.amplitude * p.amplitude;
  CHECK(r_squared == doctest::Approx(eps / (2.0 * std::abs(c.chi11.real()))));

  BifCoeffs stationary = chi_coefficients(grid128(), 7.0);
  CHECK_THROWS_AS(unstable_periodic_prediction(stationary, eps), InvalidRegime);
}

TEST_CASE("near-collision exclusion") {
  // within ~1e-3 of I_c the self-PT-orthogonality kills beta
  CHECK_THROWS_AS(chi_coefficients(grid128(), 12.3125), DegenerateNormalization);
}
