#pragma once

#include <memory>

#include "glwire/types.hpp"

namespace glwire {

enum class Bc { Dirichlet, Neumann };
enum class GridKind { Chebyshev, FiniteDifference };

/// Collocation grid on [-1,1] with dense differentiation operators,
/// quadrature weights, an antiderivative-from-zero operator, barycentric
/// interpolation and Sobolev norms.
///
/// Node ordering is descending: x[0] = 1, x[n-1] = -1, and the node set is
/// exactly antisymmetric (x[n-1-j] == -x[j] in floating point), so reversal
/// plus conjugation implements u -> u*(-x) without interpolation error.
/// The boundary-condition tag is carried here and consumed by operator
/// assembly; it does not affect nodes, weights or differentiation.
///
/// All data is immutable after construction; copies share storage and the
/// type is safe to use from concurrent workers.
class Grid {
 public:
  /// Chebyshev-Gauss-Lobatto nodes cos(j*pi/(n-1)) with spectral
  /// differentiation matrices and Clenshaw-Curtis weights. Requires n >= 8.
  static Grid chebyshev(int n, Bc bc);

  /// Uniform grid with second-order finite differences and trapezoid
  /// weights. Provided behind the same contract as a cross-check oracle.
  static Grid finite_difference(int n, Bc bc);

  int n() const;
  Bc bc() const;
  GridKind kind() const;

  const RVec& nodes() const;
  const RMat& d1() const;
  const RMat& d2() const;
  const RVec& qweights() const;
  /// Matrix Q with (Q g)(x_j) = integral of the interpolant of g from 0 to
  /// x_j. The interpolant of Q g vanishes at x = 0 (0 is generically not a
  /// node).
  const RMat& antideriv0() const;

  Vec derivative(const Vec& g) const;
  Complex quadrature(const Vec& g) const;
  Vec antiderivative_from_zero(const Vec& g) const;

  /// Barycentric interpolation of the samples g at |x| <= 1.
  Complex interpolate_at(const Vec& g, double x) const;

  double norm_l2(const Vec& g) const;
  /// sqrt( int |g|^2 + int |g'|^2 ) with g' = d1 * g.
  double norm_h1(const Vec& g) const;

  /// u -> u*(-x); exact on the antisymmetric node set.
  Vec reflect_conjugate(const Vec& g) const;

 private:
  struct Data;
  explicit Grid(std::shared_ptr<const Data> d);
  std::shared_ptr<const Data> d_;
};

}  // namespace glwire
