#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace glwire {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Bad caller input: wrong sizes, out-of-range arguments, invalid brackets.
/// Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutOfDomain : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class BracketInvalid : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NotAtCollision : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InconsistentRhs : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InvalidRegime : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DegenerateNormalization : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Numerical breakdown: eigensolver non-convergence, insufficient domain
/// truncation, degenerate expansions. Maps to CLI exit code 3.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationInsufficient : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class ReturnFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class DegenerateExpansion : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace glwire
