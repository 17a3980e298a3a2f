#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace su4ent {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using SparseC = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Which of the two collective degrees of freedom (J: internal, K: momentum).
enum class Dof { J, K };

/// Exact half-integer stored as twice its value.
struct HalfInt {
  int twice = 0;

  static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
  constexpr double value() const { return 0.5 * twice; }
  constexpr bool is_integer() const { return twice % 2 == 0; }
  friend constexpr bool operator==(HalfInt, HalfInt) = default;
  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integrator failure, non-convergence, or a spectrum that is not a state.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal invariant broken (e.g. Gram-Schmidt breakdown in the pyramid).
class LogicError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Exponential-cost reference asked for more particles than it allows.
class OracleCapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace su4ent
