#ifndef PATHLEN_TYPES_HPP
#define PATHLEN_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace pathlen {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Bad arguments or malformed input. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that could not complete: non-finite iterates, divergence,
// step-size underflow, quadrature non-convergence.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A checked mathematical invariant did not hold. The CLI maps this to exit code 1.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pathlen

#endif  // PATHLEN_TYPES_HPP
