#ifndef PATHLEN_QUADRATURE_HPP
#define PATHLEN_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace pathlen {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

/// Globally adaptive 7/15-point Gauss–Kronrod quadrature. Integrates over the
/// union of consecutive `breakpoints` (strictly increasing, at least two),
/// always bisecting the interval with the largest error estimate until the
/// total estimate falls below `abs_tol` or the rounding floor.
///
/// Throws NumericalError when `max_intervals` is exceeded.
QuadratureResult gauss_kronrod(const std::function<double(double)>& f,
                               const std::vector<double>& breakpoints, double abs_tol,
                               std::size_t max_intervals = 50'000);

}  // namespace pathlen

#endif  // PATHLEN_QUADRATURE_HPP
