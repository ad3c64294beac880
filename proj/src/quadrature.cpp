#include "pathlen/quadrature.hpp"

#include "pathlen/types.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace pathlen {
namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes xgk[1], xgk[3], xgk[5] and the centre.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece rule(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double s = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) throw NumericalError("quadrature: non-finite integrand");
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult gauss_kronrod(const std::function<double(double)>& f,
                               const std::vector<double>& breakpoints, double abs_tol,
                               std::size_t max_intervals) {
  if (!(abs_tol > 0)) throw InputError("quadrature: abs_tol must be positive");
  if (breakpoints.size() < 2) throw InputError("quadrature: need at least two breakpoints");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw InputError("quadrature: breakpoints must be strictly increasing");

  std::priority_queue<Piece> heap;
  QuadratureResult res;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    heap.push(rule(f, breakpoints[i - 1], breakpoints[i]));
    res.evaluations += 15;
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto resum = [&heap](double& total, double& err, double& magnitude) {
    total = err = magnitude = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      total += copy.top().value;
      magnitude += std::abs(copy.top().value);
      err += copy.top().error;
      copy.pop();
    }
  };
  auto finish = [&](double total, double err) {
    res.value = total;
    res.error = err;
    res.intervals = heap.size();
    return res;
  };

  double total, err, magnitude;
  resum(total, err, magnitude);
  for (;;) {
    if (err <= abs_tol || err <= 50.0 * eps * magnitude) {
      // the running sums drift; confirm against a fresh summation
      resum(total, err, magnitude);
      if (err <= abs_tol || err <= 50.0 * eps * magnitude) return finish(total, err);
    }
    if (heap.size() >= max_intervals)
      throw NumericalError("quadrature: no convergence within " + std::to_string(max_intervals) +
                           " subintervals (error estimate " + std::to_string(err) + ")");

    const Piece worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      resum(total, err, magnitude);
      return finish(total, err);
    }
    heap.pop();
    const Piece left = rule(f, worst.a, mid);
    const Piece right = rule(f, mid, worst.b);
    heap.push(left);
    heap.push(right);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    magnitude += std::abs(left.value) + std::abs(right.value) - std::abs(worst.value);
    err += left.error + right.error - worst.error;
  }
}

}  // namespace pathlen
