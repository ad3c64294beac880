#include "pathlen/analysis.hpp"

#include "pathlen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pathlen {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void finish_report(PathLengthReport& r, const Vector& x0, const Vector& xf,
                   const std::optional<OptimalSet>& optset) {
  if (optset) {
    r.tail = optset->distance(xf);
    r.dist0 = optset->distance(x0);
  } else {
    r.dist0 = (x0 - xf).norm();
    r.dist0_is_chord = true;
  }
  r.zeta = r.zeta_raw + r.tail;
  r.ratio = r.dist0 > 0 ? r.zeta / r.dist0 : kNaN;
}

}  // namespace

Trajectory trajectory_from_points(std::vector<Vector> points) {
  if (points.empty()) throw InputError("trajectory needs at least one point");
  Trajectory t;
  t.kind = TrajectoryKind::discrete;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].size() != points[0].size()) throw InputError("points differ in dimension");
    if (k > 0) t.path_length += (points[k] - points[k - 1]).norm();
    t.times.push_back(static_cast<double>(k));
  }
  t.steps = points.size() - 1;
  t.points = std::move(points);
  t.stop = StopReason::max_steps;
  return t;
}

PathLengthReport path_length_discrete(const Trajectory& traj,
                                      const std::optional<OptimalSet>& optset) {
  if (traj.points.empty()) throw InputError("path_length_discrete: empty trajectory");
  if (traj.kind != TrajectoryKind::discrete)
    throw InputError("path_length_discrete: trajectory is continuous");
  PathLengthReport r;
  r.zeta_raw = traj.path_length;
  r.stop = traj.stop;
  r.steps = traj.steps;
  r.evaluations = traj.evaluations;
  finish_report(r, traj.initial(), traj.final(), optset);
  return r;
}

PathLengthReport path_length_flow(const Trajectory& traj, const std::optional<OptimalSet>& optset) {
  if (traj.points.empty()) throw InputError("path_length_flow: empty trajectory");
  if (traj.kind != TrajectoryKind::continuous)
    throw InputError("path_length_flow: trajectory is discrete");
  PathLengthReport r;
  r.zeta_raw = traj.arc_length;
  r.stop = traj.stop;
  r.steps = traj.steps;
  r.evaluations = traj.evaluations;
  // chord sum and integrated arc length bracket the integrator error
  r.error_budget = std::abs(traj.arc_length - traj.path_length);
  finish_report(r, traj.initial(), traj.final(), optset);
  return r;
}

PathLengthReport path_length_quadratic_gf(const QuadraticSpec& spec, double abs_tol) {
  if (!(abs_tol > 0)) throw InputError("path_length_quadratic_gf: abs_tol must be positive");
  const Vector& sigma = spec.spectrum();
  const Vector& alpha = spec.alpha();
  const Vector weight = sigma.cwiseProduct(alpha);
  const double l1 = alpha.cwiseAbs().sum();
  const double s_min = sigma.minCoeff();
  const double s_max = sigma.maxCoeff();

  PathLengthReport r;
  r.dist0 = alpha.norm();
  r.stop = StopReason::horizon;
  if (l1 <= abs_tol) {
    r.error_budget = l1;
    r.ratio = r.dist0 > 0 ? 0.0 : kNaN;
    return r;
  }

  const double T = std::log(l1 / abs_tol) / s_min;
  std::vector<double> grid{0.0};
  for (double t = 0.125 / s_max; t < T; t *= 2.0) grid.push_back(t);
  grid.push_back(T);

  auto integrand = [&](double t) {
    return (weight.array() * (-t * sigma.array()).exp()).matrix().stableNorm();
  };
  const QuadratureResult q = gauss_kronrod(integrand, grid, abs_tol);

  r.zeta_raw = q.value;
  r.zeta = q.value;
  r.evaluations = q.evaluations;
  r.steps = q.intervals;
  r.error_budget = q.error + (alpha.array().abs() * (-T * sigma.array()).exp()).sum();
  r.ratio = r.zeta / r.dist0;
  return r;
}

SelfContractedVerdict self_contracted_check(const std::vector<Vector>& points, double tol) {
  const std::size_t n = points.size();
  if (n > kSelfContractedMaxPoints)
    throw InputError("self_contracted_check: " + std::to_string(n) + " points exceeds the limit of " +
                     std::to_string(kSelfContractedMaxPoints));
  SelfContractedVerdict v;
  v.slack = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n);
  for (std::size_t s3 = 2; s3 < n; ++s3) {
    for (std::size_t s = 0; s <= s3; ++s) dist[s] = (points[s3] - points[s]).norm();
    std::size_t argmin = 0;
    for (std::size_t s2 = 1; s2 < s3; ++s2) {
      const double near = dist[argmin];
      const double gap = near - dist[s2];
      if (-gap > tol * std::max(1.0, near)) {
        v.holds = false;
        v.witness = {argmin, s2, s3};
        v.far = dist[s2];
        v.near = near;
        v.slack = gap;
        return v;
      }
      v.slack = std::min(v.slack, gap);
      if (dist[s2] < dist[argmin]) argmin = s2;
    }
  }
  return v;
}

std::string_view to_string(MuMode m) { return m == MuMode::min ? "min" : "paper_max"; }

MuMode parse_mu_mode(std::string_view s) {
  if (s == "min") return MuMode::min;
  if (s == "paper_max") return MuMode::paper_max;
  throw InputError("unknown mu mode '" + std::string(s) + "' (expected min or paper_max)");
}

double effective_pkl_mu(const Trajectory& traj, const Objective& obj, MuMode mode) {
  const auto& fstar = obj.metadata().min_value;
  if (!fstar) throw InputError("effective_pkl_mu: objective does not declare f*");
  bool any = false;
  double agg = mode == MuMode::min ? std::numeric_limits<double>::infinity() : 0.0;
  for (const Vector& x : traj.points) {
    const double gap = obj.value(x) - *fstar;
    if (!(gap > 1e-300)) continue;
    const double ratio = obj.gradient(x).squaredNorm() / (2.0 * gap);
    agg = mode == MuMode::min ? std::min(agg, ratio) : std::max(agg, ratio);
    any = true;
  }
  if (!any) throw NumericalError("effective_pkl_mu: ratio undefined (every iterate is optimal)");
  return agg;
}

double effective_lipschitz(const Trajectory& traj, const Objective& obj) {
  double best = -1.0;
  for (std::size_t k = 0; k + 1 < traj.points.size(); ++k) {
    const double dx = (traj.points[k + 1] - traj.points[k]).norm();
    if (dx < 1e-14) continue;
    const double dg = (obj.gradient(traj.points[k + 1]) - obj.gradient(traj.points[k])).norm();
    best = std::max(best, dg / dx);
  }
  if (best < 0) throw NumericalError("effective_lipschitz: no pair of distinct iterates");
  return best;
}

LinearConvergenceFit linear_convergence_fit(const std::vector<double>& dist,
                                            const std::vector<double>& steps) {
  if (dist.empty()) throw InputError("linear_convergence_fit: empty distance sequence");
  if (!steps.empty() && steps.size() != dist.size())
    throw InputError("linear_convergence_fit: steps and distances differ in length");
  auto step = [&](std::size_t k) { return steps.empty() ? static_cast<double>(k) : steps[k]; };
  if (dist[0] == 0.0) return {1.0, 1.0};

  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < dist.size(); ++k) {
    if (dist[k] == 0.0) {
      if (dist[k + 1] > 0.0) throw NumericalError("linear_convergence_fit: no linear envelope");
      continue;
    }
    const double span = step(k + 1) - step(k);
    worst = std::max(worst, std::pow(dist[k + 1] / dist[k], 1.0 / span));
  }
  if (worst >= 1.0) throw NumericalError("linear_convergence_fit: no linear envelope");

  LinearConvergenceFit fit;
  fit.c = 1.0 - worst;
  for (std::size_t k = 1; k < dist.size(); ++k) {
    if (dist[k] == 0.0) continue;
    fit.A = std::max(fit.A, dist[k] / (std::pow(worst, step(k) - step(0)) * dist[0]));
  }
  return fit;
}

LinearConvergenceFit linear_convergence_fit(const Trajectory& traj, const OptimalSet& optset) {
  std::vector<double> dist;
  dist.reserve(traj.points.size());
  for (const Vector& x : traj.points) dist.push_back(optset.distance(x));
  return linear_convergence_fit(dist, traj.times);
}

bool separable_no_overshoot_check(const Trajectory& traj, const std::vector<Interval>& optset,
                                  double tol) {
  if (traj.points.empty()) return true;
  const auto d = traj.points.front().size();
  if (static_cast<std::size_t>(d) != optset.size())
    throw InputError("separable_no_overshoot_check: dimension mismatch");
  for (Eigen::Index j = 0; j < d; ++j) {
    const Interval& I = optset[static_cast<std::size_t>(j)];
    double prev = traj.points.front()(j) - I.project(traj.points.front()(j));
    for (std::size_t k = 1; k < traj.points.size(); ++k) {
      const double x = traj.points[k](j);
      const double off = x - I.project(x);
      const double slack = tol * (1.0 + std::abs(prev));
      if ((prev > slack && off < -slack) || (prev < -slack && off > slack)) return false;
      if (std::abs(off) > std::abs(prev) + slack) return false;
      prev = off;
    }
  }
  return true;
}

}  // namespace pathlen
