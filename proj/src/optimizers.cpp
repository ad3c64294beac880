#include "pathlen/optimizers.hpp"

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pathlen {

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::norm_below: return "norm_below";
    case StopReason::coords_below: return "coords_below";
    case StopReason::grad_below: return "grad_below";
    case StopReason::stationary: return "stationary";
    case StopReason::max_steps: return "max_steps";
    case StopReason::horizon: return "horizon";
    case StopReason::cap: return "cap";
  }
  return "unknown";
}

Vector DenseSegment::evaluate(double t) const {
  const double s = (t - t0) / h;
  const double s1 = 1.0 - s;
  return coeffs[0] + s * (coeffs[1] + s1 * (coeffs[2] + s * (coeffs[3] + s1 * coeffs[4])));
}

Vector Trajectory::at(double t) const {
  if (kind != TrajectoryKind::continuous) throw InputError("dense output needs a continuous trajectory");
  if (segments.empty()) throw InputError("trajectory was recorded without dense output");
  if (t < segments.front().t0 || t > segments.back().t0 + segments.back().h)
    throw InputError("dense output requested outside the integrated interval");
  auto it = std::upper_bound(segments.begin(), segments.end(), t,
                             [](double v, const DenseSegment& s) { return v < s.t0; });
  if (it != segments.begin()) --it;
  return it->evaluate(t);
}

namespace detail {

std::optional<StopReason> check_stop(const StopRule& stop, const Vector& x, const Vector& g,
                                     std::size_t k, bool at_rest) {
  if (stop.norm_below && x.norm() <= *stop.norm_below) return StopReason::norm_below;
  if (stop.coords_below_except_last) {
    const Eigen::Index d = x.size();
    const double m = d > 1 ? x.head(d - 1).cwiseAbs().maxCoeff() : 0.0;
    if (m < *stop.coords_below_except_last) return StopReason::coords_below;
  }
  if (stop.grad_below && g.norm() <= *stop.grad_below) return StopReason::grad_below;
  if (at_rest && g.isZero(0.0)) return StopReason::stationary;
  if (stop.max_steps && k >= *stop.max_steps) return StopReason::max_steps;
  return std::nullopt;
}

}  // namespace detail

namespace {

void validate(const Objective& obj, const Vector& x0, const StopRule& stop) {
  if (x0.size() != obj.dimension()) throw InputError("x0 dimension does not match the objective");
  if (!x0.allFinite()) throw InputError("x0 must be finite");
  if (stop.record_every == 0) throw InputError("record_every must be >= 1");
}

Vector checked_gradient(const Objective& obj, const Vector& x, std::size_t k) {
  Vector g = obj.gradient(x);
  if (!g.allFinite())
    throw NumericalError("non-finite gradient at iterate " + std::to_string(k));
  return g;
}

// Shared driver for one-step-memory updates. `update(x, x_prev, g)` returns x_{k+1}.
template <class Update>
Trajectory run_discrete(const Objective& obj, const Vector& x0, double eta, const StopRule& stop,
                        Update update, bool momentum = false) {
  validate(obj, x0, stop);
  Trajectory traj;
  traj.kind = TrajectoryKind::discrete;
  traj.step_size = eta;

  Vector x = x0;
  Vector x_prev = x0;
  std::size_t k = 0;
  traj.times.push_back(0.0);
  traj.points.push_back(x);
  bool last_recorded = true;

  for (;;) {
    const Vector g = checked_gradient(obj, x, k);
    ++traj.evaluations;
    if (stop.on_iterate) stop.on_iterate(k, x, g);
    if (auto reason = detail::check_stop(stop, x, g, k, !momentum || x == x_prev)) {
      traj.stop = *reason;
      break;
    }
    if (k >= stop.cap) {
      traj.stop = StopReason::cap;
      break;
    }
    Vector next = update(x, x_prev, g);
    // Exact fixed point; runs with an explicit step budget still take every step.
    if (!stop.max_steps && next == x && (!momentum || x == x_prev)) {
      traj.stop = StopReason::stationary;
      break;
    }
    if (!next.allFinite())
      throw NumericalError("non-finite iterate at index " + std::to_string(k + 1));
    if (next.norm() > kDivergenceNorm)
      throw NumericalError("divergence: ||x|| exceeded 1e12 at iterate " + std::to_string(k + 1));
    traj.path_length += (next - x).norm();
    x_prev = std::move(x);
    x = std::move(next);
    ++k;
    last_recorded = (k % stop.record_every == 0);
    if (last_recorded) {
      traj.times.push_back(static_cast<double>(k));
      traj.points.push_back(x);
    }
  }
  if (!last_recorded) {
    traj.times.push_back(static_cast<double>(k));
    traj.points.push_back(x);
  }
  traj.steps = k;
  return traj;
}

}  // namespace

Trajectory gd_run(const Objective& obj, const Vector& x0, double eta, const StopRule& stop) {
  if (!(eta > 0)) throw InputError("gd_run: step size must be positive");
  return run_discrete(obj, x0, eta, stop,
                      [eta](const Vector& x, const Vector&, const Vector& g) -> Vector {
                        return x - eta * g;
                      });
}

Vector gf_quadratic(const QuadraticSpec& spec, double t) {
  if (!(t >= 0)) throw InputError("gf_quadratic: time must be >= 0");
  if (t == 0.0) return spec.x0();
  const Vector z = spec.alpha().cwiseProduct((-t * spec.spectrum()).array().exp().matrix());
  return spec.from_eigen_coordinates(z);
}

Trajectory heavy_ball_run(const Objective& obj, const Vector& x0, double alpha, double beta,
                          const StopRule& stop) {
  if (!(alpha > 0)) throw InputError("heavy_ball_run: alpha must be positive");
  if (!(beta >= 0 && beta < 1)) throw InputError("heavy_ball_run: beta must lie in [0, 1)");
  return run_discrete(obj, x0, alpha, stop,
                      [alpha, beta](const Vector& x, const Vector& x_prev, const Vector& g) -> Vector {
                        Vector next = x - alpha * g;
                        if (beta != 0.0) next += beta * (x - x_prev);
                        return next;
                      },
                      beta != 0.0);
}

HeavyBallParams hb_params(double mu, double L) {
  if (!(mu > 0) || !(L > 0)) throw InputError("hb_params: mu and L must be positive");
  if (mu > L) throw InputError("hb_params: mu must not exceed L");
  const double sl = std::sqrt(L);
  const double sm = std::sqrt(mu);
  const double q = (sl - sm) / (sl + sm);
  return {4.0 / ((sl + sm) * (sl + sm)), q * q};
}

Trajectory pgd_run(const Objective& obj, const Projector& projector, const Vector& x0, double eta,
                   const StopRule& stop) {
  if (!(eta > 0)) throw InputError("pgd_run: step size must be positive");
  if (!projector) throw InputError("pgd_run: projector is empty");
  const auto tol = [](const Vector& z) { return 1e-12 * (1.0 + z.norm()); };
  if ((projector(x0) - x0).norm() > tol(x0)) throw InputError("pgd_run: x0 is not in the constraint set");

  std::size_t k = 0;
  return run_discrete(obj, x0, eta, stop,
                      [&, eta](const Vector& x, const Vector&, const Vector& g) -> Vector {
                        const Vector y = projector(x - eta * g);
                        // Idempotence spot check on every step.
                        if ((projector(y) - y).norm() > tol(y))
                          throw InputError("pgd_run: projector is not idempotent (step " +
                                           std::to_string(k) + ")");
                        ++k;
                        return y;
                      });
}

Projector box_projector(std::vector<Interval> box) {
  for (const auto& iv : box)
    if (!(iv.lo <= iv.hi)) throw InputError("box projector: empty interval");
  return [box = std::move(box)](const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != box.size()) throw InputError("box projector: dimension mismatch");
    Vector p(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) p(i) = box[static_cast<std::size_t>(i)].project(x(i));
    return p;
  };
}

}  // namespace pathlen
