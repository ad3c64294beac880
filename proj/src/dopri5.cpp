// Dormand–Prince 5(4) with the 4th-order continuous extension and the PI
// step-size controller of Hairer, Nørsett & Wanner (DOPRI5).

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pathlen {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kSafe = 0.9;
constexpr double kBeta = 0.04;
// Per-step error target as a fraction of the requested global tolerance.
constexpr double kLocalFraction = 0.1;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kFacMax = 5.0;   // 1/fac1, fac1 = 0.2
constexpr double kFacMin = 0.1;   // 1/fac2, fac2 = 10

class AugmentedFlow {
 public:
  explicit AugmentedFlow(const Objective& obj) : obj_(obj), d_(obj.dimension()) {}

  // y = (x, s);  ẏ = (−∇f(x), ‖∇f(x)‖)
  Vector operator()(const Vector& y) {
    ++evaluations;
    const Vector g = obj_.gradient(y.head(d_));
    if (!g.allFinite()) throw NumericalError("non-finite gradient during flow integration");
    Vector dy(d_ + 1);
    dy.head(d_) = -g;
    dy(d_) = g.norm();
    return dy;
  }

  std::size_t evaluations = 0;

 private:
  const Objective& obj_;
  Eigen::Index d_;
};

double scaled_rms(const Vector& e, const Vector& y0, const Vector& y1, double tol) {
  const Vector sk = (tol + tol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).matrix();
  return std::sqrt((e.array() / sk.array()).square().mean());
}

double initial_step(AugmentedFlow& rhs, const Vector& y0, const Vector& f0, double tol) {
  const Vector sk = (tol + tol * y0.cwiseAbs().array()).matrix();
  const double dnf = std::sqrt((f0.array() / sk.array()).square().mean());
  const double dny = std::sqrt((y0.array() / sk.array()).square().mean());
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
  const Vector y1 = y0 + h * f0;
  const Vector f1 = rhs(y1);
  const double der2 = std::sqrt(((f1 - f0).array() / sk.array()).square().mean()) / h;
  const double der12 = std::max(der2, dnf);
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min(100.0 * h, h1);
}

}  // namespace

Trajectory gf_integrate(const Objective& obj, const Vector& x0, double tol, const StopRule& stop) {
  if (!(tol > 0)) throw InputError("gf_integrate: tolerance must be positive");
  if (x0.size() != obj.dimension()) throw InputError("x0 dimension does not match the objective");
  if (!x0.allFinite()) throw InputError("x0 must be finite");
  if (stop.record_every == 0) throw InputError("record_every must be >= 1");
  if (stop.horizon && !(*stop.horizon >= 0)) throw InputError("gf_integrate: horizon must be >= 0");

  const Eigen::Index d = x0.size();
  AugmentedFlow rhs(obj);
  Trajectory traj;
  traj.kind = TrajectoryKind::continuous;

  Vector y(d + 1);
  y.head(d) = x0;
  y(d) = 0.0;
  Vector k1 = rhs(y);
  double t = 0.0;
  traj.times.push_back(t);
  traj.points.push_back(x0);

  auto finish = [&](StopReason reason, bool recorded) {
    traj.stop = reason;
    if (!recorded) {
      traj.times.push_back(t);
      traj.points.push_back(y.head(d));
    }
    traj.arc_length = y(d);
    traj.evaluations = rhs.evaluations;
    return traj;
  };

  if (auto r = detail::check_stop(stop, x0, -k1.head(d), 0)) return finish(*r, true);
  if (stop.horizon && *stop.horizon == 0.0) return finish(StopReason::horizon, true);

  const double local_tol = kLocalFraction * tol;
  double h = initial_step(rhs, y, k1, local_tol);
  double facold = 1e-4;
  bool last_rejected = false;
  bool recorded = true;

  for (;;) {
    if (traj.steps >= stop.ode_cap) return finish(StopReason::cap, recorded);
    bool hits_horizon = false;
    if (stop.horizon && t + h >= *stop.horizon) {
      h = *stop.horizon - t;
      hits_horizon = true;
    }
    if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "gf_integrate: step size underflow at t = " << t;
      throw NumericalError(os.str());
    }

    const Vector k2 = rhs(y + h * a21 * k1);
    const Vector k3 = rhs(y + h * (a31 * k1 + a32 * k2));
    const Vector k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 = rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vector y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Vector k7 = rhs(y_new);
    const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double errn = scaled_rms(err, y, y_new, local_tol);
    (void)c2, (void)c3, (void)c4, (void)c5;  // autonomous system: stage times unused

    const double fac11 = std::pow(std::max(errn, 1e-300), kExpo1);
    if (errn <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafe, kFacMin, kFacMax);
      double h_new = h / fac;
      facold = std::max(errn, 1e-4);

      if (stop.dense_output) {
        DenseSegment seg;
        seg.t0 = t;
        seg.h = h;
        seg.error_norm = errn;
        const Vector ydiff = (y_new - y).head(d);
        const Vector bspl = h * k1.head(d) - ydiff;
        seg.coeffs[0] = y.head(d);
        seg.coeffs[1] = ydiff;
        seg.coeffs[2] = bspl;
        seg.coeffs[3] = ydiff - h * k7.head(d) - bspl;
        seg.coeffs[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7).head(d);
        traj.segments.push_back(std::move(seg));
      }

      traj.path_length += (y_new - y).head(d).norm();
      t = hits_horizon ? *stop.horizon : t + h;
      y = y_new;
      k1 = k7;
      ++traj.steps;
      if (!y.allFinite() || y.head(d).norm() > kDivergenceNorm)
        throw NumericalError("gf_integrate: divergence at t = " + std::to_string(t));

      recorded = (traj.steps % stop.record_every == 0);
      if (recorded) {
        traj.times.push_back(t);
        traj.points.push_back(y.head(d));
      }
      if (auto r = detail::check_stop(stop, y.head(d), -k1.head(d), traj.steps))
        return finish(*r, recorded);
      if (hits_horizon) return finish(StopReason::horizon, recorded);

      if (last_rejected) h_new = std::min(h_new, h);
      last_rejected = false;
      h = h_new;
    } else {
      h = h / std::min(kFacMax, fac11 / kSafe);
      last_rejected = true;
    }
  }
}

}  // namespace pathlen
