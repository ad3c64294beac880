#ifndef PATHLEN_OPTIMIZERS_HPP
#define PATHLEN_OPTIMIZERS_HPP

#include "pathlen/objectives.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace pathlen {

enum class TrajectoryKind { discrete, continuous };

enum class StopReason {
  norm_below,
  coords_below,
  grad_below,
  stationary,  // gradient exactly zero: the iteration is at a fixed point
  max_steps,
  horizon,
  cap,
};

std::string_view to_string(StopReason r);

/// Termination criteria; the first one that fires ends the run. The safety
/// cap always applies.
struct StopRule {
  std::optional<double> norm_below;                // ‖x‖ ≤ ε
  std::optional<double> coords_below_except_last;  // max_{i<d} |xᵢ| < ε
  std::optional<double> grad_below;                // ‖∇f(x)‖ ≤ ε
  std::optional<std::size_t> max_steps;
  std::optional<double> horizon;  // flows only
  std::size_t cap = 100'000'000;  // discrete steps; flows use ode_cap
  std::size_t ode_cap = 1'000'000;
  std::size_t record_every = 1;   // thinning; the path-length accumulator is exact regardless
  bool dense_output = true;       // keep interpolation data for flows
  /// Called with (k, x_k, ∇f(x_k)) at every iterate, recorded or not.
  std::function<void(std::size_t, const Vector&, const Vector&)> on_iterate;

  static StopRule norm(double eps) { StopRule r; r.norm_below = eps; return r; }
  static StopRule coords_except_last(double eps) { StopRule r; r.coords_below_except_last = eps; return r; }
  static StopRule grad(double eps) { StopRule r; r.grad_below = eps; return r; }
  static StopRule steps(std::size_t n) { StopRule r; r.max_steps = n; return r; }
  static StopRule until(double t) { StopRule r; r.horizon = t; return r; }
};

/// Dormand–Prince continuous extension on one accepted step [t0, t0 + h].
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<Vector, 5> coeffs;
  double error_norm = 0.0;  // scaled local error estimate of the step (≤ 1 when accepted)

  Vector evaluate(double t) const;
};

struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::discrete;
  std::vector<double> times;  // iterate index (discrete) or time (continuous)
  std::vector<Vector> points;
  double step_size = 0.0;     // η, discrete only
  StopReason stop = StopReason::cap;
  std::size_t steps = 0;      // updates taken (discrete) or accepted steps (continuous)
  std::size_t evaluations = 0;
  double path_length = 0.0;   // Σ‖x_{k+1} − x_k‖ over every step, thinned or not
  double arc_length = 0.0;    // continuous: integral of ‖∇f‖ carried as an ODE state
  std::vector<DenseSegment> segments;

  const Vector& initial() const { return points.front(); }
  const Vector& final() const { return points.back(); }
  std::size_t size() const { return points.size(); }

  /// Dense-output evaluation for continuous trajectories.
  Vector at(double t) const;
};

/// x_{k+1} = x_k − η∇f(x_k).
Trajectory gd_run(const Objective& obj, const Vector& x0, double eta, const StopRule& stop);

/// Closed-form flow x_t = Π + V·(α ∘ e^{−tσ}).
Vector gf_quadratic(const QuadraticSpec& spec, double t);

/// Integrates ẋ = −∇f(x), ṡ = ‖∇f(x)‖ with an adaptive Dormand–Prince 5(4)
/// pair. `tol` is the target accuracy of the whole trajectory; each step is
/// held to a mixed absolute/relative error of tol/10.
Trajectory gf_integrate(const Objective& obj, const Vector& x0, double tol, const StopRule& stop);

/// x⁺ = x − α∇f(x) + β(x − x⁻), x⁻ initialised to x₀.
Trajectory heavy_ball_run(const Objective& obj, const Vector& x0, double alpha, double beta,
                          const StopRule& stop);

struct HeavyBallParams {
  double alpha;
  double beta;
};
HeavyBallParams hb_params(double mu, double L);

using Projector = std::function<Vector(const Vector&)>;

/// x_{k+1} = Π_Ω(x_k − η∇f(x_k)).
Trajectory pgd_run(const Objective& obj, const Projector& projector, const Vector& x0, double eta,
                   const StopRule& stop);

Projector box_projector(std::vector<Interval> box);

/// Iterate bound beyond which a run is treated as divergent.
inline constexpr double kDivergenceNorm = 1e12;

}  // namespace pathlen

#endif  // PATHLEN_OPTIMIZERS_HPP
