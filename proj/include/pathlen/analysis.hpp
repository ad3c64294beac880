#ifndef PATHLEN_ANALYSIS_HPP
#define PATHLEN_ANALYSIS_HPP

#include "pathlen/objectives.hpp"
#include "pathlen/optimizers.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace pathlen {

struct PathLengthReport {
  double zeta_raw = 0.0;  // summed (or integrated) path before any tail correction
  double tail = 0.0;      // dist(x_final, X*) added at truncation
  double zeta = 0.0;      // zeta_raw + tail
  double dist0 = 0.0;     // dist(x₀, X*); the chord ‖x₀ − x_final‖ when X* is unknown
  bool dist0_is_chord = false;
  double ratio = 0.0;     // zeta / dist0 (NaN when dist0 = 0)
  std::optional<StopReason> stop;
  std::size_t steps = 0;
  std::size_t evaluations = 0;
  double error_budget = 0.0;  // quadrature/ODE error plus analytic tail bounds
};

/// Discrete trajectory from raw iterates; the path-length accumulator is filled in.
Trajectory trajectory_from_points(std::vector<Vector> points);

/// ζ_η from the exact accumulator; adds dist(x_final, X*) when X* is given.
PathLengthReport path_length_discrete(const Trajectory& traj,
                                      const std::optional<OptimalSet>& optset = std::nullopt);

/// ζ from the integrated arc-length state of a gf_integrate trajectory.
PathLengthReport path_length_flow(const Trajectory& traj,
                                  const std::optional<OptimalSet>& optset = std::nullopt);

/// ζ = ∫₀^∞ ‖V diag(σ) (α ∘ e^{−tσ})‖ dt by adaptive Gauss–Kronrod on [0, T],
/// with T chosen so the analytic tail Σ|αᵢ|e^{−σ_min T} is below abs_tol.
PathLengthReport path_length_quadratic_gf(const QuadraticSpec& spec, double abs_tol = 1e-12);

struct SelfContractedVerdict {
  bool holds = true;
  std::optional<std::array<std::size_t, 3>> witness;  // (s₁, s₂, s₃)
  double far = 0.0;    // ‖g(s₃) − g(s₂)‖ at the witness
  double near = 0.0;   // ‖g(s₃) − g(s₁)‖ at the witness
  double slack = 0.0;  // min over s₁ < s₂ < s₃ of ‖g(s₃)−g(s₁)‖ − ‖g(s₃)−g(s₂)‖ (∞ for n < 3)
};

inline constexpr std::size_t kSelfContractedMaxPoints = 2000;

/// Exact check of ‖g(s₃) − g(s₂)‖ ≤ ‖g(s₃) − g(s₁)‖ over every ordered triple.
/// For each s₃ the running minimum over s₁ < s₂ makes this O(n²) while
/// remaining equivalent to full enumeration.
SelfContractedVerdict self_contracted_check(const std::vector<Vector>& points,
                                            double tol = 1e-12);

enum class MuMode { min, paper_max };
std::string_view to_string(MuMode m);
MuMode parse_mu_mode(std::string_view s);

/// Aggregate of ‖∇f(x_k)‖² / (2(f(x_k) − f*)) over the recorded iterates.
double effective_pkl_mu(const Trajectory& traj, const Objective& obj, MuMode mode = MuMode::min);

/// max_k ‖∇f(x_{k+1}) − ∇f(x_k)‖ / ‖x_{k+1} − x_k‖ over consecutive recorded iterates.
double effective_lipschitz(const Trajectory& traj, const Objective& obj);

struct LinearConvergenceFit {
  double A = 1.0;
  double c = 0.0;
};

/// Tightest single-rate envelope dist_k ≤ A(1−c)^k dist_0 for the given
/// distances at the given step indices (unit spacing when `steps` is empty).
LinearConvergenceFit linear_convergence_fit(const std::vector<double>& dist,
                                            const std::vector<double>& steps = {});
LinearConvergenceFit linear_convergence_fit(const Trajectory& traj, const OptimalSet& optset);

/// Coordinates never cross their optimal interval and approach it monotonically.
bool separable_no_overshoot_check(const Trajectory& traj, const std::vector<Interval>& optset,
                                  double tol = 1e-12);

}  // namespace pathlen

#endif  // PATHLEN_ANALYSIS_HPP
