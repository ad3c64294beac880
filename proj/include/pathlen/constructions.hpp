#ifndef PATHLEN_CONSTRUCTIONS_HPP
#define PATHLEN_CONSTRUCTIONS_HPP

#include "pathlen/analysis.hpp"
#include "pathlen/bounds.hpp"
#include "pathlen/objectives.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace pathlen {

/// Scalar building block g of the PKL lower-bound objective f(x) = Σ g(xᵢ).
///
///   g(x) = 0                               x ≤ 0
///        = x²                              0 ≤ x ≤ ½
///        = ½ − (1 − x)²                    ½ ≤ x ≤ 1 − δ
///        = (½ − δ²) + 2δ(x − (1 − δ))      1 − δ ≤ x ≤ γ
///        = α + βx²                         x ≥ γ
struct PklConstruction {
  int d = 0;
  double delta = 0, gamma = 0, beta = 0, alpha = 0;

  static PklConstruction make(int d);

  double g(double x) const;
  double dg(double x) const;
  double lipschitz() const { return 2.0; }
  double mu() const { return 2.0 / (3.0 * d * static_cast<double>(d)); }
  double kappa() const { return lipschitz() / mu(); }
  std::array<double, 4> breakpoints() const { return {0.0, 0.5, 1.0 - delta, gamma}; }
  ScalarPiece piece() const;
};

struct GdPklInit {
  double eta = 0;
  int k1 = 0;
  Vector x0;
};

struct PklInstance {
  PklConstruction construction;
  Objective objective;
  Vector x0;
  std::optional<GdPklInit> gd;  // set by build_pkl_gd_instance
};

/// GF instance in dimension d. With `target_kappa` below 3d², only the first
/// d′ = ⌊√(target/3)⌋ ≥ 6 coordinates carry the construction (the rest start
/// at the optimum) so the declared κ = 3d′² does not exceed the target.
PklInstance build_pkl_gf_instance(int d, std::optional<double> target_kappa = std::nullopt);

/// GD instance: smallest k₁ with η = ((d/2)^{1/k₁} − 1)/2 ∈ [¼, ½].
PklInstance build_pkl_gd_instance(int d, std::optional<double> target_kappa = std::nullopt);

struct QuadLowerConstruction {
  int d = 0;
  double omega = 0;
  Vector a;  // a_i = ω^{d−i}, descending
  Vector x0;
  double log_kappa = 0;
  double delta_gf = 0.07;
  double delta_gd = 0.049787068367863944;  // e⁻³

  double kappa() const { return std::exp(log_kappa); }
  double dist0() const { return x0.norm(); }
  double gd_step() const { return 1.0 / (2.0 * a(0)); }
  /// t_i = ln(1/δ)/a_i.
  std::vector<double> gf_checkpoints() const;
  /// k_i = a₁ ln(1/δ)/a_i.
  std::vector<double> gd_checkpoints() const;
  QuadraticSpec spec() const;
};

QuadLowerConstruction build_quad_lower(int d, double omega);

/// a₁ = 1, a_d = 1/κ, interior aᵢ ~ Unif(1/κ, 1); x₀ ~ Unif(0,1)^d rescaled to ‖x₀‖ = √d.
QuadraticSpec build_quad_random(int d, double kappa, std::uint64_t seed);

/// (A, c) = (1, 1/(4d ln d)) for GF, (1, 1/(16d ln d)) for GD.
LinearConvergenceFit construction_linconv_constants(int d, Flow which);

}  // namespace pathlen

#endif  // PATHLEN_CONSTRUCTIONS_HPP
