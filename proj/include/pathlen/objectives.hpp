#ifndef PATHLEN_OBJECTIVES_HPP
#define PATHLEN_OBJECTIVES_HPP

#include "pathlen/types.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pathlen {

/// Closed interval on the extended real line.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  double project(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Minimizer set of an objective.
///
/// Three shapes cover everything the library builds: a single point, an
/// affine subspace (the solution set of a rank-deficient least squares
/// problem), and a product of per-coordinate intervals (separable objectives).
class OptimalSet {
 public:
  struct Point {
    Vector x;
  };
  /// {x : basisᵀ(x − anchor) = 0}; `basis` has orthonormal columns.
  struct Affine {
    Vector anchor;
    Matrix basis;
  };
  struct Box {
    std::vector<Interval> intervals;
  };

  static OptimalSet point(Vector x);
  static OptimalSet affine(Vector anchor, Matrix orthonormal_basis);
  static OptimalSet box(std::vector<Interval> intervals);

  Eigen::Index dimension() const;
  Vector project(const Vector& x) const;
  double distance(const Vector& x) const { return (x - project(x)).norm(); }

  bool is_point() const { return std::holds_alternative<Point>(shape_); }
  bool is_box() const { return std::holds_alternative<Box>(shape_); }
  const Box& as_box() const { return std::get<Box>(shape_); }

 private:
  explicit OptimalSet(std::variant<Point, Affine, Box> shape) : shape_(std::move(shape)) {}
  std::variant<Point, Affine, Box> shape_;
};

/// Declared smoothness/curvature constants. Builders fill in what they can
/// prove; user-supplied objectives may leave everything empty.
struct ObjectiveMetadata {
  std::optional<double> lipschitz;  // L
  std::optional<double> pkl_mu;     // μ
  std::optional<double> min_value;  // f*
  /// Region on which `lipschitz` was computed, when it is only valid locally.
  std::optional<std::vector<Interval>> lipschitz_region;

  std::optional<double> condition_number() const {
    if (lipschitz && pkl_mu) return *lipschitz / *pkl_mu;
    return std::nullopt;
  }
};

/// One-dimensional building block for separable objectives.
struct ScalarPiece {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::optional<Interval> minimizers;
  std::optional<double> min_value;

  /// c·x².
  static ScalarPiece square(double c);
  /// q·x² + c·x⁴.
  static ScalarPiece quartic(double q, double c);
};

/// An evaluatable objective with gradient and optional metadata. Evaluation
/// is pure, so one instance may be shared across threads.
class Objective {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  Objective(std::string name, Eigen::Index dimension, ValueFn value, GradientFn gradient,
            ObjectiveMetadata metadata = {}, std::optional<OptimalSet> optimal_set = std::nullopt);

  const std::string& name() const { return name_; }
  Eigen::Index dimension() const { return dimension_; }
  double value(const Vector& x) const { return value_(x); }
  Vector gradient(const Vector& x) const { return gradient_(x); }

  const ObjectiveMetadata& metadata() const { return metadata_; }
  const std::optional<OptimalSet>& optimal_set() const { return optimal_set_; }
  bool separable() const { return separable_; }

  Objective& set_separable(bool s) {
    separable_ = s;
    return *this;
  }
  Objective& set_metadata(ObjectiveMetadata m) {
    metadata_ = std::move(m);
    return *this;
  }

  /// True when `x` lies inside the region on which L was declared (always
  /// true when L is global).
  bool within_lipschitz_region(const Vector& x) const;

 private:
  std::string name_;
  Eigen::Index dimension_;
  ValueFn value_;
  GradientFn gradient_;
  ObjectiveMetadata metadata_;
  std::optional<OptimalSet> optimal_set_;
  bool separable_ = false;
};

/// f(x) = Σᵢ gᵢ(xᵢ).
Objective build_separable(std::vector<ScalarPiece> pieces, std::string name = "separable");

/// f(x) = Σᵢ (i·xᵢ² + c·xᵢ⁴) with μ = 2 and L = (2 + 12·c·B²)·d declared on [−B, B]^d.
Objective build_fsep_quartic(int d, double quartic_coeff, double box_halfwidth);

/// Convex quadratic in eigen form.
///
/// f(x) = f* + ½ (x − p)ᵀ V diag(σ) Vᵀ (x − p), where the columns of V span
/// the range of the Hessian, σ₁ ≥ … ≥ σ_{d⁺} > 0 and p = Π_{X*}(x₀). The
/// component of x₀ orthogonal to range(V) never moves under GD/GF, so every
/// trajectory is described by the eigen-coordinates α = Vᵀ(x₀ − p).
class QuadraticSpec {
 public:
  /// Σ = AᵀA/n for f(x) = ‖y − Ax‖²/(2n). Eigenvalues below rtol·σ_max are dropped.
  static QuadraticSpec from_data(const Matrix& A, const Vector& y, const Vector& x0,
                                 double rtol = 1e-10);
  /// Diagonal Hessian (any order, entries ≥ 0) with minimizer `x_star`.
  static QuadraticSpec from_diagonal(const Vector& hessian_diag, const Vector& x0,
                                     const Vector& x_star);
  /// Canonical basis, p = 0, x₀ = α.
  static QuadraticSpec from_eigen(const Vector& spectrum, const Vector& alpha);

  Eigen::Index dimension() const { return x0_.size(); }
  Eigen::Index rank() const { return spectrum_.size(); }
  const Vector& spectrum() const { return spectrum_; }
  const Matrix& basis() const { return basis_; }
  const Vector& alpha() const { return alpha_; }
  const Vector& x0() const { return x0_; }
  const Vector& projection() const { return projection_; }
  double min_value() const { return min_value_; }

  double dist0() const { return alpha_.norm(); }
  double condition_number() const { return spectrum_(0) / spectrum_(rank() - 1); }
  /// κⱼ = σⱼ/σⱼ₊₁, j = 1 … d⁺−1.
  Vector ratios() const;

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  /// Evaluation through the original (A, y); only for specs built from data.
  std::optional<double> value_matrix_form(const Vector& x) const;
  std::optional<Vector> gradient_matrix_form(const Vector& x) const;

  Vector eigen_coordinates(const Vector& x) const;
  /// Point with eigen-coordinates z and the same null-space component as x₀.
  Vector from_eigen_coordinates(const Vector& z) const;

  OptimalSet optimal_set() const;
  Objective objective(std::string name = "quadratic") const;

 private:
  QuadraticSpec() = default;
  void finish();

  Vector spectrum_;
  Matrix basis_;
  Vector projection_;
  Vector x0_;
  Vector alpha_;
  double min_value_ = 0.0;
  std::optional<Vector> diagonal_hessian_;  // fast path for from_diagonal/from_eigen
  std::optional<Matrix> design_;
  std::optional<Vector> response_;
};

}  // namespace pathlen

#endif  // PATHLEN_OBJECTIVES_HPP
