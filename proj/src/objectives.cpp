#include "pathlen/objectives.hpp"

#include <cmath>
#include <memory>
#include <utility>

namespace pathlen {

OptimalSet OptimalSet::point(Vector x) { return OptimalSet(Point{std::move(x)}); }

OptimalSet OptimalSet::affine(Vector anchor, Matrix orthonormal_basis) {
  if (anchor.size() != orthonormal_basis.rows())
    throw InputError("affine optimal set: basis rows must match the anchor dimension");
  return OptimalSet(Affine{std::move(anchor), std::move(orthonormal_basis)});
}

OptimalSet OptimalSet::box(std::vector<Interval> intervals) {
  for (const auto& iv : intervals)
    if (!(iv.lo <= iv.hi)) throw InputError("box optimal set: empty interval");
  return OptimalSet(Box{std::move(intervals)});
}

Eigen::Index OptimalSet::dimension() const {
  return std::visit(
      [](const auto& s) -> Eigen::Index {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Point>) return s.x.size();
        else if constexpr (std::is_same_v<S, Affine>) return s.anchor.size();
        else return static_cast<Eigen::Index>(s.intervals.size());
      },
      shape_);
}

Vector OptimalSet::project(const Vector& x) const {
  if (x.size() != dimension()) throw InputError("projection: dimension mismatch");
  return std::visit(
      [&x](const auto& s) -> Vector {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Point>) {
          return s.x;
        } else if constexpr (std::is_same_v<S, Affine>) {
          return x - s.basis * (s.basis.transpose() * (x - s.anchor));
        } else {
          Vector p(x.size());
          for (Eigen::Index i = 0; i < x.size(); ++i)
            p(i) = s.intervals[static_cast<std::size_t>(i)].project(x(i));
          return p;
        }
      },
      shape_);
}

ScalarPiece ScalarPiece::square(double c) {
  if (!(c > 0)) throw InputError("square piece: curvature must be positive");
  return {[c](double x) { return c * x * x; }, [c](double x) { return 2.0 * c * x; },
          Interval{0.0, 0.0}, 0.0};
}

ScalarPiece ScalarPiece::quartic(double q, double c) {
  if (!(q > 0) || c < 0) throw InputError("quartic piece: need q > 0 and c >= 0");
  return {[q, c](double x) {
            const double x2 = x * x;
            return q * x2 + c * x2 * x2;
          },
          [q, c](double x) { return 2.0 * q * x + 4.0 * c * x * x * x; }, Interval{0.0, 0.0},
          0.0};
}

Objective::Objective(std::string name, Eigen::Index dimension, ValueFn value,
                     GradientFn gradient, ObjectiveMetadata metadata,
                     std::optional<OptimalSet> optimal_set)
    : name_(std::move(name)),
      dimension_(dimension),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      metadata_(std::move(metadata)),
      optimal_set_(std::move(optimal_set)) {
  if (dimension_ < 1) throw InputError("objective dimension must be positive");
  if (optimal_set_ && optimal_set_->dimension() != dimension_)
    throw InputError("objective: optimal set dimension mismatch");
}

bool Objective::within_lipschitz_region(const Vector& x) const {
  if (!metadata_.lipschitz_region) return true;
  const auto& region = *metadata_.lipschitz_region;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!region[static_cast<std::size_t>(i)].contains(x(i))) return false;
  return true;
}

Objective build_separable(std::vector<ScalarPiece> pieces, std::string name) {
  if (pieces.empty()) throw InputError("build_separable: at least one piece is required");
  for (const auto& p : pieces)
    if (!p.value || !p.derivative) throw InputError("build_separable: piece without value/derivative");

  const auto d = static_cast<Eigen::Index>(pieces.size());
  ObjectiveMetadata meta;
  std::optional<OptimalSet> optset;

  bool all_intervals = true;
  bool all_min = true;
  double fstar = 0.0;
  std::vector<Interval> intervals;
  for (const auto& p : pieces) {
    all_intervals = all_intervals && p.minimizers.has_value();
    all_min = all_min && p.min_value.has_value();
    if (p.minimizers) intervals.push_back(*p.minimizers);
    if (p.min_value) fstar += *p.min_value;
  }
  if (all_intervals) optset = OptimalSet::box(std::move(intervals));
  if (all_min) meta.min_value = fstar;

  auto shared = std::make_shared<const std::vector<ScalarPiece>>(std::move(pieces));
  auto value = [shared](const Vector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += (*shared)[static_cast<std::size_t>(i)].value(x(i));
    return s;
  };
  auto gradient = [shared](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      g(i) = (*shared)[static_cast<std::size_t>(i)].derivative(x(i));
    return g;
  };
  Objective obj(std::move(name), d, value, gradient, meta, std::move(optset));
  obj.set_separable(true);
  return obj;
}

Objective build_fsep_quartic(int d, double quartic_coeff, double box_halfwidth) {
  if (d < 1) throw InputError("fsep-quartic: d must be >= 1");
  if (quartic_coeff < 0) throw InputError("fsep-quartic: quartic coefficient must be >= 0");
  if (!(box_halfwidth > 0)) throw InputError("fsep-quartic: box half-width must be > 0");

  std::vector<ScalarPiece> pieces;
  for (int i = 1; i <= d; ++i) pieces.push_back(ScalarPiece::quartic(i, quartic_coeff));
  Objective base = build_separable(std::move(pieces), "fsep-quartic");

  // g_i'' = 2i + 12c·x² lies in [2, 2d + 12cB²] on the box; the declared L is
  // the looser (2 + 12cB²)·d used for the whole class.
  ObjectiveMetadata meta = base.metadata();
  meta.pkl_mu = 2.0;
  meta.lipschitz = (2.0 + 12.0 * quartic_coeff * box_halfwidth * box_halfwidth) * d;
  meta.lipschitz_region =
      std::vector<Interval>(static_cast<std::size_t>(d), Interval{-box_halfwidth, box_halfwidth});

  base.set_metadata(std::move(meta));
  return base;
}

}  // namespace pathlen
