#include "pathlen/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace pathlen {
namespace {

// Eigenvectors are only defined up to sign; pin the largest-magnitude entry positive.
void normalize_signs(Matrix& basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index imax = 0;
    basis.col(j).cwiseAbs().maxCoeff(&imax);
    if (basis(imax, j) < 0) basis.col(j) *= -1.0;
  }
}

}  // namespace

QuadraticSpec QuadraticSpec::from_data(const Matrix& A, const Vector& y, const Vector& x0,
                                       double rtol) {
  if (A.rows() < 1 || A.cols() < 1) throw InputError("quadratic_from_data: A must be non-empty");
  if (y.size() != A.rows()) throw InputError("quadratic_from_data: y must have n entries");
  if (x0.size() != A.cols()) throw InputError("quadratic_from_data: x0 must have d entries");
  if (!(rtol > 0)) throw InputError("quadratic_from_data: rtol must be positive");
  if (A.cwiseAbs().maxCoeff() == 0.0) throw InputError("objective is constant");

  const double n = static_cast<double>(A.rows());
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();  // descending
  const double top = s(0) * s(0) / n;
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) * s(rank) / n >= rtol * top) ++rank;

  QuadraticSpec q;
  q.spectrum_ = s.head(rank).array().square() / n;
  q.basis_ = svd.matrixV().leftCols(rank);
  const Matrix u = svd.matrixU().leftCols(rank);
  // Π = (I − VVᵀ)x₀ + A⁺y with A⁺ restricted to the kept singular triplets.
  const Vector pinv_y = q.basis_ * ((u.transpose() * y).array() / s.head(rank).array()).matrix();
  q.projection_ = x0 - q.basis_ * (q.basis_.transpose() * x0) + pinv_y;
  normalize_signs(q.basis_);
  q.x0_ = x0;
  q.min_value_ = (y - A * q.projection_).squaredNorm() / (2.0 * n);
  q.design_ = A;
  q.response_ = y;
  q.finish();
  return q;
}

QuadraticSpec QuadraticSpec::from_diagonal(const Vector& hessian_diag, const Vector& x0,
                                           const Vector& x_star) {
  const Eigen::Index d = hessian_diag.size();
  if (d < 1) throw InputError("quadratic: empty spectrum");
  if (x0.size() != d || x_star.size() != d) throw InputError("quadratic: dimension mismatch");
  if ((hessian_diag.array() < 0).any() || !hessian_diag.allFinite())
    throw InputError("quadratic: Hessian entries must be finite and >= 0");
  if (hessian_diag.maxCoeff() == 0.0) throw InputError("objective is constant");

  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < d; ++i)
    if (hessian_diag(i) > 0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return hessian_diag(a) > hessian_diag(b); });

  QuadraticSpec q;
  const auto rank = static_cast<Eigen::Index>(order.size());
  q.spectrum_.resize(rank);
  q.basis_ = Matrix::Zero(d, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    q.spectrum_(j) = hessian_diag(order[static_cast<std::size_t>(j)]);
    q.basis_(order[static_cast<std::size_t>(j)], j) = 1.0;
  }
  // Coordinates with zero curvature are free: the projection keeps x₀ there.
  q.projection_ = x_star;
  for (Eigen::Index i = 0; i < d; ++i)
    if (hessian_diag(i) == 0.0) q.projection_(i) = x0(i);
  q.x0_ = x0;
  q.diagonal_hessian_ = hessian_diag;
  q.finish();
  return q;
}

QuadraticSpec QuadraticSpec::from_eigen(const Vector& spectrum, const Vector& alpha) {
  if (spectrum.size() != alpha.size()) throw InputError("quadratic: spectrum/alpha size mismatch");
  if (spectrum.size() < 1) throw InputError("quadratic: empty spectrum");
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    if (!(spectrum(i) > 0)) throw InputError("quadratic: spectrum must be strictly positive");
    if (i > 0 && spectrum(i) > spectrum(i - 1))
      throw InputError("quadratic: spectrum must be sorted descending");
  }
  return from_diagonal(spectrum, alpha, Vector::Zero(spectrum.size()));
}

void QuadraticSpec::finish() {
  alpha_ = basis_.transpose() * (x0_ - projection_);
}

Vector QuadraticSpec::ratios() const {
  Vector r(std::max<Eigen::Index>(rank() - 1, 0));
  for (Eigen::Index j = 0; j + 1 < rank(); ++j) r(j) = spectrum_(j) / spectrum_(j + 1);
  return r;
}

double QuadraticSpec::value(const Vector& x) const {
  if (diagonal_hessian_) {
    const Vector e = x - projection_;
    return min_value_ + 0.5 * (diagonal_hessian_->array() * e.array().square()).sum();
  }
  const Vector z = eigen_coordinates(x);
  return min_value_ + 0.5 * (spectrum_.array() * z.array().square()).sum();
}

Vector QuadraticSpec::gradient(const Vector& x) const {
  if (diagonal_hessian_) return diagonal_hessian_->cwiseProduct(x - projection_);
  const Vector z = eigen_coordinates(x);
  return basis_ * spectrum_.cwiseProduct(z);
}

std::optional<double> QuadraticSpec::value_matrix_form(const Vector& x) const {
  if (!design_) return std::nullopt;
  const double n = static_cast<double>(design_->rows());
  return (*response_ - *design_ * x).squaredNorm() / (2.0 * n);
}

std::optional<Vector> QuadraticSpec::gradient_matrix_form(const Vector& x) const {
  if (!design_) return std::nullopt;
  const double n = static_cast<double>(design_->rows());
  return Vector(design_->transpose() * (*design_ * x - *response_) / n);
}

Vector QuadraticSpec::eigen_coordinates(const Vector& x) const {
  return basis_.transpose() * (x - projection_);
}

Vector QuadraticSpec::from_eigen_coordinates(const Vector& z) const {
  return projection_ + basis_ * z;
}

OptimalSet QuadraticSpec::optimal_set() const {
  if (rank() == dimension()) return OptimalSet::point(projection_);
  return OptimalSet::affine(projection_, basis_);
}

Objective QuadraticSpec::objective(std::string name) const {
  ObjectiveMetadata meta;
  meta.lipschitz = spectrum_(0);
  meta.pkl_mu = spectrum_(rank() - 1);
  meta.min_value = min_value_;
  auto self = std::make_shared<const QuadraticSpec>(*this);
  Objective obj(std::move(name), dimension(), [self](const Vector& x) { return self->value(x); },
                [self](const Vector& x) { return self->gradient(x); }, meta, optimal_set());
  obj.set_separable(diagonal_hessian_.has_value());
  return obj;
}

}  // namespace pathlen
