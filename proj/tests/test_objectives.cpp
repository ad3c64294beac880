#include "pathlen/constructions.hpp"
#include "pathlen/objectives.hpp"

#include <doctest.h>

#include <cmath>

using namespace pathlen;
using doctest::Approx;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Central differences with a step scaled to |x|.
Vector numeric_gradient(const Objective& f, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
    Vector p = x, m = x;
    p(i) += h;
    m(i) -= h;
    g(i) = (f.value(p) - f.value(m)) / (2 * h);
  }
  return g;
}

void check_gradient(const Objective& f, const Vector& x, double tol = 1e-6) {
  const Vector g = f.gradient(x);
  const Vector n = numeric_gradient(f, x);
  CHECK((g - n).norm() <= tol * std::max(1.0, g.norm()));
}

}  // namespace

TEST_CASE("from_data: identity design") {
  Matrix A = Matrix::Identity(2, 2);
  const auto s = QuadraticSpec::from_data(A, Vector::Zero(2), vec({3, 4}));
  CHECK(s.rank() == 2);
  CHECK(s.spectrum()(0) == Approx(0.5));  // Σ = I/n with n = 2
  CHECK(s.spectrum()(1) == Approx(0.5));
  CHECK(s.projection().norm() < 1e-14);
  CHECK(s.dist0() == Approx(5.0));
}

TEST_CASE("from_data: rank-deficient single row") {
  Matrix A(1, 2);
  A << 1, 1;
  const auto s = QuadraticSpec::from_data(A, Vector::Zero(1), vec({1, 1}));
  CHECK(s.rank() == 1);
  // Σ = AᵀA = [[1,1],[1,1]] has eigenvalues {2, 0}.
  CHECK(s.spectrum()(0) == Approx(2.0));
  CHECK(s.projection().norm() < 1e-14);
  CHECK(s.dist0() == Approx(std::sqrt(2.0)));
  // x* set is the line x₁ + x₂ = 0.
  const OptimalSet X = s.optimal_set();
  CHECK(X.distance(vec({1, -1})) < 1e-14);
  CHECK(X.distance(vec({1, 1})) == Approx(std::sqrt(2.0)));
}

TEST_CASE("from_data: diagonal design") {
  Matrix A = Matrix::Zero(2, 2);
  A.diagonal() << 2, 1;
  const auto s = QuadraticSpec::from_data(A, Vector::Zero(2), vec({1, 1}));
  CHECK(s.spectrum()(0) == Approx(2.0));
  CHECK(s.spectrum()(1) == Approx(0.5));
  CHECK(s.condition_number() == Approx(4.0));
  CHECK(std::abs(s.alpha()(0)) == Approx(1.0));
  CHECK(std::abs(s.alpha()(1)) == Approx(1.0));
  REQUIRE(s.ratios().size() == 1);
  CHECK(s.ratios()(0) == Approx(4.0));
}

TEST_CASE("from_data: eigen form agrees with the matrix form") {
  Matrix A(4, 3);
  A << 1, 2, 0, -1, 0.5, 3, 2, 2, 1, 0, 1, -1;
  const Vector y = vec({1, -2, 0.5, 3});
  const Vector x0 = vec({0.3, -0.7, 2});
  const auto s = QuadraticSpec::from_data(A, y, x0);
  for (const Vector& x : {x0, vec({1, 1, 1}), vec({-2, 0, 5})}) {
    CHECK(s.value(x) == Approx(*s.value_matrix_form(x)).epsilon(1e-12));
    CHECK((s.gradient(x) - *s.gradient_matrix_form(x)).norm() < 1e-12);
  }
  CHECK(s.gradient(s.projection()).norm() < 1e-12);
  CHECK(s.value(s.projection()) == Approx(s.min_value()));
  check_gradient(s.objective(), vec({0.4, 0.1, -0.3}));
  // Eigen-coordinate round trip.
  const Vector z = s.eigen_coordinates(vec({2, -1, 0.5}));
  CHECK((s.from_eigen_coordinates(z) - vec({2, -1, 0.5})).norm() < 1e-12);
}

TEST_CASE("from_data: input validation") {
  Matrix A = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(QuadraticSpec::from_data(A, Vector::Zero(3), vec({1, 1})), InputError);
  CHECK_THROWS_AS(QuadraticSpec::from_data(A, Vector::Zero(2), vec({1, 1, 1})), InputError);
  CHECK_THROWS_AS(QuadraticSpec::from_data(Matrix::Zero(2, 2), Vector::Zero(2), vec({1, 1})), InputError);
}

TEST_CASE("from_diagonal and from_eigen") {
  const auto s = QuadraticSpec::from_diagonal(vec({1, 3, 0, 2}), vec({1, 1, 1, 1}), vec({0, 0, 5, 0}));
  CHECK(s.rank() == 3);
  CHECK(s.spectrum()(0) == Approx(3.0));
  CHECK(s.spectrum()(2) == Approx(1.0));
  CHECK(s.dist0() == Approx(std::sqrt(3.0)));
  check_gradient(s.objective(), vec({0.5, -1, 2, 3}));

  const auto e = QuadraticSpec::from_eigen(vec({4, 1}), vec({1, -2}));
  CHECK(e.value(vec({1, -2})) == Approx(0.5 * (4 + 4)));
  CHECK(e.x0() == vec({1, -2}));
  CHECK_THROWS_AS(QuadraticSpec::from_eigen(vec({1, -1}), vec({1, 1})), InputError);
}

TEST_CASE("separable objectives") {
  const Objective f = build_separable({ScalarPiece::square(1), ScalarPiece::square(1)});
  CHECK(f.value(vec({1, 1})) == Approx(2.0));
  CHECK(f.gradient(vec({1, 1})) == vec({2, 2}));
  CHECK(f.separable());

  std::vector<ScalarPiece> q;
  for (int i = 1; i <= 3; ++i) q.push_back(ScalarPiece::quartic(i, 0.1));
  const Objective f2 = build_separable(q);
  CHECK(f2.value(Vector::Ones(3)) == Approx(6.3));
  check_gradient(f2, vec({0.3, -1.2, 2.0}));

  const Objective g = build_separable(std::vector<ScalarPiece>(6, PklConstruction::make(6).piece()));
  CHECK(g.value(Vector::Constant(6, 0.5)) == Approx(1.5));
  REQUIRE(g.optimal_set());
  CHECK(g.optimal_set()->is_box());
  CHECK(g.optimal_set()->distance(vec({-1, -2, 0, 0, 0, 3})) == Approx(3.0));
}

TEST_CASE("fsep quartic metadata") {
  const Objective a = build_fsep_quartic(1, 0.0, 1.0);
  CHECK(a.value(vec({2})) == Approx(4.0));
  CHECK(*a.metadata().pkl_mu == Approx(2.0));
  CHECK(*a.metadata().lipschitz == Approx(2.0));

  const Objective b = build_fsep_quartic(3, 0.1, 1.0);
  CHECK(*b.metadata().lipschitz == Approx(9.6));
  CHECK(*b.metadata().pkl_mu == Approx(2.0));
  CHECK(*b.metadata().condition_number() == Approx(4.8));
  CHECK(b.within_lipschitz_region(vec({1, -1, 0.5})));
  CHECK_FALSE(b.within_lipschitz_region(vec({1.5, 0, 0})));

  const Objective c = build_fsep_quartic(2, 0.1, 2.0);
  CHECK(*c.metadata().lipschitz == Approx(13.6));
  check_gradient(c, vec({1.7, -0.4}));

  CHECK_THROWS_AS(build_fsep_quartic(0, 0.1, 1.0), InputError);
  CHECK_THROWS_AS(build_fsep_quartic(2, -0.1, 1.0), InputError);
}

TEST_CASE("optimal set shapes") {
  const OptimalSet p = OptimalSet::point(vec({1, 2}));
  CHECK(p.distance(vec({4, 6})) == Approx(5.0));
  CHECK(p.is_point());

  Matrix basis(3, 1);
  basis << 0, 0, 1;
  const OptimalSet a = OptimalSet::affine(vec({0, 0, 1}), basis);
  CHECK(a.distance(vec({5, -3, 4})) == Approx(3.0));
  CHECK((a.project(vec({5, -3, 4})) - vec({5, -3, 1})).norm() < 1e-15);

  const OptimalSet b = OptimalSet::box({{-1, 1}, {0, 0}});
  CHECK((b.project(vec({3, 2})) - vec({1, 0})).norm() == 0);
  CHECK(b.distance(vec({0.5, 0})) == 0);
}
