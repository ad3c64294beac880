#include "pathlen/bounds.hpp"

#include <doctest.h>

#include <cmath>

using namespace pathlen;
using doctest::Approx;

TEST_CASE("linear convergence bounds") {
  CHECK(bound_linconv_gd(1.0, 0.5, 1.0, 1.0) == Approx(2.0));
  CHECK(bound_linconv_gd(2.0, 0.1, 0.5, 4.0) == Approx(40.0));
  // GD on a strongly convex function, η = 1/L, c = ημ gives κ.
  CHECK(bound_linconv_gd(1.0, 0.1 / 10.0, 1 / 10.0, 10.0) == Approx(100.0));
  CHECK(bound_linconv_gd(1.0, 1.0, 1.0, 1.0) == Approx(1.0));

  CHECK(bound_linconv_gf(1.0, 1 - std::exp(-1.0), 1.0) == Approx(1.0));
  CHECK(bound_linconv_gf(1.0, 0.5, 2.0) == Approx(2 / std::log(2.0)));
  const double mu = 0.3, L = 7.0;
  CHECK(bound_linconv_gf(1.0, -std::expm1(-mu), L) == Approx(L / mu).epsilon(1e-14));
  CHECK_THROWS_AS(bound_linconv_gf(1.0, 1.0, 1.0), InputError);

  CHECK(bound_linconv_general(1.0, 0.5) == Approx(4.0));
  CHECK(bound_linconv_general(3.0, 0.1) == Approx(60.0));
  const double kappa = 49;
  CHECK(bound_linconv_general(1.0, 2 / (std::sqrt(kappa) + 1)) == Approx(std::sqrt(kappa) + 1));

  CHECK_THROWS_AS(bound_linconv_general(0.5, 0.5), InputError);
  CHECK_THROWS_AS(bound_linconv_general(1.0, 0.0), InputError);
  CHECK_THROWS_AS(bound_linconv_general(1.0, 1.5), InputError);
  CHECK_THROWS_AS(bound_linconv_gd(1.0, 0.5, 0.0, 1.0), InputError);
}

TEST_CASE("momentum and projected bounds") {
  CHECK(bound_hb(1.0, 1.0) == Approx(1.0));
  CHECK(bound_hb(1.0, 4.0) == Approx(2.0));
  CHECK(bound_hb(2.0, 8.0) == Approx(2.0));
  CHECK_THROWS_AS(bound_hb(2.0, 1.0), InputError);

  CHECK(bound_pgd_factor(1.0, 1.0, 1.0, 1.0) == Approx(1 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(bound_pgd_factor(0.0, 1.0, 1.0, 1.0) == Approx(1.0));
  CHECK(bound_pgd_factor(0.5, 1.0, 1.0, 0.5) == Approx(2 * (0.75 + std::sqrt(1.0625))));
}

TEST_CASE("curvature-based bounds") {
  CHECK(bound_pkl(1.0, 4.0, Flow::gf) == Approx(2.0));
  CHECK(bound_pkl(1.0, 4.0, Flow::gd) == Approx(4.0));
  CHECK(bound_pkl(2.0, 18.0, Flow::gf) == Approx(3.0));

  CHECK(bound_fsep(1.0, 1.0) == Approx(2.0));
  CHECK(bound_fsep(1.0, std::exp(1.0)) == Approx(3.0));
  CHECK(bound_fsep(2.0, 2 * std::exp(2.0)) == Approx(4.0));

  CHECK(bound_separable<double>(1) == Approx(1.0));
  CHECK(bound_separable<double>(4) == Approx(2.0));
  CHECK(bound_separable<double>(150) == Approx(12.2474).epsilon(1e-5));
  CHECK_THROWS_AS(bound_separable<double>(0), InputError);

  CHECK(bound_convex_qc_log2<double>(2, ConvexQc::gd_eta_invL) == Approx(40.0));
  CHECK(bound_convex_qc_log2<double>(2, ConvexQc::gf_quasiconvex) == Approx(4 * std::log(2.0)));
  CHECK(bound_convex_qc_log2<double>(3, ConvexQc::gd_eta_small) == Approx(12 * std::log(3.0)));
  CHECK_THROWS_AS(bound_convex_qc_log2<double>(1, ConvexQc::gf_quasiconvex), InputError);
}

TEST_CASE("quadratic bound") {
  CHECK(tau(1.0) == 0.0);
  CHECK(tau(6.0) >= 0.5);
  const double e1 = std::exp(1.0) + 1;
  CHECK(tau(e1) == Approx(std::pow(e1, -1 / (e1 - 1)) * (1 - 1 / e1)));
  // τ(κ) = κ^{−1/(κ−1)}(1 − 1/κ) is below 1 and increases towards it.
  double prev = 0;
  for (double k : {1.5, 2.0, 10.0, 1e3, 1e6}) {
    CHECK(tau(k) > prev);
    CHECK(tau(k) < 1);
    prev = tau(k);
  }
  CHECK_THROWS_AS(tau(0.5), InputError);

  CHECK(bound_quadratic_from_ratios<double>({1, 1, 1, 1}, Flow::gf) == Approx(1.0));
  CHECK(bound_quadratic_from_ratios<double>({1, 1, 1, 1}, Flow::gd) == Approx(2.0));
  for (double k : {2.0, 1e3, 1e12})
    CHECK(bound_quadratic_from_ratios<double>({1, 1, 1, k}, Flow::gf) <= 2.0);

  const double s = bound_quadratic<double>({121, 11, 1}, Flow::gf);
  CHECK(s == Approx(std::min({std::sqrt(3.0), 1 + 2 * tau(11.0), 1 + 2.5 * std::sqrt(std::log(121.0))})));
  CHECK_THROWS_AS(bound_quadratic<double>({}, Flow::gf), InputError);
  CHECK_THROWS_AS(bound_quadratic<double>({1, 2}, Flow::gf), InputError);
}

TEST_CASE("lower bounds") {
  const int d = static_cast<int>(std::round(std::exp(4.0)));
  CHECK(lower_bound_pkl(d, 1e30, LowerPkl::gf) == Approx(std::sqrt(d) / (6 * std::log(d))));
  CHECK(lower_bound_pkl(6, 216.0, LowerPkl::gd) ==
        Approx(std::min(std::sqrt(6.0) / (16 * std::log(6.0)), std::pow(216.0, 0.25) / (16 * std::log(216.0)))));
  CHECK(lower_bound_pkl(0, 0.0, LowerPkl::linconv_gf, 1e-3) == Approx(0.145).epsilon(1e-2));
  CHECK(lower_bound_pkl(0, 0.0, LowerPkl::linconv_gd, 1e-3) ==
        Approx(std::sqrt(1000.0) / (64 * std::pow(std::log(1000.0), 1.5))));
  CHECK_THROWS_AS(lower_bound_pkl(5, 1e4, LowerPkl::gf), InputError);
  CHECK_THROWS_AS(lower_bound_pkl(10, 100.0, LowerPkl::gf), InputError);
  CHECK_THROWS_AS(lower_bound_pkl(10, 1e4, LowerPkl::linconv_gf, 0.01), InputError);

  CHECK(lower_bound_quadratic(1, 5.0, Flow::gf) == Approx(0.45 * std::sqrt(std::log(5.0))));
  CHECK(lower_bound_quadratic(1, 5.0, Flow::gf) == Approx(0.5710).epsilon(1e-4));
  CHECK(lower_bound_quadratic(4, std::exp(4.0), Flow::gf) == Approx(0.9));
  CHECK(lower_bound_quadratic(100, std::exp(2.0), Flow::gd) == Approx(0.3 * std::sqrt(2.0)));
  CHECK_THROWS_AS(lower_bound_quadratic(100, std::exp(1.0), Flow::gd), InputError);
}

TEST_CASE("bound registry") {
  CHECK(bound_names().size() == 20);
  BoundInputs in;
  in.eta = 1, in.L = 1, in.A = 1, in.c = 1;
  const auto r = evaluate_bound("pgd", in);
  CHECK(r.factor == Approx(1 + std::sqrt(2.0)));
  CHECK_FALSE(r.log2_scale);

  BoundInputs q;
  q.spectrum = {121, 11, 1};
  const auto s = evaluate_bound("quadratic-gf", q);
  CHECK(s.kappa_j.size() == 2);
  CHECK(s.base == DistanceBase::optimal_set);

  BoundInputs c;
  c.d = 3;
  CHECK(evaluate_bound("convex-qc-gd", c).log2_scale);

  CHECK_THROWS_AS(evaluate_bound("nope", in), InputError);
  CHECK_THROWS_AS(evaluate_bound("hb", BoundInputs{}), InputError);

  for (const auto& name : bound_names()) {
    BoundInputs all;
    all.A = 1, all.c = 1e-3, all.eta = 0.1, all.L = 10, all.mu = 0.01, all.kappa = 1e3, all.d = 8;
    all.spectrum = {10, 1, 0.1};
    CHECK_NOTHROW(evaluate_bound(name, all));
  }
}

TEST_CASE("bounds in extended precision") {
  const long double f = bound_pgd_factor<long double>(1, 1, 1, 1);
  CHECK(std::abs(f - (1 + std::sqrt(2.0L))) < 1e-18L);
  CHECK(std::abs(tau<long double>(6) - std::pow(6.0L, -0.2L) * 5 / 6) < 1e-18L);
}
