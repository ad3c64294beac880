#include "pathlen/constructions.hpp"

#include "pathlen/rng.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pathlen {
namespace {

void require_pkl_dim(int d) {
  if (d < 6)
    throw InputError("PKL lower-bound construction requires d >= 6 (got " + std::to_string(d) + ")");
}

int reduced_dimension(int d, std::optional<double> target_kappa) {
  require_pkl_dim(d);
  if (!target_kappa) return d;
  if (!(*target_kappa > 0)) throw InputError("target_kappa must be positive");
  if (*target_kappa >= 3.0 * d * d) return d;
  const int reduced = static_cast<int>(std::floor(std::sqrt(*target_kappa / 3.0)));
  if (reduced < 6)
    throw InputError("target_kappa " + std::to_string(*target_kappa) +
                     " is below 3*6^2 = 108, the smallest admissible construction");
  return reduced;
}

Objective pkl_objective(const PklConstruction& c, int d, const char* name) {
  std::vector<ScalarPiece> pieces(static_cast<std::size_t>(d), c.piece());
  Objective obj = build_separable(std::move(pieces), name);
  ObjectiveMetadata meta;
  meta.min_value = 0.0;
  meta.lipschitz = c.lipschitz();
  meta.pkl_mu = c.mu();
  obj.set_metadata(std::move(meta));
  return obj;
}

}  // namespace

PklConstruction PklConstruction::make(int d) {
  require_pkl_dim(d);
  PklConstruction c;
  c.d = d;
  c.delta = 1.0 / d;
  c.gamma = 1.0 - c.delta + 6.0 * std::log(1.0 / (2.0 * c.delta));
  c.beta = c.delta / c.gamma;
  c.alpha = (0.5 - c.delta * c.delta) + 2.0 * c.delta * (c.gamma - (1.0 - c.delta)) -
            c.beta * c.gamma * c.gamma;
  return c;
}

double PklConstruction::g(double x) const {
  if (x <= 0.0) return 0.0;
  if (x <= 0.5) return x * x;
  if (x <= 1.0 - delta) return 0.5 - (1.0 - x) * (1.0 - x);
  if (x <= gamma) return (0.5 - delta * delta) + 2.0 * delta * (x - (1.0 - delta));
  return alpha + beta * x * x;
}

double PklConstruction::dg(double x) const {
  if (x <= 0.0) return 0.0;
  if (x <= 0.5) return 2.0 * x;
  if (x <= 1.0 - delta) return 2.0 * (1.0 - x);
  if (x <= gamma) return 2.0 * delta;
  return 2.0 * beta * x;
}

ScalarPiece PklConstruction::piece() const {
  const PklConstruction self = *this;
  ScalarPiece p;
  p.value = [self](double x) { return self.g(x); };
  p.derivative = [self](double x) { return self.dg(x); };
  p.minimizers = Interval{-std::numeric_limits<double>::infinity(), 0.0};
  p.min_value = 0.0;
  return p;
}

PklInstance build_pkl_gf_instance(int d, std::optional<double> target_kappa) {
  const int active = reduced_dimension(d, target_kappa);
  const PklConstruction c = PklConstruction::make(active);
  Vector x0 = Vector::Zero(d);
  x0(0) = 0.5;
  const double spread = c.delta * std::log(1.0 / (2.0 * c.delta));
  for (int i = 2; i <= active; ++i) x0(i - 1) = (1.0 - c.delta) + spread * (i - 2);
  return {c, pkl_objective(c, d, "pkl-lower-gf"), std::move(x0), std::nullopt};
}

PklInstance build_pkl_gd_instance(int d, std::optional<double> target_kappa) {
  const int active = reduced_dimension(d, target_kappa);
  const PklConstruction c = PklConstruction::make(active);
  const double target = 1.0 / (2.0 * c.delta);  // = active/2

  GdPklInit init;
  for (int k1 = 1; k1 <= 10'000; ++k1) {
    const double eta = (std::pow(target, 1.0 / k1) - 1.0) / 2.0;
    if (eta <= 0.5 && eta >= 0.25) {
      init.eta = eta;
      init.k1 = k1;
      break;
    }
    if (eta < 0.25) break;
  }
  if (init.k1 == 0)
    throw InputError("no admissible k1 for the GD construction with d = " + std::to_string(active));

  init.x0 = Vector::Zero(d);
  init.x0(0) = 0.5;
  const double spread = 2.0 * init.eta * init.k1 * c.delta;
  for (int i = 2; i <= active; ++i) init.x0(i - 1) = (1.0 - c.delta) + spread * (i - 2);
  Vector x0 = init.x0;
  return {c, pkl_objective(c, d, "pkl-lower-gd"), std::move(x0), std::move(init)};
}

std::vector<double> QuadLowerConstruction::gf_checkpoints() const {
  std::vector<double> t;
  for (Eigen::Index i = 0; i < a.size(); ++i) t.push_back(std::log(1.0 / delta_gf) / a(i));
  return t;
}

std::vector<double> QuadLowerConstruction::gd_checkpoints() const {
  std::vector<double> k;
  for (Eigen::Index i = 0; i < a.size(); ++i) k.push_back(a(0) * std::log(1.0 / delta_gd) / a(i));
  return k;
}

QuadraticSpec QuadLowerConstruction::spec() const {
  return QuadraticSpec::from_diagonal(a, x0, Vector::Zero(d));
}

QuadLowerConstruction build_quad_lower(int d, double omega) {
  if (d < 1) throw InputError("quad-geom: d must be >= 1");
  if (!(omega > 1)) throw InputError("quad-geom: omega must be > 1");
  QuadLowerConstruction q;
  q.d = d;
  q.omega = omega;
  q.a.resize(d);
  for (int i = 1; i <= d; ++i) q.a(i - 1) = std::pow(omega, d - i);
  q.x0 = Vector::Ones(d);
  q.log_kappa = (d - 1) * std::log(omega);
  return q;
}

QuadraticSpec build_quad_random(int d, double kappa, std::uint64_t seed) {
  if (d < 2) throw InputError("quad-random: d must be >= 2");
  if (!(kappa > 1)) throw InputError("quad-random: kappa must be > 1");
  SplitMix64 rng(seed);
  Vector a(d);
  a(0) = 1.0;
  a(d - 1) = 1.0 / kappa;
  for (int i = 1; i + 1 < d; ++i) a(i) = rng.uniform(1.0 / kappa, 1.0);
  Vector x0(d);
  for (int i = 0; i < d; ++i) x0(i) = rng.uniform();
  x0 *= std::sqrt(static_cast<double>(d)) / x0.norm();
  return QuadraticSpec::from_diagonal(a, x0, Vector::Zero(d));
}

LinearConvergenceFit construction_linconv_constants(int d, Flow which) {
  require_pkl_dim(d);
  const double base = d * std::log(static_cast<double>(d));
  return {1.0, 1.0 / ((which == Flow::gf ? 4.0 : 16.0) * base)};
}

}  // namespace pathlen
