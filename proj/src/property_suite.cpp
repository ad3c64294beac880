#include "pathlen/property_suite.hpp"

#include "pathlen/bounds.hpp"
#include "pathlen/constructions.hpp"
#include "pathlen/csv.hpp"
#include "pathlen/registry.hpp"
#include "pathlen/rng.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace pathlen {
namespace {

class Suite {
 public:
  // Registers one evaluated case of invariant `name`.
  void check(const std::string& name, bool ok, const std::function<std::string()>& witness) {
    auto [it, inserted] = index_.try_emplace(name, results_.size());
    if (inserted) results_.push_back({name, true, 0, ""});
    InvariantResult& r = results_[it->second];
    ++r.cases;
    if (!ok && r.passed) {
      r.passed = false;
      r.witness = witness();
    }
  }
  void declare(const std::string& name) {
    if (index_.try_emplace(name, results_.size()).second) results_.push_back({name, true, 0, ""});
  }
  SuiteReport report() && { return {std::move(results_)}; }

 private:
  std::vector<InvariantResult> results_;
  std::map<std::string, std::size_t> index_;
};

std::string vec(const Vector& v) {
  std::ostringstream s;
  s << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v(i);
  s << ")";
  return s.str();
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

Vector random_vector(SplitMix64& rng, Eigen::Index d, double lo, double hi) {
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

Matrix random_matrix(SplitMix64& rng, Eigen::Index n, Eigen::Index d) {
  Matrix m(n, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

Vector fd_gradient(const Objective& obj, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x(i)));
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (obj.value(xp) - obj.value(xm)) / (2.0 * h);
  }
  return g;
}

struct Sampled {
  std::string label;
  Objective obj;
  double lo, hi;  // sampling box
};

void objective_invariants(Suite& s, const Sampled& z, SplitMix64& rng) {
  const Objective& obj = z.obj;
  const auto& meta = obj.metadata();
  const Eigen::Index d = obj.dimension();
  for (int k = 0; k < 100; ++k) {
    const Vector x = random_vector(rng, d, z.lo, z.hi);
    const Vector g = obj.gradient(x);
    const Vector fd = fd_gradient(obj, x);
    const double err = (fd - g).norm() / std::max(g.norm(), 1.0);
    s.check("objectives.finite_difference_gradient", err <= 1e-5,
            [&] { return z.label + " at " + vec(x) + ": relative error " + num(err); });
    const double f = obj.value(x);
    if (meta.min_value)
      s.check("objectives.value_above_min", f >= *meta.min_value - 1e-12,
              [&] { return z.label + " at " + vec(x) + ": f = " + num(f); });
    if (meta.pkl_mu && meta.min_value) {
      const double lhs = g.squaredNorm();
      const double rhs = 2.0 * *meta.pkl_mu * (f - *meta.min_value);
      s.check("objectives.pkl_inequality", lhs >= rhs * (1 - 1e-9),
              [&] { return z.label + " at " + vec(x) + ": |g|^2 = " + num(lhs) + " < " + num(rhs); });
    }
    if (meta.lipschitz) {
      const Vector y = random_vector(rng, d, z.lo, z.hi);
      if (obj.within_lipschitz_region(x) && obj.within_lipschitz_region(y)) {
        const double lhs = (obj.gradient(x) - obj.gradient(y)).norm();
        const double rhs = *meta.lipschitz * (x - y).norm();
        s.check("objectives.lipschitz_gradient", lhs <= rhs * (1 + 1e-9),
                [&] { return z.label + " pair " + vec(x) + ", " + vec(y); });
      }
    }
  }
}

void quadratic_invariants(Suite& s, const QuadraticSpec& q, const std::string& label,
                          SplitMix64& rng) {
  const Eigen::Index d = q.dimension();
  for (int k = 0; k < 20; ++k) {
    const Vector x = random_vector(rng, d, -2.0, 2.0);
    if (auto vm = q.value_matrix_form(x)) {
      const double ve = q.value(x);
      const double gerr = (q.gradient(x) - *q.gradient_matrix_form(x)).norm() /
                          std::max(1.0, q.gradient_matrix_form(x)->norm());
      const double verr = std::abs(ve - *vm) / std::max(1.0, std::abs(*vm));
      s.check("quadratic.eigen_form_matches_matrix_form", verr <= 1e-10 && gerr <= 1e-10,
              [&] { return label + " at " + vec(x) + ": value err " + num(verr) + ", grad err " + num(gerr); });
    }
    const OptimalSet X = q.optimal_set();
    const Vector p = X.project(x);
    const double idem = (X.project(p) - p).norm();
    s.check("objectives.projection_idempotent", idem <= 1e-12 * (1 + p.norm()),
            [&] { return label + " at " + vec(x) + ": |P(P(x)) - P(x)| = " + num(idem); });
  }
  const Vector r = q.ratios();
  const double prod = r.size() ? r.prod() : 1.0;
  s.check("quadratic.kappa_is_product_of_ratios",
          std::abs(prod - q.condition_number()) <= 1e-10 * q.condition_number(),
          [&] { return label + ": prod " + num(prod) + " vs " + num(q.condition_number()); });
  const double dist = q.optimal_set().distance(q.x0());
  s.check("quadratic.alpha_norm_is_distance", std::abs(q.dist0() - dist) <= 1e-10 * (1 + dist),
          [&] { return label + ": |alpha| " + num(q.dist0()) + " vs " + num(dist); });
}

void optimizer_invariants(Suite& s, const QuadraticSpec& q, const std::string& label,
                          const ExperimentConfig& cfg, SplitMix64& rng) {
  const Objective obj = q.objective(label);
  const double L = q.spectrum()(0);
  const OptimalSet X = q.optimal_set();
  const Vector& x0 = q.x0();

  const Trajectory gd = gd_run(obj, x0, 1.0 / L, StopRule::steps(50));
  for (std::size_t k = 0; k + 1 < gd.size(); ++k) {
    const Vector g = obj.gradient(gd.points[k]);
    const double lhs = obj.value(gd.points[k + 1]);
    const double rhs = obj.value(gd.points[k]) - 0.5 / L * g.squaredNorm();
    s.check("optimizers.gd_sufficient_decrease", lhs <= rhs + 1e-12 * (1 + std::abs(rhs)),
            [&] { return label + " step " + std::to_string(k) + ": " + num(lhs) + " > " + num(rhs); });
    const Vector expect = gd.points[k] - (1.0 / L) * g;
    s.check("optimizers.gd_update_recomputable", (expect - gd.points[k + 1]).norm() <= 1e-12 * (1 + expect.norm()),
            [&] { return label + " step " + std::to_string(k); });
  }

  const Trajectory gd2 = gd_run(obj, x0, 2.0 / L, StopRule::steps(50));
  for (std::size_t k = 0; k + 1 < gd2.size(); ++k) {
    const double a = X.distance(gd2.points[k]), b = X.distance(gd2.points[k + 1]);
    s.check("optimizers.gd_distance_nonincreasing", b <= a * (1 + 1e-12) + 1e-14,
            [&] { return label + " (eta=2/L) step " + std::to_string(k) + ": " + num(b) + " > " + num(a); });
  }

  const Trajectory hb0 = heavy_ball_run(obj, x0, 1.0 / L, 0.0, StopRule::steps(50));
  bool same = hb0.size() == gd.size();
  for (std::size_t k = 0; same && k < gd.size(); ++k) same = (hb0.points[k].array() == gd.points[k].array()).all();
  s.check("optimizers.heavy_ball_beta0_bitwise_gd", same, [&] { return label; });

  std::vector<Interval> box(static_cast<std::size_t>(q.dimension()), Interval{-0.5, 0.5});
  const Projector P = box_projector(box);
  const Trajectory pgd = pgd_run(obj, P, P(x0), 1.0 / L, StopRule::steps(50));
  for (const Vector& x : pgd.points)
    s.check("optimizers.pgd_iterates_feasible", (P(x) - x).norm() <= 1e-12,
            [&] { return label + " iterate " + vec(x); });

  // Flow integration against the closed form.
  StopRule until = StopRule::until(3.0 / q.spectrum()(q.rank() - 1));
  const Trajectory flow = gf_integrate(obj, x0, cfg.ode_tol, until);
  double worst = 0.0;
  for (std::size_t k = 0; k < flow.size(); ++k)
    worst = std::max(worst, (flow.points[k] - gf_quadratic(q, flow.times[k])).norm());
  const double scale = std::max(1.0, x0.norm());
  s.check("optimizers.gf_integrate_matches_closed_form", worst <= 10.0 * cfg.ode_tol * scale,
          [&] { return label + ": max error " + num(worst); });

  // Analysis on the same runs.
  const PathLengthReport pr = path_length_discrete(gd, X);
  const double chord = (gd.initial() - gd.final()).norm();
  s.check("analysis.path_at_least_chord", pr.zeta_raw >= chord * (1 - 1e-12),
          [&] { return label + ": zeta " + num(pr.zeta_raw) + " < chord " + num(chord); });

  const PathLengthReport quad = path_length_quadratic_gf(q, cfg.quad_abs_tol);
  const double l2 = q.alpha().norm(), l1 = q.alpha().cwiseAbs().sum();
  const double slack = quad.error_budget + cfg.quad_abs_tol;
  s.check("analysis.quadratic_gf_between_l2_and_l1", quad.zeta >= l2 - slack && quad.zeta <= l1 + slack,
          [&] { return label + ": zeta " + num(quad.zeta) + " outside [" + num(l2) + ", " + num(l1) + "]"; });
  if (l2 > 0)
    s.check("analysis.converged_ratio_at_least_one", quad.ratio >= 1 - 1e-9,
            [&] { return label + ": ratio " + num(quad.ratio); });

  std::vector<Vector> pts = gd.points;
  const SelfContractedVerdict v = self_contracted_check(pts);
  s.check("analysis.gd_self_contracted", v.holds, [&] {
    return label + ": witness (" + std::to_string((*v.witness)[0]) + ", " +
           std::to_string((*v.witness)[1]) + ", " + std::to_string((*v.witness)[2]) + ") " +
           num(v.far) + " > " + num(v.near);
  });

  if (q.rank() == q.dimension() && X.distance(x0) > 0) {
    const Trajectory lin = gd_run(obj, x0, 1.0 / L, StopRule::steps(40));
    std::vector<double> dist;
    for (const Vector& x : lin.points) dist.push_back(X.distance(x));
    try {
      const LinearConvergenceFit fit = linear_convergence_fit(dist);
      bool ok = true;
      for (std::size_t k = 0; k < dist.size(); ++k)
        ok = ok && dist[k] <= fit.A * std::pow(1 - fit.c, static_cast<double>(k)) * dist[0] * (1 + 1e-12) + 1e-300;
      s.check("analysis.linear_fit_certifies_envelope", ok,
              [&] { return label + ": A " + num(fit.A) + " c " + num(fit.c); });
    } catch (const NumericalError& e) {
      s.check("analysis.linear_fit_certifies_envelope", false,
              [&] { return label + ": " + e.what(); });
    }
  }
  (void)rng;
}

void bound_invariants(Suite& s) {
  for (int i = 0; i <= 2000; ++i) {
    const double k = std::pow(10.0, 6.0 * i / 2000.0);
    const double t = tau(k);
    s.check("bounds.tau_between_zero_and_log_over_e", t >= 0 && t <= std::log(k) / std::exp(1.0) + 1e-15,
            [&] { return "kappa " + num(k) + ": tau " + num(t); });
  }
  s.check("bounds.tau_continuous_at_one", tau(1.0 + 1e-9) < 1e-8,
          [&] { return "tau(1+1e-9) = " + num(tau(1.0 + 1e-9)); });
  for (int dp = 2; dp <= 50; ++dp) {
    const double sum = (dp - 1) * tau(6.0);
    s.check("bounds.tau_sum_kappa6", sum >= 0.5 * (dp - 1),
            [&] { return "d+ " + std::to_string(dp) + ": " + num(sum); });
  }
  double prev_pkl = 0, prev_fsep = 0, prev_hb = 0;
  for (int i = 0; i <= 200; ++i) {
    const double L = std::pow(10.0, 8.0 * i / 200.0);
    const double p = bound_pkl(1.0, L, Flow::gf), f = bound_fsep(1.0, L), h = bound_hb(1.0, L);
    s.check("bounds.monotone_in_kappa", p >= prev_pkl && f >= prev_fsep && h >= prev_hb,
            [&] { return "L " + num(L); });
    prev_pkl = p, prev_fsep = f, prev_hb = h;
  }
  double prev_gd = INFINITY, prev_gf = INFINITY, prev_gen = INFINITY;
  for (int i = 1; i < 200; ++i) {
    const double c = i / 200.0;
    const double a = bound_linconv_gd(1.0, c, 1.0, 1.0), b = bound_linconv_gf(1.0, c, 1.0),
                 g = bound_linconv_general(1.0, c);
    s.check("bounds.linconv_nonincreasing_in_c", a <= prev_gd && b <= prev_gf && g <= prev_gen,
            [&] { return "c " + num(c); });
    prev_gd = a, prev_gf = b, prev_gen = g;
  }
}

void construction_invariants(Suite& s, int d_grid) {
  for (int d : log_spaced_dims(std::log(6.0), std::log(2000.0), 12)) {
    const PklConstruction c = PklConstruction::make(d);
    for (double b : c.breakpoints()) {
      const double h = 1e-15 * std::max(1.0, b);
      const double jump = std::abs(c.g(b + h) - c.g(b - h) - 0.0);
      const double djump = std::abs(c.dg(std::nextafter(b, INFINITY)) - c.dg(std::nextafter(b, -INFINITY)));
      s.check("constructions.pkl_g_continuous", jump <= 1e-12,
              [&] { return "d " + std::to_string(d) + " at " + num(b) + ": jump " + num(jump); });
      s.check("constructions.pkl_g_differentiable", djump <= 1e-12,
              [&] { return "d " + std::to_string(d) + " at " + num(b) + ": derivative jump " + num(djump); });
    }
    for (int i = 1; i <= 4000; ++i) {
      const double x = c.gamma * i / 4000.0;
      const double r = c.dg(x) * c.dg(x) / (2.0 * c.g(x));
      s.check("constructions.pkl_grid_ratio", r >= c.mu() * (1 - 1e-9),
              [&] { return "d " + std::to_string(d) + " x " + num(x) + ": ratio " + num(r); });
    }
  }

  const int d = std::max(6, d_grid);
  const PklInstance gf = build_pkl_gf_instance(d);
  const double delta = gf.construction.delta;
  const double t1 = std::log(1.0 / (2.0 * delta)) / 2.0;
  const Trajectory flow = gf_integrate(gf.objective, gf.x0, 1e-12, StopRule::until(t1));
  s.check("constructions.pkl_gf_checkpoint", std::abs(flow.final()(1) - 0.5) <= 1e-6,
          [&] { return "d " + std::to_string(d) + ": x_2(t1) = " + num(flow.final()(1)); });
  const double dist_gf = gf.objective.optimal_set()->distance(gf.x0);
  s.check("constructions.pkl_gf_distance_bound", dist_gf <= std::sqrt(2.0 * d) * std::log(d),
          [&] { return "d " + std::to_string(d) + ": dist " + num(dist_gf); });

  const PklInstance gd = build_pkl_gd_instance(d);
  const Trajectory steps = gd_run(gd.objective, gd.x0, gd.gd->eta,
                                  StopRule::steps(static_cast<std::size_t>(gd.gd->k1)));
  s.check("constructions.pkl_gd_checkpoint", std::abs(steps.final()(1) - 0.5) <= 1e-10,
          [&] { return "d " + std::to_string(d) + ": x_2(k1) = " + num(steps.final()(1)); });
  const double dist_gd = gd.objective.optimal_set()->distance(gd.x0);
  s.check("constructions.pkl_gd_distance_bound", dist_gd <= 4.0 * std::sqrt(d) * std::log(d),
          [&] { return "d " + std::to_string(d) + ": dist " + num(dist_gd); });
  const double k1_bound = 3.0 * std::log(1.0 / (2.0 * delta));
  s.check("constructions.pkl_gd_k1_bound", gd.gd->k1 <= k1_bound,
          [&] { return "d " + std::to_string(d) + ": k1 " + std::to_string(gd.gd->k1); });

  const Trajectory run = gd_run(gd.objective, gd.x0, gd.gd->eta, StopRule::norm(1e-6));
  const double mu = effective_pkl_mu(run, gd.objective, MuMode::min);
  s.check("analysis.effective_mu_at_least_declared", mu >= gd.construction.mu() * (1 - 1e-9),
          [&] { return "pkl d " + std::to_string(d) + ": mu " + num(mu); });

  for (int w : {2, 3, 11}) {
    const QuadLowerConstruction q = build_quad_lower(std::max(2, std::min(d_grid, 8)), w);
    for (double k : q.gd_checkpoints())
      s.check("constructions.quad_gd_checkpoints_integer", std::abs(k - std::round(k)) <= 1e-9 * k,
              [&] { return "omega " + std::to_string(w) + ": k " + num(k); });
    const QuadraticSpec spec = q.spec();
    const Objective obj = spec.objective();
    const Trajectory t = gd_run(obj, q.x0, 1.0 / spec.spectrum()(0), StopRule::steps(200));
    std::vector<Interval> xstar;
    for (Eigen::Index i = 0; i < spec.dimension(); ++i)
      xstar.push_back({spec.projection()(i), spec.projection()(i)});
    s.check("analysis.separable_no_overshoot", separable_no_overshoot_check(t, xstar),
            [&] { return "quad-geom omega " + std::to_string(w); });
  }
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

std::string SuiteReport::format() const {
  std::ostringstream s;
  for (const auto& r : results) {
    s << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases)";
    if (!r.passed) s << ": " << r.witness;
    s << '\n';
  }
  s << (passed() ? "suite passed" : "suite FAILED") << '\n';
  return s.str();
}

SuiteReport run_property_suite(const ExperimentConfig& cfg) {
  Suite s;
  const bool grid = !cfg.dims.empty() && !cfg.seeds.empty();

  for (int d : cfg.dims) {
    for (std::uint64_t seed : cfg.seeds) {
      SplitMix64 rng(seed * 0x100000001B3ULL + static_cast<std::uint64_t>(d));
      const std::string tag = " d=" + std::to_string(d) + " seed=" + std::to_string(seed);

      const QuadraticSpec full = QuadraticSpec::from_data(random_matrix(rng, d + 3, d),
                                                          random_vector(rng, d + 3, -1, 1),
                                                          random_vector(rng, d, -2, 2));
      quadratic_invariants(s, full, "data" + tag, rng);
      optimizer_invariants(s, full, "data" + tag, cfg, rng);
      if (d >= 2) {
        const QuadraticSpec deficient = QuadraticSpec::from_data(random_matrix(rng, d - 1, d),
                                                                 random_vector(rng, d - 1, -1, 1),
                                                                 random_vector(rng, d, -2, 2));
        quadratic_invariants(s, deficient, "rank-deficient" + tag, rng);
        optimizer_invariants(s, deficient, "rank-deficient" + tag, cfg, rng);
      }

      std::vector<Sampled> zoo;
      zoo.push_back({"data" + tag, full.objective(), -2, 2});
      zoo.push_back({"fsep-quartic" + tag, build_fsep_quartic(d, 0.1, 1.0), -1, 1});
      InstanceParams p;
      p.d = d;
      p.omega = 2.0;
      zoo.push_back({"quad-geom" + tag, make_instance("quad-geom", p).objective, -2, 2});
      if (d >= 2) {
        p.kappa = 100.0;
        p.seed = seed;
        zoo.push_back({"quad-random" + tag, make_instance("quad-random", p).objective, -2, 2});
      }
      p.d = std::max(6, d);
      const PklInstance pkl = build_pkl_gf_instance(p.d);
      zoo.push_back({"pkl-lower" + tag, pkl.objective, -1, pkl.construction.gamma + 2});
      for (const auto& z : zoo) objective_invariants(s, z, rng);

      if (d >= 2) {
        const QuadraticSpec rq = build_quad_random(d, 100.0, seed);
        const Objective obj = rq.objective();
        const Trajectory t = gd_run(obj, rq.x0(), 1.0 / rq.spectrum()(0), StopRule::steps(200));
        const double mu = effective_pkl_mu(t, obj, MuMode::min);
        s.check("analysis.effective_mu_at_least_declared", mu >= *obj.metadata().pkl_mu * (1 - 1e-9),
                [&] { return "quad-random" + tag + ": mu " + num(mu); });
      }
    }
  }

  if (grid) {
    bound_invariants(s);
    construction_invariants(s, cfg.dims.front());

    ExperimentConfig tiny = ExperimentConfig::defaults("quad-lower-gf");
    tiny.dims = {3};
    tiny.omegas = {2.0, 11.0};
    tiny.workers = 1;
    auto a = run_experiment(tiny);
    tiny.workers = 2;
    auto b = run_experiment(tiny);
    for (auto* rows : {&a, &b})
      for (auto& r : *rows) r.runtime_s = 0.0;
    s.check("harness.worker_count_independent", to_csv(a) == to_csv(b), [] { return "quad-lower-gf d=3"; });
  }

  s.declare("analysis.gd_self_contracted");
  if (cfg.inject_counterexample) {
    std::vector<Vector> pts(3, Vector(1));
    pts[0](0) = 8.0, pts[1](0) = -6.0, pts[2](0) = 4.5;
    const SelfContractedVerdict v = self_contracted_check(pts);
    s.check("analysis.gd_self_contracted", v.holds, [&] {
      return "injected eta=7/8 counterexample on x^2: witness (" + std::to_string((*v.witness)[0]) +
             ", " + std::to_string((*v.witness)[1]) + ", " + std::to_string((*v.witness)[2]) + ") " +
             num(v.far) + " > " + num(v.near);
    });
  }
  return std::move(s).report();
}

}  // namespace pathlen
