#include "pathlen/harness.hpp"

#include "pathlen/bounds.hpp"
#include "pathlen/constructions.hpp"
#include "pathlen/registry.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace pathlen {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool has_method(const ExperimentConfig& cfg, std::string_view m) {
  return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
}

void fill_lengths(ResultRow& row, const PathLengthReport& r) {
  row.dist0 = r.dist0;
  row.zeta = r.zeta;
  row.ratio = r.ratio;
}

StopRule capped(StopRule rule, const ExperimentConfig& cfg) {
  rule.cap = cfg.step_cap;
  rule.record_every = std::max<std::size_t>(cfg.step_cap, 1);  // endpoints only
  rule.dense_output = false;
  return rule;
}

// Steps GD with η = 1/(2a₁) needs before max_{i<d}|xᵢ| < ε on the geometric construction.
double projected_gd_steps(const QuadraticSpec& spec, double eta, double eps) {
  const Vector& a = spec.spectrum();
  if (a.size() < 2) return 0.0;
  double worst = 0.0;
  const Vector& x0 = spec.x0();
  for (Eigen::Index i = 0; i + 1 < x0.size(); ++i) {
    const double start = std::abs(x0(i));
    if (start < eps) continue;
    const double rate = std::abs(1.0 - eta * a(i));
    if (rate >= 1.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::log(eps / start) / std::log(rate));
  }
  return worst;
}

ResultRow quad_gf_row(const std::string& experiment, const QuadraticSpec& spec,
                      const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  ResultRow row;
  row.experiment = experiment;
  row.d = static_cast<int>(spec.dimension());
  row.kappa_nominal = spec.condition_number();
  const PathLengthReport r = path_length_quadratic_gf(spec, cfg.quad_abs_tol);
  fill_lengths(row, r);
  row.steps = r.evaluations;
  row.stop_reason = "quadrature";
  std::vector<double> s(spec.spectrum().data(), spec.spectrum().data() + spec.rank());
  row.bound_upper = bound_quadratic(s, Flow::gf);
  row.runtime_s = seconds_since(t0);
  return row;
}

ResultRow quad_gd_row(const std::string& experiment, const QuadraticSpec& spec,
                      const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  ResultRow row;
  row.experiment = experiment;
  row.d = static_cast<int>(spec.dimension());
  row.kappa_nominal = spec.condition_number();
  std::vector<double> s(spec.spectrum().data(), spec.spectrum().data() + spec.rank());
  row.bound_upper = bound_quadratic(s, Flow::gd);

  const double eta = 1.0 / (2.0 * spec.spectrum()(0));
  const double projected = projected_gd_steps(spec, eta, cfg.coords_stop);
  if (projected > static_cast<double>(cfg.step_cap)) {
    row.dist0 = spec.dist0();
    row.zeta = row.ratio = kNaN;
    row.steps = cfg.step_cap;
    row.stop_reason = std::string(to_string(StopReason::cap));
    row.verify_bounds = false;
    row.runtime_s = seconds_since(t0);
    return row;
  }
  const Objective obj = spec.objective();
  const Trajectory traj =
      gd_run(obj, spec.x0(), eta, capped(StopRule::coords_except_last(cfg.coords_stop), cfg));
  fill_lengths(row, path_length_discrete(traj, obj.optimal_set()));
  row.steps = traj.steps;
  row.stop_reason = std::string(to_string(traj.stop));
  row.verify_bounds = traj.stop != StopReason::cap;
  row.runtime_s = seconds_since(t0);
  return row;
}

// Runs one zoo instance under one method for the bound sweep.
std::vector<ResultRow> sweep_rows(const Instance& inst, const ExperimentConfig& cfg,
                                  std::optional<std::uint64_t> seed) {
  const Objective& obj = inst.objective;
  const auto& meta = obj.metadata();
  if (!meta.lipschitz || !meta.pkl_mu) return {};
  const double L = *meta.lipschitz;
  const double mu = *meta.pkl_mu;
  const int d = static_cast<int>(obj.dimension());
  const std::optional<OptimalSet>& optset = obj.optimal_set();
  const double g0 = obj.gradient(inst.x0).norm();
  const StopRule stop = capped(StopRule::grad(std::max(1e-14 * g0, 1e-300)), cfg);
  const std::string prefix = "bound-sweep/" + inst.name + "/";

  auto base_row = [&](const std::string& method) {
    ResultRow row;
    row.experiment = prefix + method;
    row.d = d;
    row.kappa_nominal = L / mu;
    row.seed = seed;
    return row;
  };
  auto finish = [](ResultRow& row, const PathLengthReport& r, double bound, Clock::time_point t0) {
    fill_lengths(row, r);
    row.bound_upper = bound;
    row.steps = r.steps;
    row.stop_reason = r.stop ? std::string(to_string(*r.stop)) : "quadrature";
    row.verify_bounds = r.stop != StopReason::cap;
    row.runtime_s = seconds_since(t0);
  };

  std::vector<ResultRow> rows;
  if (has_method(cfg, "gd") || has_method(cfg, "gd-sep")) {
    const auto t0 = Clock::now();
    const PathLengthReport r = path_length_discrete(gd_run(obj, inst.x0, 1.0 / L, stop), optset);
    if (has_method(cfg, "gd")) {
      ResultRow row = base_row("gd");
      finish(row, r, bound_pkl(mu, L, Flow::gd), t0);
      rows.push_back(row);
    }
    if (has_method(cfg, "gd-sep") && obj.separable()) {
      ResultRow row = base_row("gd-sep");
      finish(row, r, bound_separable<double>(d), t0);
      rows.push_back(row);
    }
  }
  if (has_method(cfg, "gf")) {
    const auto t0 = Clock::now();
    ResultRow row = base_row("gf");
    if (inst.quadratic) {
      const PathLengthReport r = path_length_quadratic_gf(*inst.quadratic, cfg.quad_abs_tol);
      finish(row, r, bound_pkl(mu, L, Flow::gf), t0);
      row.steps = r.evaluations;
      row.stop_reason = "quadrature";
    } else {
      // An explicit integrator hovers near tol once the state is that small, so
      // the flow stops earlier than the discrete methods and relies on the tail.
      StopRule flow_stop = StopRule::grad(std::max(1e-8 * g0, 1e-300));
      flow_stop.dense_output = false;
      flow_stop.record_every = 1'000'000'000;
      finish(row, path_length_flow(gf_integrate(obj, inst.x0, cfg.ode_tol, flow_stop), optset),
             bound_pkl(mu, L, Flow::gf), t0);
    }
    rows.push_back(row);
  }
  // Heavy ball needs strong convexity: quadratics and the F_sep class.
  const bool strongly_convex = inst.quadratic.has_value() || inst.name == "fsep-quartic";
  if (has_method(cfg, "hb") && strongly_convex) {
    const auto t0 = Clock::now();
    const HeavyBallParams hb = hb_params(mu, L);
    ResultRow row = base_row("hb");
    finish(row, path_length_discrete(heavy_ball_run(obj, inst.x0, hb.alpha, hb.beta, stop), optset),
           bound_hb(mu, L), t0);
    rows.push_back(row);
  }
  return rows;
}

template <class T>
std::vector<T> json_list(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array()) throw InputError("config key '" + key + "' must be a list");
  std::vector<T> out;
  for (const auto& e : v) out.push_back(e.get<T>());
  return out;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"pkl-lower-gd", "quad-lower-gf", "quad-lower-gd",
                                                 "quad-random",  "bound-sweep",   "property-suite"};
  return names;
}

std::vector<int> log_spaced_dims(double log_lo, double log_hi, int n) {
  if (n < 1 || !(log_hi >= log_lo)) throw InputError("log_spaced_dims: bad range");
  std::vector<int> dims;
  for (int i = 0; i < n; ++i) {
    const double l = n == 1 ? log_lo : log_lo + (log_hi - log_lo) * i / (n - 1);
    const int d = static_cast<int>(std::ceil(std::exp(l) - 1e-9));
    if (dims.empty() || dims.back() != d) dims.push_back(d);
  }
  return dims;
}

ExperimentConfig ExperimentConfig::defaults(std::string_view experiment) {
  ExperimentConfig c;
  c.experiment = std::string(experiment);
  if (experiment == "pkl-lower-gd") {
    c.dims = log_spaced_dims(2.0, 5.0, 15);
  } else if (experiment == "quad-lower-gf" || experiment == "quad-lower-gd") {
    c.dims = {20};
    c.omegas = {1.1, 1.3, 1.6, 2.0};
    c.methods = {experiment == "quad-lower-gf" ? "gf" : "gd"};
  } else if (experiment == "quad-random") {
    c.dims = {20};
    c.kappas = {1e6};
    c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    c.methods = {"gf"};
  } else if (experiment == "bound-sweep") {
    c.dims = {3, 6};
    c.omegas = {2.0, 11.0};
    c.kappas = {100.0, 1e4};
    c.seeds = {1, 2};
    c.methods = {"gd", "gd-sep", "gf", "hb"};
  } else if (experiment == "property-suite") {
    c.dims = {2, 3, 5};
    c.seeds = {1, 2, 3};
  } else {
    throw InputError("unknown experiment '" + std::string(experiment) + "'");
  }
  return c;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");
  if (!j.contains("experiment") || !j["experiment"].is_string())
    throw InputError("config requires a string key 'experiment'");
  ExperimentConfig c = defaults(j["experiment"].get<std::string>());

  try {
    if (j.contains("f1_extended")) {
      c.f1_extended = j["f1_extended"].get<bool>();
      if (c.f1_extended && c.experiment == "pkl-lower-gd") c.dims = log_spaced_dims(2.0, 9.0, 15);
    }
    for (const auto& [key, v] : j.items()) {
      if (key == "experiment" || key == "f1_extended") continue;
      if (key == "dims") c.dims = json_list<int>(v, key);
      else if (key == "omegas") c.omegas = json_list<double>(v, key);
      else if (key == "kappas") c.kappas = json_list<double>(v, key);
      else if (key == "seeds") c.seeds = json_list<std::uint64_t>(v, key);
      else if (key == "methods") c.methods = json_list<std::string>(v, key);
      else if (key == "quad_abs_tol") c.quad_abs_tol = v.get<double>();
      else if (key == "ode_tol") c.ode_tol = v.get<double>();
      else if (key == "norm_stop") c.norm_stop = v.get<double>();
      else if (key == "coords_stop") c.coords_stop = v.get<double>();
      else if (key == "workers") c.workers = v.get<std::size_t>();
      else if (key == "mu_mode") c.mu_mode = parse_mu_mode(v.get<std::string>());
      else if (key == "step_cap") c.step_cap = v.get<std::size_t>();
      else if (key == "inject_counterexample") c.inject_counterexample = v.get<bool>();
      else throw InputError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config value has the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::validate() const {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw InputError("unknown experiment '" + experiment + "'");
  if (!(quad_abs_tol > 0) || !(ode_tol > 0) || !(norm_stop > 0) || !(coords_stop > 0))
    throw InputError("tolerances must be positive");
  if (workers < 1) throw InputError("workers must be >= 1");
  if (step_cap < 1) throw InputError("step_cap must be >= 1");
  for (int d : dims)
    if (d < 1) throw InputError("dimensions must be >= 1");
  for (double w : omegas)
    if (!(w > 1)) throw InputError("omega values must be > 1");
  for (double k : kappas)
    if (!(k > 1)) throw InputError("kappa values must be > 1");
  static const std::set<std::string> known_methods = {"gd", "gf", "gd-sep", "hb"};
  for (const auto& m : methods)
    if (!known_methods.count(m)) throw InputError("unknown method '" + m + "'");
  if (experiment == "property-suite") return;
  if (dims.empty()) throw InputError("parameter grid is empty (dims)");
  if ((experiment == "quad-lower-gf" || experiment == "quad-lower-gd") && omegas.empty())
    throw InputError("parameter grid is empty (omegas)");
  if (experiment == "quad-random" && (kappas.empty() || seeds.empty()))
    throw InputError("parameter grid is empty (kappas/seeds)");
  if (experiment == "pkl-lower-gd")
    for (int d : dims)
      if (d < 6) throw InputError("pkl-lower-gd requires every d >= 6 (got " + std::to_string(d) + ")");
}

void sort_rows(std::vector<ResultRow>& rows) {
  auto key = [](const ResultRow& r) {
    return std::tuple(r.experiment, r.d, r.omega.value_or(-1.0),
                      r.seed ? static_cast<long double>(*r.seed) : -1.0L,
                      r.kappa_nominal.value_or(-1.0), r.mu_mode.value_or(""));
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const ResultRow& a, const ResultRow& b) { return key(a) < key(b); });
}

void verify_sandwich(const std::vector<ResultRow>& rows, double rel_slack) {
  for (const auto& r : rows) {
    if (!r.verify_bounds || std::isnan(r.ratio)) continue;
    std::ostringstream where;
    where << r.experiment << " d=" << r.d;
    if (r.omega) where << " omega=" << *r.omega;
    if (r.kappa_nominal) where << " kappa=" << *r.kappa_nominal;
    if (r.seed) where << " seed=" << *r.seed;
    if (r.bound_upper && r.ratio > *r.bound_upper * (1 + rel_slack)) {
      std::ostringstream os;
      os << "upper bound violated at " << where.str() << ": ratio " << r.ratio << " > " << *r.bound_upper;
      throw InvariantViolation(os.str());
    }
    if (r.bound_lower && r.ratio < *r.bound_lower * (1 - rel_slack)) {
      std::ostringstream os;
      os << "lower bound violated at " << where.str() << ": ratio " << r.ratio << " < " << *r.bound_lower;
      throw InvariantViolation(os.str());
    }
  }
}

std::vector<ResultRow> run_parallel(
    const std::vector<std::function<std::vector<ResultRow>()>>& tasks, std::size_t workers) {
  std::vector<std::vector<ResultRow>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(workers, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<ResultRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::vector<ResultRow> run_pkl_lower_gd(const ExperimentConfig& cfg) {
  std::vector<std::function<std::vector<ResultRow>()>> tasks;
  for (int d : cfg.dims) {
    tasks.emplace_back([d, &cfg]() -> std::vector<ResultRow> {
      try {
        const auto t0 = Clock::now();
        const PklInstance inst = build_pkl_gd_instance(d);
        const Objective& obj = inst.objective;
        const double fstar = *obj.metadata().min_value;

        // The effective constant is aggregated on the fly so the trajectory
        // itself can be recorded at its endpoints only.
        double agg = cfg.mu_mode == MuMode::min ? std::numeric_limits<double>::infinity() : 0.0;
        bool any = false;
        StopRule stop = capped(StopRule::norm(cfg.norm_stop), cfg);
        stop.on_iterate = [&](std::size_t, const Vector& x, const Vector& g) {
          const double gap = obj.value(x) - fstar;
          if (!(gap > 1e-300)) return;
          const double r = g.squaredNorm() / (2.0 * gap);
          agg = cfg.mu_mode == MuMode::min ? std::min(agg, r) : std::max(agg, r);
          any = true;
        };
        const Trajectory traj = gd_run(obj, inst.x0, inst.gd->eta, stop);
        if (!any) throw NumericalError("effective_pkl_mu: ratio undefined (every iterate is optimal)");

        ResultRow row;
        row.experiment = "pkl-lower-gd";
        row.d = d;
        row.kappa_nominal = inst.construction.kappa();
        row.kappa_effective = inst.construction.lipschitz() / agg;
        row.mu_mode = std::string(to_string(cfg.mu_mode));
        fill_lengths(row, path_length_discrete(traj, obj.optimal_set()));
        row.bound_upper = bound_pkl(inst.construction.mu(), inst.construction.lipschitz(), Flow::gd);
        if (*row.kappa_nominal >= 216)
          row.bound_lower = lower_bound_pkl<double>(d, *row.kappa_nominal, LowerPkl::gd);
        row.steps = traj.steps;
        row.stop_reason = std::string(to_string(traj.stop));
        row.verify_bounds = traj.stop != StopReason::cap;
        row.runtime_s = seconds_since(t0);
        return {row};
      } catch (const InputError& e) {
        throw InputError("pkl-lower-gd at d=" + std::to_string(d) + ": " + e.what());
      } catch (const NumericalError& e) {
        throw NumericalError("pkl-lower-gd at d=" + std::to_string(d) + ": " + e.what());
      }
    });
  }
  return run_parallel(tasks, cfg.workers);
}

std::vector<ResultRow> run_quad_lower(const ExperimentConfig& cfg) {
  const bool gf = cfg.experiment == "quad-lower-gf" || has_method(cfg, "gf");
  const bool gd = cfg.experiment == "quad-lower-gd" || has_method(cfg, "gd");
  std::vector<std::function<std::vector<ResultRow>()>> tasks;
  for (int d : cfg.dims) {
    for (double omega : cfg.omegas) {
      auto finish = [d, omega](ResultRow row, Flow which) {
        row.omega = omega;
        if (*row.kappa_nominal >= 5) row.bound_lower = lower_bound_quadratic(d, *row.kappa_nominal, which);
        return row;
      };
      if (gf)
        tasks.emplace_back([=, &cfg]() -> std::vector<ResultRow> {
          const QuadLowerConstruction q = build_quad_lower(d, omega);
          return {finish(quad_gf_row("quad-lower-gf", q.spec(), cfg), Flow::gf)};
        });
      if (gd)
        tasks.emplace_back([=, &cfg]() -> std::vector<ResultRow> {
          const QuadLowerConstruction q = build_quad_lower(d, omega);
          return {finish(quad_gd_row("quad-lower-gd", q.spec(), cfg), Flow::gd)};
        });
    }
  }
  return run_parallel(tasks, cfg.workers);
}

std::vector<ResultRow> run_quad_random(const ExperimentConfig& cfg) {
  const bool gf = cfg.methods.empty() || has_method(cfg, "gf");
  const bool gd = has_method(cfg, "gd");
  std::vector<std::function<std::vector<ResultRow>()>> tasks;
  for (int d : cfg.dims)
    for (double kappa : cfg.kappas)
      for (std::uint64_t seed : cfg.seeds)
        tasks.emplace_back([=, &cfg]() -> std::vector<ResultRow> {
          const QuadraticSpec spec = build_quad_random(d, kappa, seed);
          std::vector<ResultRow> rows;
          if (gf) rows.push_back(quad_gf_row("quad-random-gf", spec, cfg));
          if (gd) rows.push_back(quad_gd_row("quad-random-gd", spec, cfg));
          for (auto& r : rows) {
            r.seed = seed;
            r.kappa_nominal = kappa;
          }
          return rows;
        });
  return run_parallel(tasks, cfg.workers);
}

std::vector<ResultRow> run_bound_sweep(const ExperimentConfig& cfg) {
  std::vector<std::function<std::vector<ResultRow>()>> tasks;
  auto add = [&](std::string name, InstanceParams p, std::optional<std::uint64_t> seed) {
    tasks.emplace_back([name, p, seed, &cfg]() -> std::vector<ResultRow> {
      const Instance inst = make_instance(name, p);
      auto rows = sweep_rows(inst, cfg, seed);
      for (auto& r : rows)
        if (name == "quad-geom") r.omega = p.omega;
      return rows;
    });
  };
  for (int d : cfg.dims) {
    InstanceParams p;
    p.d = d;
    for (double omega : cfg.omegas) {
      p.omega = omega;
      add("quad-geom", p, std::nullopt);
    }
    if (d >= 2)
      for (double kappa : cfg.kappas)
        for (std::uint64_t seed : cfg.seeds) {
          p.kappa = kappa;
          p.seed = seed;
          add("quad-random", p, seed);
        }
    add("fsep-quartic", p, std::nullopt);
    if (d >= 6) add("pkl-lower-gd", p, std::nullopt);
  }
  return run_parallel(tasks, cfg.workers);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  if (cfg.experiment == "pkl-lower-gd") rows = run_pkl_lower_gd(cfg);
  else if (cfg.experiment == "quad-lower-gf" || cfg.experiment == "quad-lower-gd") rows = run_quad_lower(cfg);
  else if (cfg.experiment == "quad-random") rows = run_quad_random(cfg);
  else if (cfg.experiment == "bound-sweep") rows = run_bound_sweep(cfg);
  else throw InputError("experiment '" + cfg.experiment + "' does not produce result rows");
  sort_rows(rows);
  return rows;
}

}  // namespace pathlen
