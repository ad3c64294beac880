// Command-line front end: single trajectories, bound evaluation, experiments,
// self-contractedness checks and the property suite.
//
// Exit codes: 0 success, 1 invariant violation or numerical failure, 2 bad input.

#include "pathlen/analysis.hpp"
#include "pathlen/bounds.hpp"
#include "pathlen/csv.hpp"
#include "pathlen/harness.hpp"
#include "pathlen/property_suite.hpp"
#include "pathlen/registry.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace fs = std::filesystem;
using namespace pathlen;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + item + "'");
    }
  }
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// "norm:1e-6", "coords:1e-2", "grad:1e-8", "steps:1000", "horizon:5"
StopRule parse_stop(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InputError("stop rule must look like kind:value");
  const std::string kind = spec.substr(0, colon);
  const std::vector<double> v = parse_list(spec.substr(colon + 1));
  if (v.size() != 1 || !(v[0] >= 0)) throw InputError("stop rule needs one non-negative value");
  if (kind == "norm") return StopRule::norm(v[0]);
  if (kind == "coords") return StopRule::coords_except_last(v[0]);
  if (kind == "grad") return StopRule::grad(v[0]);
  if (kind == "steps") return StopRule::steps(static_cast<std::size_t>(v[0]));
  if (kind == "horizon") return StopRule::until(v[0]);
  throw InputError("unknown stop rule '" + kind + "' (norm, coords, grad, steps, horizon)");
}

struct RunOptions {
  std::string objective = "quad-geom";
  InstanceParams params;
  std::string x0;
  std::optional<double> eta, alpha, beta, lo, hi;
  double tol = 1e-10;
  std::string stop = "grad:1e-10";
  std::string csv_out;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--objective", o.objective, "Registry name")->capture_default_str();
  cmd->add_option("--d", o.params.d, "Dimension")->capture_default_str();
  cmd->add_option("--omega", o.params.omega, "quad-geom ratio")->capture_default_str();
  cmd->add_option("--kappa", o.params.kappa, "quad-random condition number")->capture_default_str();
  cmd->add_option("--seed", o.params.seed, "quad-random seed")->capture_default_str();
  cmd->add_option("--coeff", o.params.quartic_coeff, "fsep-quartic quartic coefficient")->capture_default_str();
  cmd->add_option("--box", o.params.box_halfwidth, "fsep-quartic box half-width")->capture_default_str();
  cmd->add_option("--x0", o.x0, "Comma-separated start point (default: the instance's)");
  cmd->add_option("--stop", o.stop, "norm:E | coords:E | grad:E | steps:N | horizon:T")->capture_default_str();
  cmd->add_option("--csv-out", o.csv_out, "Write the recorded iterates here");
}

void write_trajectory(const Trajectory& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << (t.kind == TrajectoryKind::discrete ? "k" : "t");
  for (Eigen::Index i = 0; i < t.initial().size(); ++i) out << ",x" << i + 1;
  out << '\n';
  for (std::size_t k = 0; k < t.size(); ++k) {
    out << format_double(t.times[k]);
    for (Eigen::Index i = 0; i < t.points[k].size(); ++i) out << ',' << format_double(t.points[k](i));
    out << '\n';
  }
}

int run_trajectory(const std::string& method, const RunOptions& o) {
  const Instance inst = make_instance(o.objective, o.params);
  const Objective& obj = inst.objective;
  Vector x0 = inst.x0;
  if (!o.x0.empty()) x0 = to_vector(parse_list(o.x0));
  const StopRule stop = parse_stop(o.stop);
  const auto& meta = obj.metadata();

  Trajectory traj;
  if (method == "gd" || method == "pgd") {
    double eta;
    if (o.eta) eta = *o.eta;
    else if (inst.eta) eta = *inst.eta;
    else if (meta.lipschitz) eta = 1.0 / *meta.lipschitz;
    else throw InputError("--eta is required for this objective");
    if (method == "gd") {
      traj = gd_run(obj, x0, eta, stop);
    } else {
      const double inf = std::numeric_limits<double>::infinity();
      const Interval iv{o.lo.value_or(-inf), o.hi.value_or(inf)};
      traj = pgd_run(obj, box_projector(std::vector<Interval>(x0.size(), iv)), x0, eta, stop);
    }
  } else if (method == "hb") {
    HeavyBallParams p{};
    if (o.alpha && o.beta) p = {*o.alpha, *o.beta};
    else if (meta.lipschitz && meta.pkl_mu) p = hb_params(*meta.pkl_mu, *meta.lipschitz);
    else throw InputError("--alpha and --beta are required for this objective");
    traj = heavy_ball_run(obj, x0, p.alpha, p.beta, stop);
  } else {
    traj = gf_integrate(obj, x0, o.tol, stop);
  }

  // The constrained minimizer set of a projected run is not known in general.
  const std::optional<OptimalSet> optset = method == "pgd" ? std::nullopt : obj.optimal_set();
  const PathLengthReport r = method == "gf" ? path_length_flow(traj, optset) : path_length_discrete(traj, optset);
  std::cout << "objective   " << obj.name() << " (d=" << obj.dimension() << ")\n"
            << "stop        " << to_string(traj.stop) << " after " << traj.steps << " steps\n"
            << "zeta        " << format_double(r.zeta) << " (raw " << format_double(r.zeta_raw)
            << ", tail " << format_double(r.tail) << ")\n"
            << (r.dist0_is_chord ? "chord       " : "dist0       ") << format_double(r.dist0) << '\n'
            << "ratio       " << format_double(r.ratio) << '\n';
  if (method == "gf") std::cout << "chord sum   " << format_double(traj.path_length) << '\n';
  if (meta.lipschitz_region && !traj.points.empty()) {
    for (const Vector& x : traj.points)
      if (!obj.within_lipschitz_region(x)) {
        std::cerr << "warning: trajectory leaves the region on which L was declared\n";
        break;
      }
  }
  if (!o.csv_out.empty()) write_trajectory(traj, o.csv_out);
  return 0;
}

std::vector<Vector> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::vector<Vector> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream tokens(line);
    std::vector<double> v;
    for (std::string tok; tokens >> tok;) {
      const std::vector<double> one = parse_list(tok);
      v.insert(v.end(), one.begin(), one.end());
    }
    if (v.empty()) continue;
    if (!pts.empty() && static_cast<Eigen::Index>(v.size()) != pts.front().size())
      throw InputError("points in " + path + " differ in dimension");
    pts.push_back(to_vector(v));
  }
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-length analysis of gradient methods"};
  app.require_subcommand(1);

  RunOptions gd_opt, gf_opt, hb_opt, pgd_opt;
  auto* run_gd = app.add_subcommand("run-gd", "Gradient descent trajectory");
  add_run_options(run_gd, gd_opt);
  run_gd->add_option("--eta", gd_opt.eta, "Step size (default: construction step or 1/L)");
  auto* run_gf = app.add_subcommand("run-gf", "Gradient flow by adaptive integration");
  add_run_options(run_gf, gf_opt);
  run_gf->add_option("--tol", gf_opt.tol, "Integrator tolerance")->capture_default_str();
  auto* run_hb = app.add_subcommand("run-hb", "Heavy-ball trajectory");
  add_run_options(run_hb, hb_opt);
  run_hb->add_option("--alpha", hb_opt.alpha, "Step (default: Polyak parameters)");
  run_hb->add_option("--beta", hb_opt.beta, "Momentum (default: Polyak parameters)");
  auto* run_pgd = app.add_subcommand("run-pgd", "Projected gradient descent onto a box");
  add_run_options(run_pgd, pgd_opt);
  run_pgd->add_option("--eta", pgd_opt.eta, "Step size");
  run_pgd->add_option("--lo", pgd_opt.lo, "Box lower bound per coordinate");
  run_pgd->add_option("--hi", pgd_opt.hi, "Box upper bound per coordinate");

  std::string bound_name;
  BoundInputs bin;
  std::string spectrum;
  bool list_bounds = false;
  auto* bounds = app.add_subcommand("bounds", "Evaluate a named path-length bound");
  bounds->add_option("name", bound_name, "Bound name");
  bounds->add_flag("--list", list_bounds, "List bound names");
  bounds->add_option("--A", bin.A);
  bounds->add_option("--c", bin.c);
  bounds->add_option("--eta", bin.eta);
  bounds->add_option("--L", bin.L);
  bounds->add_option("--mu", bin.mu);
  bounds->add_option("--kappa", bin.kappa);
  bounds->add_option("--d", bin.d);
  bounds->add_option("--spectrum", spectrum, "Comma-separated descending spectrum");

  std::string exp_id, config_path, out_dir = ".", plot;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment and write CSV");
  experiment->add_option("id", exp_id, "Experiment id")->required();
  experiment->add_option("--config", config_path, "JSON config (keys override defaults)");
  experiment->add_option("--out", out_dir, "Output directory")->capture_default_str();
  experiment->add_option("--workers", workers, "Worker threads");
  experiment->add_option("--seed", seed, "Base seed; replaces the seed list with seed, seed+1, ...");

  std::string points_path;
  auto* check = app.add_subcommand("check", "Trajectory checks");
  auto* self_contracted = check->add_subcommand("self-contracted", "Exact self-contractedness check");
  self_contracted->add_option("--points", points_path, "One point per line, comma or space separated")
      ->required();
  check->require_subcommand(1);

  bool inject = false;
  std::string suite_config;
  auto* suite = app.add_subcommand("suite", "Run the property suite");
  suite->add_option("--config", suite_config, "JSON config with dims/seeds");
  suite->add_flag("--inject-counterexample", inject, "Add the eta = 7/8 counterexample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_gd->parsed()) return run_trajectory("gd", gd_opt);
    if (run_gf->parsed()) return run_trajectory("gf", gf_opt);
    if (run_hb->parsed()) return run_trajectory("hb", hb_opt);
    if (run_pgd->parsed()) return run_trajectory("pgd", pgd_opt);

    if (bounds->parsed()) {
      if (list_bounds || bound_name.empty()) {
        for (const auto& n : bound_names()) std::cout << n << '\n';
        return list_bounds ? 0 : 2;
      }
      if (!spectrum.empty()) bin.spectrum = parse_list(spectrum);
      const BoundReport<double> r = evaluate_bound(bound_name, bin);
      std::cout << r.name << ' ' << (r.log2_scale ? "log2_factor " : "factor ") << format_double(r.factor)
                << " base " << to_string(r.base) << '\n';
      for (const auto& [k, v] : r.inputs) std::cout << "  " << k << " = " << format_double(v) << '\n';
      if (!r.kappa_j.empty()) {
        std::cout << "  kappa_j =";
        for (double k : r.kappa_j) std::cout << ' ' << format_double(k);
        std::cout << '\n';
      }
      return 0;
    }

    if (experiment->parsed()) {
      ExperimentConfig cfg = config_path.empty() ? ExperimentConfig::defaults(exp_id)
                                                 : ExperimentConfig::load(config_path);
      if (cfg.experiment != exp_id)
        throw InputError("config is for '" + cfg.experiment + "', not '" + exp_id + "'");
      if (workers) cfg.workers = *workers;
      if (seed) {
        const std::size_t n = std::max<std::size_t>(cfg.seeds.size(), 1);
        cfg.seeds.clear();
        for (std::size_t i = 0; i < n; ++i) cfg.seeds.push_back(*seed + i);
      }
      cfg.validate();
      if (cfg.experiment == "property-suite") {
        const SuiteReport rep = run_property_suite(cfg);
        std::cout << rep.format();
        return rep.passed() ? 0 : 1;
      }
      fs::create_directories(out_dir);
      const std::vector<ResultRow> rows = run_experiment(cfg);
      const fs::path csv = fs::path(out_dir) / (cfg.experiment + ".csv");
      emit_csv(rows, csv);
      std::cout << "wrote " << csv.string() << " (" << rows.size() << " rows)\n";
      std::optional<PlotFigure> fig;
      if (cfg.experiment == "pkl-lower-gd") fig = PlotFigure::f1_ratio_vs_kappa;
      else if (cfg.experiment.rfind("quad-", 0) == 0) fig = PlotFigure::f2_ratio_vs_logkappa;
      if (fig) {
        const fs::path script = fs::path(out_dir) / (cfg.experiment + "-plot.py");
        std::ofstream(script, std::ios::binary) << emit_plot_script(rows, *fig, csv.filename().string());
        std::cout << "wrote " << script.string() << '\n';
      }
      verify_sandwich(rows);
      return 0;
    }

    if (self_contracted->parsed()) {
      const SelfContractedVerdict v = self_contracted_check(read_points(points_path));
      if (v.holds) {
        std::cout << "self-contracted: yes (slack " << format_double(v.slack) << ")\n";
        return 0;
      }
      const auto& w = *v.witness;
      std::cout << "self-contracted: no, witness (" << w[0] << ", " << w[1] << ", " << w[2] << "): "
                << format_double(v.far) << " > " << format_double(v.near) << '\n';
      return 1;
    }

    if (suite->parsed()) {
      ExperimentConfig cfg = suite_config.empty() ? ExperimentConfig::defaults("property-suite")
                                                  : ExperimentConfig::load(suite_config);
      if (inject) cfg.inject_counterexample = true;
      const SuiteReport rep = run_property_suite(cfg);
      std::cout << rep.format();
      return rep.passed() ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
