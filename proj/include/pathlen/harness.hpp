#ifndef PATHLEN_HARNESS_HPP
#define PATHLEN_HARNESS_HPP

#include "pathlen/analysis.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pathlen {

struct ExperimentConfig {
  std::string experiment;  // pkl-lower-gd | quad-lower-gf | quad-lower-gd | quad-random | bound-sweep | property-suite
  std::vector<int> dims;
  std::vector<double> omegas;
  std::vector<double> kappas;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> methods;  // gd, gf; bound-sweep also gd-sep, hb
  double quad_abs_tol = 1e-12;
  double ode_tol = 1e-10;
  double norm_stop = 1e-6;
  double coords_stop = 1e-2;
  std::size_t workers = 1;
  MuMode mu_mode = MuMode::min;
  std::size_t step_cap = 100'000'000;
  bool inject_counterexample = false;  // property-suite only
  bool f1_extended = false;            // pkl-lower-gd default grid up to e⁹ (long running)

  /// Defaults for a known experiment id.
  static ExperimentConfig defaults(std::string_view experiment);
  /// Parses a flat JSON object; keys override the defaults of its "experiment".
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  void validate() const;
};

const std::vector<std::string>& experiment_names();

/// ⌈·⌉ of n log-spaced values in [e^lo, e^hi], duplicates removed.
std::vector<int> log_spaced_dims(double log_lo, double log_hi, int n);

struct ResultRow {
  std::string experiment;
  int d = 0;
  std::optional<double> omega;
  std::optional<double> kappa_nominal;
  std::optional<double> kappa_effective;
  std::optional<std::string> mu_mode;
  double dist0 = 0.0;
  double zeta = 0.0;
  double ratio = 0.0;
  std::optional<double> bound_upper;
  std::optional<double> bound_lower;
  std::size_t steps = 0;
  double runtime_s = 0.0;
  std::optional<std::uint64_t> seed;
  std::string stop_reason;
  bool verify_bounds = true;  // false for rows that hit the step cap
};

/// Orders rows by (experiment, d, omega, seed) with remaining columns as tie breakers.
void sort_rows(std::vector<ResultRow>& rows);

/// lower ≤ ratio ≤ upper with relative slack; throws InvariantViolation naming the row.
void verify_sandwich(const std::vector<ResultRow>& rows, double rel_slack = 1e-9);

std::vector<ResultRow> run_pkl_lower_gd(const ExperimentConfig& cfg);
std::vector<ResultRow> run_quad_lower(const ExperimentConfig& cfg);
std::vector<ResultRow> run_quad_random(const ExperimentConfig& cfg);
std::vector<ResultRow> run_bound_sweep(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment (not property-suite) and sorts the rows.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

/// Runs `tasks` on a pool of `workers` threads; results keep task order.
/// The first exception (by task index) is rethrown after all tasks finish.
std::vector<ResultRow> run_parallel(
    const std::vector<std::function<std::vector<ResultRow>()>>& tasks, std::size_t workers);

}  // namespace pathlen

#endif  // PATHLEN_HARNESS_HPP
