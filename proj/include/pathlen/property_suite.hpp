#ifndef PATHLEN_PROPERTY_SUITE_HPP
#define PATHLEN_PROPERTY_SUITE_HPP

#include "pathlen/harness.hpp"

#include <string>
#include <vector>

namespace pathlen {

struct InvariantResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string witness;  // first failing case
};

struct SuiteReport {
  std::vector<InvariantResult> results;

  bool passed() const;
  /// One line per invariant: PASS/FAIL, name, case count, witness on failure.
  std::string format() const;
};

/// Runs every module invariant over cfg.dims × cfg.seeds. Grid-free checks
/// (bound formulas, construction breakpoints) run only when the grid is
/// non-empty, so an empty grid passes vacuously.
SuiteReport run_property_suite(const ExperimentConfig& cfg);

}  // namespace pathlen

#endif  // PATHLEN_PROPERTY_SUITE_HPP
