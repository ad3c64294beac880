#ifndef PATHLEN_REGISTRY_HPP
#define PATHLEN_REGISTRY_HPP

#include "pathlen/objectives.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pathlen {

struct InstanceParams {
  int d = 6;
  double omega = 11.0;
  double kappa = 100.0;
  std::uint64_t seed = 0;
  double quartic_coeff = 0.1;
  double box_halfwidth = 1.0;
  std::optional<double> target_kappa;
};

/// A named objective with its canonical starting point.
struct Instance {
  std::string name;
  Objective objective;
  Vector x0;
  std::optional<QuadraticSpec> quadratic;
  std::optional<double> eta;  // step size prescribed by the construction, if any
};

/// quad-geom, quad-random, fsep-quartic, pkl-lower-gf, pkl-lower-gd.
const std::vector<std::string>& instance_names();
Instance make_instance(std::string_view name, const InstanceParams& params = {});

}  // namespace pathlen

#endif  // PATHLEN_REGISTRY_HPP
