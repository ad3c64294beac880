#include "pathlen/registry.hpp"

#include "pathlen/constructions.hpp"

namespace pathlen {

const std::vector<std::string>& instance_names() {
  static const std::vector<std::string> names = {"quad-geom", "quad-random", "fsep-quartic",
                                                 "pkl-lower-gf", "pkl-lower-gd"};
  return names;
}

Instance make_instance(std::string_view name, const InstanceParams& p) {
  if (name == "quad-geom") {
    const QuadLowerConstruction q = build_quad_lower(p.d, p.omega);
    QuadraticSpec spec = q.spec();
    return {"quad-geom", spec.objective("quad-geom"), q.x0, spec, q.gd_step()};
  }
  if (name == "quad-random") {
    QuadraticSpec spec = build_quad_random(p.d, p.kappa, p.seed);
    return {"quad-random", spec.objective("quad-random"), spec.x0(), spec,
            1.0 / (2.0 * spec.spectrum()(0))};
  }
  if (name == "fsep-quartic") {
    Objective obj = build_fsep_quartic(p.d, p.quartic_coeff, p.box_halfwidth);
    return {"fsep-quartic", obj, Vector::Constant(p.d, p.box_halfwidth), std::nullopt,
            std::nullopt};
  }
  if (name == "pkl-lower-gf") {
    PklInstance inst = build_pkl_gf_instance(p.d, p.target_kappa);
    return {"pkl-lower-gf", inst.objective, inst.x0, std::nullopt, std::nullopt};
  }
  if (name == "pkl-lower-gd" || name == "pkl-lower") {
    PklInstance inst = build_pkl_gd_instance(p.d, p.target_kappa);
    return {"pkl-lower-gd", inst.objective, inst.x0, std::nullopt, inst.gd->eta};
  }
  std::string known;
  for (const auto& n : instance_names()) known += (known.empty() ? "" : ", ") + n;
  throw InputError("unknown objective '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace pathlen
