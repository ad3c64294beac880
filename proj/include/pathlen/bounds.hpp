#ifndef PATHLEN_BOUNDS_HPP
#define PATHLEN_BOUNDS_HPP

#include "pathlen/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pathlen {

/// What a path-length factor multiplies.
enum class DistanceBase {
  optimal_set,  // dist(x₀, X*)
  limit,        // ‖x₀ − x_∞‖
  minimizer,    // ‖x₀ − x*‖, X* a singleton
};

inline std::string_view to_string(DistanceBase b) {
  switch (b) {
    case DistanceBase::optimal_set: return "dist(x0,X*)";
    case DistanceBase::limit: return "|x0-x_inf|";
    case DistanceBase::minimizer: return "|x0-x*|";
  }
  return "?";
}

template <typename Scalar>
struct BoundReport {
  std::string name;
  Scalar factor{};
  bool log2_scale = false;  // factor holds log₂ of the bound
  DistanceBase base = DistanceBase::optimal_set;
  std::vector<std::pair<std::string, Scalar>> inputs;
  std::vector<Scalar> kappa_j;
};

enum class Flow { gf, gd };
enum class ConvexQc { gf_quasiconvex, gd_eta_invL, gd_eta_small };
enum class LowerPkl { gf, gd, linconv_gf, linconv_gd };

namespace detail {

template <typename Scalar>
void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

template <typename Scalar>
void check_mu_L(Scalar mu, Scalar L) {
  require<Scalar>(mu > 0 && L > 0, "bound: mu and L must be positive");
  require<Scalar>(mu <= L, "bound: mu must not exceed L");
}

template <typename Scalar>
void check_A_c(Scalar A, Scalar c, bool allow_one) {
  require<Scalar>(A >= 1, "bound: A must be >= 1");
  require<Scalar>(c > 0 && (allow_one ? c <= 1 : c < 1),
                  allow_one ? "bound: c must lie in (0, 1]" : "bound: c must lie in (0, 1)");
}

}  // namespace detail

/// κ^{−1/(κ−1)}(1 − 1/κ), extended by 0 at κ = 1.
template <typename Scalar>
Scalar tau(Scalar kappa) {
  using std::exp, std::log1p;
  if (!(kappa >= 1)) throw InputError("tau: kappa must be >= 1");
  const Scalar gap = kappa - Scalar(1);
  if (gap < Scalar(1e-9)) return Scalar(0);
  return exp(-log1p(gap) / gap) * (gap / kappa);
}

/// ηAL/c.
template <typename Scalar>
Scalar bound_linconv_gd(Scalar A, Scalar c, Scalar eta, Scalar L) {
  detail::check_A_c(A, c, true);
  detail::require<Scalar>(eta > 0 && L > 0, "bound: eta and L must be positive");
  return eta * A * L / c;
}

/// AL / ln(1/(1−c)).
template <typename Scalar>
Scalar bound_linconv_gf(Scalar A, Scalar c, Scalar L) {
  using std::log1p;
  detail::check_A_c(A, c, false);
  detail::require<Scalar>(L > 0, "bound: L must be positive");
  return A * L / -log1p(-c);
}

/// 2A/c.
template <typename Scalar>
Scalar bound_linconv_general(Scalar A, Scalar c) {
  detail::check_A_c(A, c, true);
  return 2 * A / c;
}

/// √κ for heavy ball with the Polyak parameters.
template <typename Scalar>
Scalar bound_hb(Scalar mu, Scalar L) {
  using std::sqrt;
  detail::check_mu_L(mu, L);
  return sqrt(L / mu);
}

/// [(ηL+1)/2 + √(ηL + ((ηL+1)/2)²)]·A/c.
template <typename Scalar>
Scalar bound_pgd_factor(Scalar eta, Scalar L, Scalar A, Scalar c) {
  using std::sqrt;
  detail::require<Scalar>(eta >= 0 && L >= 0, "bound: eta and L must be non-negative");
  detail::check_A_c(A, c, true);
  const Scalar eL = eta * L;
  const Scalar h = (eL + 1) / 2;
  return (h + sqrt(eL + h * h)) * A / c;
}

/// √κ (GF) or 2√κ (GD, η ≤ 1/L).
template <typename Scalar>
Scalar bound_pkl(Scalar mu, Scalar L, Flow which) {
  using std::sqrt;
  detail::check_mu_L(mu, L);
  const Scalar r = sqrt(L / mu);
  return which == Flow::gf ? r : 2 * r;
}

/// min{√d⁺, 1 + Σⱼ τ(κⱼ), 1 + 2.5√(ln κ)}, plus one for GD.
template <typename Scalar>
Scalar bound_quadratic_from_ratios(const std::vector<Scalar>& kappa_j, Flow which) {
  using std::log, std::sqrt, std::min;
  Scalar tau_sum = 0, log_kappa = 0;
  for (Scalar k : kappa_j) {
    tau_sum += tau(k);
    log_kappa += log(k);
  }
  const Scalar d_plus = static_cast<Scalar>(kappa_j.size() + 1);
  Scalar f = min({sqrt(d_plus), Scalar(1) + tau_sum, Scalar(1) + Scalar(2.5) * sqrt(log_kappa)});
  return which == Flow::gf ? f : f + 1;
}

/// Same, from a descending positive spectrum σ₁ ≥ … ≥ σ_{d⁺}.
template <typename Scalar>
Scalar bound_quadratic(const std::vector<Scalar>& spectrum, Flow which) {
  if (spectrum.empty()) throw InputError("bound_quadratic: empty spectrum");
  std::vector<Scalar> ratios;
  for (std::size_t j = 0; j + 1 < spectrum.size(); ++j) {
    if (!(spectrum[j + 1] > 0) || spectrum[j] < spectrum[j + 1])
      throw InputError("bound_quadratic: spectrum must be positive and descending");
    ratios.push_back(spectrum[j] / spectrum[j + 1]);
  }
  return bound_quadratic_from_ratios(ratios, which);
}

/// 2 + ln κ.
template <typename Scalar>
Scalar bound_fsep(Scalar mu, Scalar L) {
  using std::log;
  detail::check_mu_L(mu, L);
  return 2 + log(L / mu);
}

/// log₂ of the convex/quasiconvex bound: 2d ln d, 10d², or 4d ln d.
template <typename Scalar>
Scalar bound_convex_qc_log2(int d, ConvexQc which) {
  using std::log;
  if (d < 2) throw InputError("bound_convex_qc: requires d >= 2");
  const Scalar D = static_cast<Scalar>(d);
  switch (which) {
    case ConvexQc::gf_quasiconvex: return 2 * D * log(D);
    case ConvexQc::gd_eta_invL: return 10 * D * D;
    case ConvexQc::gd_eta_small: return 4 * D * log(D);
  }
  return Scalar(0);
}

/// √d.
template <typename Scalar>
Scalar bound_separable(int d) {
  using std::sqrt;
  if (d < 1) throw InputError("bound_separable: requires d >= 1");
  return sqrt(static_cast<Scalar>(d));
}

/// Lower bounds for PKL objectives. `c` is used only by the linear-convergence forms.
template <typename Scalar>
Scalar lower_bound_pkl(int d, Scalar kappa, LowerPkl which, Scalar c = 0) {
  using std::log, std::sqrt, std::pow, std::min;
  if (which == LowerPkl::linconv_gf || which == LowerPkl::linconv_gd) {
    if (!(c > 0 && c < Scalar(5.8e-3)))
      throw InputError("lower_bound_pkl: the linear-convergence lower bound requires c in (0, 5.8e-3)");
    const Scalar inv = 1 / c;
    const Scalar denom = which == LowerPkl::linconv_gf ? 12 : 64;
    return sqrt(inv) / (denom * pow(log(inv), Scalar(1.5)));
  }
  if (d < 6 || !(kappa >= 216))
    throw InputError("lower_bound_pkl: the PKL lower bound requires d >= 6 and kappa >= 216");
  const Scalar D = static_cast<Scalar>(d);
  const Scalar denom = which == LowerPkl::gf ? 6 : 16;
  return min(sqrt(D) / (denom * log(D)), pow(kappa, Scalar(0.25)) / (denom * log(kappa)));
}

/// min{0.7√d, 0.45√(ln κ)} (GF) or min{0.5√d, 0.3√(ln κ)} (GD).
template <typename Scalar>
Scalar lower_bound_quadratic(int d, Scalar kappa, Flow which) {
  using std::log, std::sqrt, std::min;
  if (d < 1) throw InputError("lower_bound_quadratic: requires d >= 1");
  if (!(kappa >= 5)) throw InputError("lower_bound_quadratic: requires kappa >= 5");
  const Scalar D = static_cast<Scalar>(d);
  return which == Flow::gf ? min(Scalar(0.7) * sqrt(D), Scalar(0.45) * sqrt(log(kappa)))
                           : min(Scalar(0.5) * sqrt(D), Scalar(0.3) * sqrt(log(kappa)));
}

/// Named inputs for `evaluate_bound`; unused fields are ignored, missing
/// required ones raise InputError.
struct BoundInputs {
  std::optional<double> A, c, eta, L, mu, kappa;
  std::optional<int> d;
  std::vector<double> spectrum;
};

/// Names accepted by evaluate_bound.
inline const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names = {
      "linconv-gd",         "linconv-gf",         "linconv-general",   "hb",
      "pgd",                "pkl-gf",             "pkl-gd",            "quadratic-gf",
      "quadratic-gd",       "fsep",               "convex-qc-gf",      "convex-qc-gd",
      "convex-qc-gd-small", "separable",          "lower-pkl-gf",      "lower-pkl-gd",
      "lower-pkl-linconv-gf", "lower-pkl-linconv-gd", "lower-quadratic-gf", "lower-quadratic-gd"};
  return names;
}

inline BoundReport<double> evaluate_bound(const std::string& name, const BoundInputs& in) {
  auto need = [&name](const auto& v, const char* what) {
    if (!v) throw InputError("bound '" + name + "' requires --" + std::string(what));
    return *v;
  };
  BoundReport<double> r;
  r.name = name;
  auto echo = [&r](const char* k, double v) { r.inputs.emplace_back(k, v); };

  if (name == "linconv-gd") {
    const double A = need(in.A, "A"), c = need(in.c, "c"), eta = need(in.eta, "eta"), L = need(in.L, "L");
    r.factor = bound_linconv_gd(A, c, eta, L);
    echo("A", A), echo("c", c), echo("eta", eta), echo("L", L);
  } else if (name == "linconv-gf") {
    const double A = need(in.A, "A"), c = need(in.c, "c"), L = need(in.L, "L");
    r.factor = bound_linconv_gf(A, c, L);
    echo("A", A), echo("c", c), echo("L", L);
  } else if (name == "linconv-general") {
    const double A = need(in.A, "A"), c = need(in.c, "c");
    r.factor = bound_linconv_general(A, c);
    echo("A", A), echo("c", c);
  } else if (name == "hb") {
    const double mu = need(in.mu, "mu"), L = need(in.L, "L");
    r.factor = bound_hb(mu, L);
    r.base = DistanceBase::minimizer;
    echo("mu", mu), echo("L", L), echo("kappa", L / mu);
  } else if (name == "pgd") {
    const double eta = need(in.eta, "eta"), L = need(in.L, "L"), A = need(in.A, "A"), c = need(in.c, "c");
    r.factor = bound_pgd_factor(eta, L, A, c);
    echo("eta", eta), echo("L", L), echo("A", A), echo("c", c);
  } else if (name == "pkl-gf" || name == "pkl-gd") {
    const double mu = need(in.mu, "mu"), L = need(in.L, "L");
    r.factor = bound_pkl(mu, L, name == "pkl-gf" ? Flow::gf : Flow::gd);
    echo("mu", mu), echo("L", L), echo("kappa", L / mu);
  } else if (name == "quadratic-gf" || name == "quadratic-gd") {
    if (in.spectrum.empty()) throw InputError("bound '" + name + "' requires --spectrum");
    r.factor = bound_quadratic(in.spectrum, name == "quadratic-gf" ? Flow::gf : Flow::gd);
    for (std::size_t j = 0; j + 1 < in.spectrum.size(); ++j)
      r.kappa_j.push_back(in.spectrum[j] / in.spectrum[j + 1]);
    echo("d_plus", static_cast<double>(in.spectrum.size()));
    echo("kappa", in.spectrum.front() / in.spectrum.back());
  } else if (name == "fsep") {
    const double mu = need(in.mu, "mu"), L = need(in.L, "L");
    r.factor = bound_fsep(mu, L);
    echo("mu", mu), echo("L", L), echo("kappa", L / mu);
  } else if (name == "convex-qc-gf" || name == "convex-qc-gd" || name == "convex-qc-gd-small") {
    const int d = need(in.d, "d");
    const ConvexQc w = name == "convex-qc-gf"   ? ConvexQc::gf_quasiconvex
                       : name == "convex-qc-gd" ? ConvexQc::gd_eta_invL
                                                : ConvexQc::gd_eta_small;
    r.factor = bound_convex_qc_log2<double>(d, w);
    r.log2_scale = true;
    r.base = DistanceBase::limit;
    echo("d", d);
  } else if (name == "separable") {
    const int d = need(in.d, "d");
    r.factor = bound_separable<double>(d);
    echo("d", d);
  } else if (name == "lower-pkl-gf" || name == "lower-pkl-gd") {
    const int d = need(in.d, "d");
    const double kappa = need(in.kappa, "kappa");
    r.factor = lower_bound_pkl<double>(d, kappa, name == "lower-pkl-gf" ? LowerPkl::gf : LowerPkl::gd);
    echo("d", d), echo("kappa", kappa);
  } else if (name == "lower-pkl-linconv-gf" || name == "lower-pkl-linconv-gd") {
    const double c = need(in.c, "c");
    r.factor = lower_bound_pkl<double>(
        6, 216.0, name == "lower-pkl-linconv-gf" ? LowerPkl::linconv_gf : LowerPkl::linconv_gd, c);
    echo("c", c);
  } else if (name == "lower-quadratic-gf" || name == "lower-quadratic-gd") {
    const int d = need(in.d, "d");
    const double kappa = need(in.kappa, "kappa");
    r.factor = lower_bound_quadratic<double>(d, kappa,
                                             name == "lower-quadratic-gf" ? Flow::gf : Flow::gd);
    echo("d", d), echo("kappa", kappa);
  } else {
    std::string known;
    for (const auto& n : bound_names()) known += (known.empty() ? "" : ", ") + n;
    throw InputError("unknown bound '" + name + "' (known: " + known + ")");
  }
  return r;
}

}  // namespace pathlen

#endif  // PATHLEN_BOUNDS_HPP
