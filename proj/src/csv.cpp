#include "pathlen/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pathlen {
namespace {

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) return format_double(*v);
  else if constexpr (std::is_same_v<T, std::string>) return *v;
  else return std::to_string(*v);
}

std::string python_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s + "]";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_csv(std::vector<ResultRow> rows) {
  sort_rows(rows);
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.experiment + ',' + std::to_string(r.d) + ',' + opt(r.omega) + ',' +
           opt(r.kappa_nominal) + ',' + opt(r.kappa_effective) + ',' + opt(r.mu_mode) + ',' +
           format_double(r.dist0) + ',' + format_double(r.zeta) + ',' + format_double(r.ratio) +
           ',' + opt(r.bound_upper) + ',' + opt(r.bound_lower) + ',' + std::to_string(r.steps) +
           ',' + format_double(r.runtime_s) + ',' + opt(r.seed) + ',' + r.stop_reason + '\n';
  }
  return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << to_csv(rows);
  if (!out) throw InputError("write failed for " + path.string());
}

PlotFigure parse_plot_figure(std::string_view id) {
  if (id == "f1-ratio-vs-kappa") return PlotFigure::f1_ratio_vs_kappa;
  if (id == "f2-ratio-vs-logkappa") return PlotFigure::f2_ratio_vs_logkappa;
  throw InputError("unknown figure '" + std::string(id) +
                   "' (expected f1-ratio-vs-kappa or f2-ratio-vs-logkappa)");
}

std::string emit_plot_script(const std::vector<ResultRow>& rows, PlotFigure figure,
                             const std::string& csv_name) {
  // Reference curves span the data when there is any, else a default range.
  double lo = figure == PlotFigure::f1_ratio_vs_kappa ? 100.0 : 1.0;
  double hi = figure == PlotFigure::f1_ratio_vs_kappa ? 1e5 : 1e6;
  int dmax = rows.empty() ? 20 : 0;
  std::vector<double> kappas;
  for (const auto& r : rows) {
    const auto k = figure == PlotFigure::f1_ratio_vs_kappa ? r.kappa_effective : r.kappa_nominal;
    if (k && *k > 1 && std::isfinite(*k)) kappas.push_back(*k);
    dmax = std::max(dmax, r.d);
  }
  if (!kappas.empty()) {
    lo = *std::min_element(kappas.begin(), kappas.end());
    hi = *std::max_element(kappas.begin(), kappas.end());
    if (hi <= lo) hi = lo * 10.0;
  }

  std::ostringstream s;
  s << "#!/usr/bin/env python3\n"
       "import csv\n"
       "import math\n"
       "import os\n"
       "import sys\n"
       "\n"
       "import matplotlib\n"
       "matplotlib.use(\"Agg\")\n"
       "import matplotlib.pyplot as plt\n"
       "import numpy as np\n"
       "\n"
       "HERE = os.path.dirname(os.path.abspath(__file__))\n"
       "CSV = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, \""
    << csv_name << "\")\n"
    << "HAS_DATA = " << (rows.empty() ? "False" : "True") << "\n"
    << "KAPPA_RANGE = " << python_list({lo, hi}) << "\n"
    << "D_MAX = " << dmax << "\n"
    << "\n"
       "rows = []\n"
       "if HAS_DATA and os.path.exists(CSV):\n"
       "    with open(CSV, newline=\"\") as fh:\n"
       "        rows = list(csv.DictReader(fh))\n"
       "\n"
       "def num(v):\n"
       "    return float(v) if v not in (\"\", \"nan\") else float(\"nan\")\n"
       "\n"
       "fig, ax = plt.subplots(figsize=(6, 4))\n";

  if (figure == PlotFigure::f1_ratio_vs_kappa) {
    s << "k = np.geomspace(max(KAPPA_RANGE[0], 1.5), KAPPA_RANGE[1], 200)\n"
         "ax.plot(k, 3 * k ** 0.25 / np.log(k), \"k--\", label=r\"$3\\kappa^{1/4}/\\log\\kappa$\")\n"
         "pts = [(num(r[\"kappa_effective\"]), num(r[\"ratio\"])) for r in rows\n"
         "       if r[\"experiment\"] == \"pkl-lower-gd\"]\n"
         "if pts:\n"
         "    ax.plot([p[0] for p in pts], [p[1] for p in pts], \"o\", label=\"GD\")\n"
         "ax.set_xscale(\"log\")\n"
         "ax.set_xlabel(r\"effective $\\kappa$\")\n"
         "ax.set_ylabel(r\"$\\zeta_\\eta / \\mathrm{dist}(x_0, X^*)$\")\n"
         "out = \"f1-ratio-vs-kappa.png\"\n";
  } else {
    s << "lk = np.linspace(math.log(max(KAPPA_RANGE[0], 1.0 + 1e-12)), math.log(KAPPA_RANGE[1]), 200)\n"
         "ax.plot(lk, 1 + 2.5 * np.sqrt(lk), \"k--\", label=\"upper\")\n"
         "ax.plot(lk, np.minimum(0.7 * math.sqrt(D_MAX), 0.45 * np.sqrt(lk)), \"k:\", label=\"lower (GF)\")\n"
         "ax.plot(lk, np.minimum(0.5 * math.sqrt(D_MAX), 0.3 * np.sqrt(lk)), \"k-.\", label=\"lower (GD)\")\n"
         "for name, marker in ((\"quad-lower-gf\", \"o\"), (\"quad-lower-gd\", \"s\"),\n"
         "                     (\"quad-random-gf\", \"^\"), (\"quad-random-gd\", \"v\")):\n"
         "    pts = [(math.log(num(r[\"kappa_nominal\"])), num(r[\"ratio\"])) for r in rows\n"
         "           if r[\"experiment\"] == name and num(r[\"kappa_nominal\"]) > 0]\n"
         "    if pts:\n"
         "        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker, label=name)\n"
         "ax.set_xlabel(r\"$\\log\\kappa$\")\n"
         "ax.set_ylabel(r\"$\\zeta / \\mathrm{dist}(x_0, X^*)$\")\n"
         "out = \"f2-ratio-vs-logkappa.png\"\n";
  }
  s << "ax.legend()\n"
       "fig.tight_layout()\n"
       "fig.savefig(os.path.join(HERE, out), dpi=150)\n"
       "print(os.path.join(HERE, out))\n";
  return s.str();
}

}  // namespace pathlen
