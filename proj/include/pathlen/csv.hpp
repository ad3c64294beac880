#ifndef PATHLEN_CSV_HPP
#define PATHLEN_CSV_HPP

#include "pathlen/harness.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pathlen {

inline constexpr std::string_view kCsvHeader =
    "experiment,d,omega,kappa_nominal,kappa_effective,mu_mode,dist0,zeta,ratio,bound_upper,"
    "bound_lower,steps,runtime_s,seed,stop_reason";

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Header plus one LF-terminated line per row, sorted by (experiment, d, omega, seed).
std::string to_csv(std::vector<ResultRow> rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

enum class PlotFigure { f1_ratio_vs_kappa, f2_ratio_vs_logkappa };
PlotFigure parse_plot_figure(std::string_view id);

/// Standalone matplotlib script that reads `csv_name` (next to the script)
/// and draws the figure with its reference curves.
std::string emit_plot_script(const std::vector<ResultRow>& rows, PlotFigure figure,
                             const std::string& csv_name = "results.csv");

}  // namespace pathlen

#endif  // PATHLEN_CSV_HPP
