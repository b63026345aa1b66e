// Convergence plots (relative error against iteration, log scale) as
// self-contained SVG.

#ifndef BPDN_SVG_PLOT_HPP
#define BPDN_SVG_PLOT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace bpdn {

struct Series {
  std::string solver;
  std::vector<long> iter;
  std::vector<double> rel_error;
};

/// All curves belonging to one (experiment, instance) pair.
struct PlotCell {
  std::string experiment;
  std::string instance_id;
  std::vector<Series> series;
};

inline constexpr double kPlotFloor = 1e-16;

/// Groups the rows of a trace CSV by (experiment, instance id) and solver,
/// keeping first-appearance order. Throws csv::ParseError naming the row on
/// malformed input.
std::vector<PlotCell> read_trace_cells(const std::string& csv_text);

/// Renders one cell. Zero errors are clipped to kPlotFloor before the log.
std::string render_svg(const PlotCell& cell);

/// Human-readable title from an instance id of the form "key=value;...".
std::string plot_title(const PlotCell& cell);

/// File name (no directory) used for a cell's SVG.
std::string svg_file_name(const PlotCell& cell);

/// Reads `trace_csv`, writes one SVG per cell into `out_dir`, returns the
/// written paths in cell order.
std::vector<std::filesystem::path> plot_convergence(const std::filesystem::path& trace_csv,
                                                    const std::filesystem::path& out_dir);

}  // namespace bpdn

#endif  // BPDN_SVG_PLOT_HPP
