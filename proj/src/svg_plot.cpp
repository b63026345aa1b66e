#include "bpdn/svg_plot.hpp"

#include "bpdn/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace bpdn {

namespace {

const std::vector<std::string> kTraceHeader = {"experiment", "instance_id", "solver", "iter",
                                               "rel_error",  "objective",   "elapsed_s"};

constexpr int kWidth = 680, kHeight = 440;
constexpr int kLeft = 70, kRight = 130, kTop = 44, kBottom = 50;
constexpr std::size_t kMaxPoints = 2000;

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string color_for(const std::string& solver) {
  static const std::map<std::string, std::string> palette = {
      {"Ista", "#1f77b4"}, {"Fista", "#ff7f0e"}, {"Gpsr", "#2ca02c"}, {"Admm", "#d62728"}};
  auto it = palette.find(solver);
  return it == palette.end() ? "#7f7f7f" : it->second;
}

}  // namespace

std::vector<PlotCell> read_trace_cells(const std::string& csv_text) {
  const std::vector<csv::Row> rows = csv::parse(csv_text);
  if (rows.empty()) throw csv::ParseError(1, "missing header");
  if (rows[0] != kTraceHeader) throw csv::ParseError(1, "unexpected trace header");

  std::vector<PlotCell> cells;
  std::map<std::pair<std::string, std::string>, std::size_t> cell_index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() != kTraceHeader.size())
      throw csv::ParseError(line, "expected 7 fields, got " + std::to_string(row.size()));
    const long iter = csv::parse_integer(row[3], line);
    const double rel = csv::parse_number(row[4], line);
    csv::parse_number(row[5], line);
    csv::parse_number(row[6], line);
    if (rel < 0 || std::isnan(rel)) throw csv::ParseError(line, "rel_error must be >= 0");

    auto key = std::make_pair(row[0], row[1]);
    auto [it, inserted] = cell_index.try_emplace(key, cells.size());
    if (inserted) cells.push_back({row[0], row[1], {}});
    PlotCell& cell = cells[it->second];
    auto series = std::find_if(cell.series.begin(), cell.series.end(),
                               [&](const Series& s) { return s.solver == row[2]; });
    if (series == cell.series.end()) {
      cell.series.push_back({row[2], {}, {}});
      series = cell.series.end() - 1;
    }
    if (!series->iter.empty() && iter <= series->iter.back())
      throw csv::ParseError(line, "iterations must increase within a series");
    series->iter.push_back(iter);
    series->rel_error.push_back(rel);
  }
  return cells;
}

std::string plot_title(const PlotCell& cell) {
  static const std::map<std::string, std::string> labels = {
      {"lambda", "λ"}, {"s", "s"}, {"theta", "Θ"}, {"mu", "μ"}, {"K", "K"}};
  std::vector<std::string> parts;
  std::istringstream is(cell.instance_id);
  std::string token;
  while (std::getline(is, token, ';')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    auto label = labels.find(token.substr(0, eq));
    if (label != labels.end()) parts.push_back(label->second + " = " + token.substr(eq + 1));
  }
  std::string title = cell.experiment;
  if (parts.empty()) return title + ": " + cell.instance_id;
  title += ": ";
  for (std::size_t i = 0; i < parts.size(); ++i) title += (i ? ", " : "") + parts[i];
  return title;
}

std::string svg_file_name(const PlotCell& cell) {
  std::string name = cell.experiment + "_" + cell.instance_id;
  for (char& c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_'))
      c = '_';
  return name + ".svg";
}

std::string render_svg(const PlotCell& cell) {
  long max_iter = 1;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const Series& s : cell.series) {
    for (std::size_t i = 0; i < s.iter.size(); ++i) {
      max_iter = std::max(max_iter, s.iter[i]);
      const double e = std::log10(std::max(s.rel_error[i], kPlotFloor));
      lo = any ? std::min(lo, e) : e;
      hi = any ? std::max(hi, e) : e;
      any = true;
    }
  }
  double y_min = std::floor(lo), y_max = std::ceil(hi);
  if (y_max <= y_min) y_max = y_min + 1;

  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](double it) { return kLeft + plot_w * it / static_cast<double>(max_iter); };
  auto py = [&](double err) {
    const double e = std::log10(std::max(err, kPlotFloor));
    return kTop + plot_h * (y_max - e) / (y_max - y_min);
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << xml_escape(plot_title(cell)) << "</text>\n";

  // Axes and decade ticks.
  os << "<g stroke=\"black\" fill=\"none\">\n"
     << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << fmt(plot_w)
     << "\" height=\"" << fmt(plot_h) << "\"/>\n</g>\n";
  const int decades = static_cast<int>(y_max - y_min);
  const int step = std::max(1, decades / 8);
  for (int d = static_cast<int>(y_min); d <= static_cast<int>(y_max); d += step) {
    const double y = kTop + plot_h * (y_max - d) / (y_max - y_min);
    os << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kLeft + plot_w)
       << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n"
       << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(y + 4)
       << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double it = static_cast<double>(max_iter) * t / 4.0;
    os << "<text x=\"" << fmt(px(it)) << "\" y=\"" << kTop + plot_h + 18
       << "\" text-anchor=\"middle\">" << static_cast<long>(std::llround(it)) << "</text>\n";
  }
  os << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\">iteration</text>\n"
     << "<text x=\"16\" y=\"" << fmt(kTop + plot_h / 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << fmt(kTop + plot_h / 2)
     << ")\">relative error</text>\n";

  for (std::size_t k = 0; k < cell.series.size(); ++k) {
    const Series& s = cell.series[k];
    const std::string color = color_for(s.solver);
    if (s.iter.size() == 1) {
      os << "<circle cx=\"" << fmt(px(s.iter[0])) << "\" cy=\"" << fmt(py(s.rel_error[0]))
         << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    } else if (!s.iter.empty()) {
      const std::size_t stride = (s.iter.size() + kMaxPoints - 1) / kMaxPoints;
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.iter.size(); i += stride)
        os << fmt(px(s.iter[i])) << ',' << fmt(py(s.rel_error[i])) << ' ';
      if ((s.iter.size() - 1) % stride != 0)
        os << fmt(px(s.iter.back())) << ',' << fmt(py(s.rel_error.back()));
      os << "\"/>\n";
    }
    const double ly = kTop + 10 + 18.0 * k;
    const double lx = kLeft + plot_w + 12;
    os << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 22)
       << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << fmt(lx + 28) << "\" y=\"" << fmt(ly + 4) << "\">"
       << xml_escape(s.solver) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> plot_convergence(const std::filesystem::path& trace_csv,
                                                    const std::filesystem::path& out_dir) {
  std::ifstream in(trace_csv, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + trace_csv.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::vector<PlotCell> cells;
  try {
    cells = read_trace_cells(buf.str());
  } catch (const csv::ParseError& e) {
    throw std::runtime_error(trace_csv.string() + ": " + e.what());
  }
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  for (const PlotCell& cell : cells) {
    const auto path = out_dir / svg_file_name(cell);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << render_svg(cell);
    if (!out) throw std::runtime_error("write failed: " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace bpdn
