#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nnvqe/active_learning.hpp"
#include "nnvqe/error.hpp"
#include "nnvqe/metrics.hpp"
#include "nnvqe/train.hpp"
#include "nnvqe/xxz.hpp"

namespace nnvqe {

/// Shortest round-trippable decimal form; reruns with the same seed must
/// produce byte-identical files.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void ensure_parent_dir(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

inline std::ofstream open_out(const std::string& path) {
  ensure_parent_dir(path);
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw resource_error("cannot open for writing: " + path);
  return os;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  auto os = open_out(path);
  os << body;
  if (!os) throw resource_error("short write: " + path);
}

inline void write_history_csv(const std::string& path,
                              const std::vector<EpochRecord>& history) {
  auto os = open_out(path);
  os << "epoch,cost,lr,param_update\n";
  for (const EpochRecord& r : history)
    os << r.epoch << ',' << format_double(r.cost) << ',' << format_double(r.lr)
       << ',' << format_double(r.param_update) << '\n';
}

/// Sweep rows in grid order. One leading column per Hamiltonian parameter;
/// with_boundaries adds the hs and hc phase-boundary values as functions of
/// the first parameter (hc is nan where its formula has no real branch,
/// i.e. anisotropy < 1).
inline void write_sweep_csv(const std::string& path,
                            const std::vector<std::string>& param_names,
                            const std::vector<EvalRecord>& records,
                            bool with_boundaries = false) {
  auto os = open_out(path);
  for (const std::string& name : param_names) os << name << ',';
  os << "e_pred,e_exact,rel_err,fidelity,variance";
  if (with_boundaries) os << ",hs,hc";
  os << '\n';
  for (const EvalRecord& r : records) {
    for (double p : r.point) os << format_double(p) << ',';
    os << format_double(r.e_pred) << ',' << format_double(r.e_exact) << ','
       << format_double(r.rel_err) << ',' << format_double(r.fidelity) << ','
       << format_double(r.variance);
    if (with_boundaries) {
      const double delta = r.point.front();
      const double hc = delta >= 1.0 ? phase_boundary_hc(delta)
                                     : std::numeric_limits<double>::quiet_NaN();
      os << ',' << format_double(phase_boundary_hs(delta)) << ','
         << format_double(hc);
    }
    os << '\n';
  }
}

inline void write_rounds_csv(const std::string& path,
                             const std::vector<RoundRecord>& rounds) {
  auto os = open_out(path);
  os << "round,added_point,score,variance_term,distance_term,test_max_rel_err\n";
  for (const RoundRecord& r : rounds) {
    os << r.round << ',';
    for (std::size_t k = 0; k < r.added_point.size(); ++k)
      os << (k ? ";" : "") << format_double(r.added_point[k]);
    os << ',' << format_double(r.score) << ',' << format_double(r.variance_term)
       << ',' << format_double(r.distance_term) << ','
       << format_double(r.test_max_rel_err) << '\n';
  }
}

struct ConvergenceRow {
  double delta = 0.0;
  int n_qubits = 0;
  double nn_vqe_rate = 0.0;
  double vqe_rate = 0.0;
};

inline void write_convergence_csv(const std::string& path,
                                  const std::vector<ConvergenceRow>& rows) {
  auto os = open_out(path);
  os << "delta,n,nn_vqe_rate,vqe_rate\n";
  for (const ConvergenceRow& r : rows)
    os << format_double(r.delta) << ',' << r.n_qubits << ','
       << format_double(r.nn_vqe_rate) << ',' << format_double(r.vqe_rate)
       << '\n';
}

inline void write_param_dump_csv(const std::string& path, const ParamDump& dump) {
  auto os = open_out(path);
  for (std::size_t c = 0; c < dump.columns.size(); ++c)
    os << (c ? "," : "") << dump.columns[c];
  os << '\n';
  for (const auto& row : dump.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
}

// --- CSV reading + SVG line plots ------------------------------------------
// Just enough to turn our own artifacts into quick-look figures; not a
// general CSV parser.

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw resource_error("cannot open: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw resource_error("empty csv: " + path);
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    if (row.size() != t.columns.size())
      throw resource_error("ragged csv row in " + path);
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace detail {

inline const char* plot_color(std::size_t i) {
  static const char* palette[] = {"#1f6fb4", "#d1495b", "#2e8b57", "#8c5e99",
                                  "#c88a1e", "#4aa3a2", "#6b6b6b", "#a0522d"};
  return palette[i % (sizeof palette / sizeof palette[0])];
}

}  // namespace detail

/// Render selected columns of a CSV as polylines against the first column.
/// Picks a log10 y-axis automatically when every plotted value is positive
/// and spans more than three decades (relative-error curves).
inline void plot_csv(const CsvTable& t, const std::string& out_path,
                     const std::vector<std::size_t>& y_columns) {
  if (t.rows.empty()) throw usage_error("plot_csv: no data rows");
  if (y_columns.empty()) throw usage_error("plot_csv: no y columns chosen");

  const int width = 960, height = 600;
  const int ml = 80, mr = 190, mt = 40, mb = 60;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  bool all_positive = true;
  for (const auto& row : t.rows) {
    const double x = row[0];
    if (!std::isfinite(x)) continue;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    for (std::size_t c : y_columns) {
      const double y = row[c];
      if (!std::isfinite(y)) continue;
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
      if (y <= 0.0) all_positive = false;
    }
  }
  if (!(xmin < xmax)) xmax = xmin + 1.0;
  if (!(ymin <= ymax)) throw usage_error("plot_csv: no finite values");

  const bool log_y = all_positive && ymin > 0.0 && ymax / ymin > 1e3;
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  double lo = ty(ymin), hi = ty(ymax);
  if (!(lo < hi)) hi = lo + 1.0;

  auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return mt + ph * (1.0 - (ty(y) - lo) / (hi - lo)); };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "' font-family='sans-serif' font-size='13'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<rect x='" << ml << "' y='" << mt << "' width='" << pw
      << "' height='" << ph << "' fill='none' stroke='#333'/>\n";

  const int n_ticks = 5;
  for (int i = 0; i <= n_ticks; ++i) {
    const double fx = xmin + (xmax - xmin) * i / n_ticks;
    const double gy = lo + (hi - lo) * i / n_ticks;
    const double xpix = px(fx);
    const double ypix = mt + ph * (1.0 - static_cast<double>(i) / n_ticks);
    char label[40];
    std::snprintf(label, sizeof label, "%.3g", fx);
    svg << "<line x1='" << xpix << "' y1='" << mt + ph << "' x2='" << xpix
        << "' y2='" << mt + ph + 5 << "' stroke='#333'/>\n"
        << "<text x='" << xpix << "' y='" << mt + ph + 20
        << "' text-anchor='middle'>" << label << "</text>\n";
    std::snprintf(label, sizeof label, "%.3g", log_y ? std::pow(10.0, gy) : gy);
    svg << "<line x1='" << ml - 5 << "' y1='" << ypix << "' x2='" << ml
        << "' y2='" << ypix << "' stroke='#333'/>\n"
        << "<text x='" << ml - 8 << "' y='" << ypix + 4
        << "' text-anchor='end'>" << label << "</text>\n";
  }
  svg << "<text x='" << ml + pw / 2 << "' y='" << height - 15
      << "' text-anchor='middle'>" << t.columns[0] << "</text>\n";
  if (log_y)
    svg << "<text x='" << ml << "' y='" << mt - 10 << "'>log scale</text>\n";

  std::size_t li = 0;
  for (std::size_t c : y_columns) {
    std::ostringstream pts;
    bool open = false;
    for (const auto& row : t.rows) {
      const double x = row[0], y = row[c];
      if (!std::isfinite(x) || !std::isfinite(y) || (log_y && y <= 0.0)) {
        open = false;
        continue;
      }
      if (!open) {
        if (pts.tellp() > 0) {
          svg << "<polyline fill='none' stroke='" << detail::plot_color(li)
              << "' stroke-width='1.5' points='" << pts.str() << "'/>\n";
          pts.str("");
        }
        open = true;
      }
      pts << px(x) << ',' << py(y) << ' ';
    }
    if (pts.tellp() > 0)
      svg << "<polyline fill='none' stroke='" << detail::plot_color(li)
          << "' stroke-width='1.5' points='" << pts.str() << "'/>\n";
    svg << "<rect x='" << width - mr + 15 << "' y='" << mt + 18 * li
        << "' width='12' height='12' fill='" << detail::plot_color(li) << "'/>\n"
        << "<text x='" << width - mr + 32 << "' y='" << mt + 18 * li + 11
        << "'>" << t.columns[c] << "</text>\n";
    ++li;
  }
  svg << "</svg>\n";
  write_text_file(out_path, svg.str());
}

}  // namespace nnvqe
