#pragma once

#include <string>
#include <vector>

namespace mlsbm::plot {

/// Minimal CSV table: first row is the header, all fields kept as strings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // throws if missing
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

/// Line chart description: x and y are numeric columns, series names the
/// column whose distinct values select one polyline each. Rows sharing a
/// (series, x) pair are averaged.
struct PlotSpec {
  std::string x;
  std::string y;
  std::string series;
  std::string title;
};

/// Renders the chart as a standalone SVG string, byte deterministic for
/// identical input.
std::string render_line_chart(const CsvTable& table, const PlotSpec& spec);

/// Reads csv_path, renders, writes out_path.
void emit_plot(const std::string& csv_path, const PlotSpec& spec, const std::string& out_path);

}  // namespace mlsbm::plot
