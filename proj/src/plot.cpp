#include "mlsbm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mlsbm::plot {
namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

double parse_double(const std::string& s, std::size_t row, const std::string& col) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != s.size() || s.empty()) {
    throw std::invalid_argument("plot: non-numeric value '" + s + "' in column " + col +
                                ", row " + std::to_string(row + 1));
  }
  return v;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  throw std::invalid_argument("csv: missing column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size()) {
        throw std::invalid_argument("csv: row with " + std::to_string(fields.size()) +
                                    " fields, header has " + std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw std::invalid_argument("csv: empty input");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open csv file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string render_line_chart(const CsvTable& table, const PlotSpec& spec) {
  const int xc = table.column(spec.x);
  const int yc = table.column(spec.y);
  const int sc = table.column(spec.series);
  if (table.rows.empty()) throw std::invalid_argument("plot: no data rows");

  // Series keep first-appearance order; points per series are averaged over
  // duplicate x values and sorted by x.
  std::vector<std::string> series_order;
  std::map<std::string, std::map<double, std::pair<double, int>>> grouped;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string& s = row[static_cast<std::size_t>(sc)];
    const double x = parse_double(row[static_cast<std::size_t>(xc)], r, spec.x);
    const double y = parse_double(row[static_cast<std::size_t>(yc)], r, spec.y);
    if (grouped.find(s) == grouped.end()) series_order.push_back(s);
    auto& cell = grouped[s][x];
    cell.first += y;
    cell.second += 1;
  }

  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  bool any = false;
  for (const auto& [s, pts] : grouped) {
    for (const auto& [x, acc] : pts) {
      const double y = acc.first / acc.second;
      if (!any) {
        xmin = xmax = x;
        ymin = ymax = y;
        any = true;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double width = 640.0, height = 420.0;
  const double left = 70.0, right = width - 170.0, top = 40.0, bottom = height - 50.0;
  const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
  const auto sy = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  const std::size_t palette_size = sizeof(palette) / sizeof(palette[0]);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
         "viewBox=\"0 0 640 420\">\n";
  svg += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  if (!spec.title.empty()) {
    svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">" + spec.title + "</text>\n";
  }

  // Axes and ticks.
  svg += "<line x1=\"" + fmt("%.2f", left) + "\" y1=\"" + fmt("%.2f", bottom) + "\" x2=\"" +
         fmt("%.2f", right) + "\" y2=\"" + fmt("%.2f", bottom) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt("%.2f", left) + "\" y1=\"" + fmt("%.2f", top) + "\" x2=\"" +
         fmt("%.2f", left) + "\" y2=\"" + fmt("%.2f", bottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    const double px = sx(fx), py = sy(fy);
    svg += "<line x1=\"" + fmt("%.2f", px) + "\" y1=\"" + fmt("%.2f", bottom) + "\" x2=\"" +
           fmt("%.2f", px) + "\" y2=\"" + fmt("%.2f", bottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", px) + "\" y=\"" + fmt("%.2f", bottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           fmt("%.4g", fx) + "</text>\n";
    svg += "<line x1=\"" + fmt("%.2f", left - 5) + "\" y1=\"" + fmt("%.2f", py) + "\" x2=\"" +
           fmt("%.2f", left) + "\" y2=\"" + fmt("%.2f", py) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", left - 8) + "\" y=\"" + fmt("%.2f", py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           fmt("%.4g", fy) + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.2f", (left + right) / 2) + "\" y=\"" + fmt("%.2f", bottom + 38) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + spec.x +
         "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt("%.2f", (top + bottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
         fmt("%.2f", (top + bottom) / 2) + ")\">" + spec.y + "</text>\n";

  std::size_t si = 0;
  for (const auto& name : series_order) {
    const char* color = palette[si % palette_size];
    const auto& pts = grouped[name];
    std::string path;
    for (const auto& [x, acc] : pts) {
      path += fmt("%.2f", sx(x)) + "," + fmt("%.2f", sy(acc.first / acc.second)) + " ";
    }
    if (!path.empty()) path.pop_back();
    if (pts.size() > 1) {
      svg += "<polyline points=\"" + path + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.8\"/>\n";
    }
    for (const auto& [x, acc] : pts) {
      svg += "<circle cx=\"" + fmt("%.2f", sx(x)) + "\" cy=\"" +
             fmt("%.2f", sy(acc.first / acc.second)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    const double ly = top + 16.0 * static_cast<double>(si);
    svg += "<rect x=\"" + fmt("%.2f", right + 12) + "\" y=\"" + fmt("%.2f", ly - 8) +
           "\" width=\"10\" height=\"10\" fill=\"" + std::string(color) + "\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", right + 27) + "\" y=\"" + fmt("%.2f", ly + 1) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + name + "</text>\n";
    ++si;
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const std::string& csv_path, const PlotSpec& spec, const std::string& out_path) {
  const CsvTable table = read_csv_file(csv_path);
  const std::string svg = render_line_chart(table, spec);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << svg;
}

}  // namespace mlsbm::plot
