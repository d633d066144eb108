#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mlsbm/aggregate.hpp"
#include "mlsbm/cluster.hpp"
#include "mlsbm/concentration.hpp"
#include "mlsbm/experiment.hpp"
#include "mlsbm/pipeline.hpp"
#include "mlsbm/plot.hpp"

namespace {

using namespace mlsbm;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  std::size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

concentration::McStudyConfig parse_mc_config(const std::string& text) {
  concentration::McStudyConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "statistic") {
        config.statistic = concentration::mc_statistic_from_name(value);
      } else if (key == "n") {
        config.n = std::stoi(value);
      } else if (key == "reps") {
        config.reps = std::stoi(value);
      } else if (key == "base_seed") {
        config.base_seed = std::stoull(value);
      } else if (key == "L_grid") {
        config.L_grid.clear();
        for (const auto& v : split_list(value)) config.L_grid.push_back(std::stoi(v));
      } else if (key == "rho_grid") {
        config.rho_grid.clear();
        for (const auto& v : split_list(value)) config.rho_grid.push_back(std::stod(v));
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  if (config.n < 1) throw std::invalid_argument("concentration config: n must be >= 1");
  if (config.reps < 1) throw std::invalid_argument("concentration config: reps must be >= 1");
  if (config.L_grid.empty()) throw std::invalid_argument("concentration config: L_grid is empty");
  if (config.rho_grid.empty()) throw std::invalid_argument("concentration config: rho_grid is empty");
  return config;
}

int run_simulate(const std::string& config_path, const std::string& out_path) {
  const experiment::ExperimentConfig config = experiment::read_config_file(config_path);
  const std::vector<experiment::ResultRecord> records = experiment::run_experiment(config);
  write_file(out_path, experiment::results_to_csv(records));
  std::cout << "wrote " << records.size() << " rows to " << out_path << "\n";
  return 0;
}

int run_figure_cmd(const std::string& name, const std::string& out_dir, std::optional<int> trials,
                   std::optional<std::uint64_t> seed) {
  for (const auto& path : experiment::run_figure(name, out_dir, trials, seed)) {
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int run_concentration(const std::string& config_path, const std::string& out_path) {
  const concentration::McStudyConfig config = parse_mc_config(read_file(config_path));
  const concentration::McStudyResult result = concentration::mc_opnorm_study(config);
  write_file(out_path, concentration::mc_samples_to_csv(result.samples));
  std::cout << "wrote " << result.samples.size() << " rows to " << out_path << "\n";
  char buf[128];
  for (const auto& p : result.points) {
    std::snprintf(buf, sizeof(buf), "L=%d rho=%.10g median=%.10g q25=%.10g q75=%.10g\n", p.L,
                  p.rho, p.median, p.q25, p.q75);
    std::cout << buf;
  }
  for (const auto& [rho, slope] : result.slopes) {
    std::snprintf(buf, sizeof(buf), "rho=%.10g log-log slope of median vs L: %.6g\n", rho, slope);
    std::cout << buf;
  }
  return 0;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return std::nan("");
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

int run_pipeline(const std::vector<std::string>& layer_paths, double tau, long min_degree,
                 const std::string& out_dir, std::optional<int> k, std::uint64_t seed) {
  std::vector<pipeline::ExpressionLayer> layers;
  for (const auto& path : layer_paths) layers.push_back(pipeline::read_expression_file(path));
  for (std::size_t ell = 1; ell < layers.size(); ++ell) {
    if (layers[ell].gene_ids != layers[0].gene_ids) {
      throw std::invalid_argument("layer " + std::to_string(ell) +
                                  " lists different genes than layer 0");
    }
  }

  std::vector<AdjacencyMatrix> adjacency;
  for (const auto& layer : layers) {
    adjacency.push_back(pipeline::threshold_adjacency(pipeline::pearson_correlation(layer), tau));
  }
  const pipeline::DegreeFilterResult filtered =
      pipeline::total_degree_filter(MultiLayerGraph(std::move(adjacency)), min_degree);
  const MultiLayerGraph& graph = filtered.graph;

  std::filesystem::create_directories(out_dir);

  std::string kept;
  for (int idx : filtered.kept) kept += layers[0].gene_ids[static_cast<std::size_t>(idx)] + "\n";
  write_file(out_dir + "/kept_genes.txt", kept);

  char buf[160];
  std::string diag = "layer,nodes,edges,components,max_degree,median_degree,powerlaw_stat\n";
  for (Index ell = 0; ell < graph.layer_count(); ++ell) {
    const AdjacencyMatrix& a = graph.layer(ell);
    const Vector degrees = a.degrees();
    std::string edges;
    long edge_count = 0;
    for (Index i = 0; i < a.node_count(); ++i) {
      for (Index j = i + 1; j < a.node_count(); ++j) {
        if (a.matrix()(i, j) > 0.5) {
          edges += std::to_string(i) + "," + std::to_string(j) + "\n";
          ++edge_count;
        }
      }
    }
    write_file(out_dir + "/layer_" + std::to_string(ell) + ".edges", edges);

    const pipeline::Components comps = pipeline::connected_components(a);
    std::vector<int> int_degrees;
    std::vector<double> dbl_degrees;
    for (Index i = 0; i < degrees.size(); ++i) {
      int_degrees.push_back(static_cast<int>(std::lround(degrees(i))));
      dbl_degrees.push_back(degrees(i));
    }
    double pl = std::nan("");
    try {
      pl = pipeline::powerlaw_fit_stat(int_degrees);
    } catch (const std::exception&) {
      // fewer than two distinct positive degrees: leave as nan
    }
    std::snprintf(buf, sizeof(buf), "%lld,%lld,%ld,%d,%.10g,%.10g,%.10g\n",
                  static_cast<long long>(ell), static_cast<long long>(a.node_count()), edge_count,
                  comps.count, degrees.size() > 0 ? degrees.maxCoeff() : std::nan(""),
                  median_of(dbl_degrees), pl);
    diag += buf;
  }
  write_file(out_dir + "/diagnostics.csv", diag);

  const SymMatrix sos = aggregate::sum_of_squares(graph);
  const int max_k = static_cast<int>(std::min<Index>(graph.node_count(), 30));
  const Vector scree = pipeline::scree(sos, max_k);
  std::string scree_csv = "index,value\n";
  for (Index i = 0; i < scree.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%lld,%.10g\n", static_cast<long long>(i + 1), scree(i));
    scree_csv += buf;
  }
  write_file(out_dir + "/scree.csv", scree_csv);

  if (k) {
    const Membership labels = cluster::estimate_communities(
        graph, *k, cluster::AggregationMethod::SosDebias, false, seed);
    std::string memberships = "gene,community\n";
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
      memberships += layers[0].gene_ids[static_cast<std::size_t>(filtered.kept[i])] + "," +
                     std::to_string(labels.labels[i]) + "\n";
    }
    write_file(out_dir + "/memberships.csv", memberships);
  }

  std::cout << "kept " << filtered.kept.size() << " of " << layers[0].gene_ids.size()
            << " genes across " << graph.layer_count() << " layers; outputs in " << out_dir << "\n";
  return 0;
}

int run_plot(const std::string& csv_path, const std::string& x, const std::string& y,
             const std::string& series, const std::string& out_path) {
  plot::emit_plot(csv_path, plot::PlotSpec{x, y, series, ""}, out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-layer network clustering experiments"};
  app.require_subcommand(1);

  std::string config_path, out_path, figure_name, out_dir;
  std::vector<std::string> layer_paths;
  double tau = 0.72;
  long min_degree = 90;
  int trials_flag = -1;
  std::uint64_t seed_flag = 1;
  int k_flag = 0;
  std::string plot_x = "rho", plot_y = "rate", plot_series = "method";

  CLI::App* simulate = app.add_subcommand("simulate", "Run a configured experiment sweep");
  simulate->add_option("--config", config_path, "Experiment config file")->required();
  simulate->add_option("--out", out_path, "Output CSV path")->required();

  CLI::App* figure = app.add_subcommand("figure", "Run a named preset figure");
  figure->add_option("name", figure_name, "One of fig2demo, fig3, fig4, fig5, fig6weighted")
      ->required();
  figure->add_option("--out-dir", out_dir, "Output directory")->required();
  figure->add_option("--trials", trials_flag, "Override trial count")->check(CLI::PositiveNumber);
  figure->add_option("--seed", seed_flag, "Override base seed");

  CLI::App* conc = app.add_subcommand("concentration", "Monte Carlo operator-norm study");
  conc->add_option("--config", config_path, "Study config file")->required();
  conc->add_option("--out", out_path, "Output CSV path")->required();

  CLI::App* pipe = app.add_subcommand("pipeline", "Correlation-network preprocessing");
  pipe->add_option("--layers", layer_paths, "Per-layer expression tables")
      ->required()
      ->expected(1, -1);
  pipe->add_option("--tau", tau, "Absolute correlation threshold");
  pipe->add_option("--min-degree", min_degree, "Minimum total degree to keep a gene");
  pipe->add_option("--out-dir", out_dir, "Output directory")->required();
  pipe->add_option("--k", k_flag, "Also export community memberships for this K")
      ->check(CLI::PositiveNumber);
  pipe->add_option("--seed", seed_flag, "Clustering seed");

  CLI::App* plot_cmd = app.add_subcommand("plot", "Render a CSV as an SVG line chart");
  plot_cmd->add_option("--csv", config_path, "Input CSV")->required();
  plot_cmd->add_option("--x", plot_x, "X column");
  plot_cmd->add_option("--y", plot_y, "Y column");
  plot_cmd->add_option("--series", plot_series, "Series column");
  plot_cmd->add_option("--out", out_path, "Output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) return run_simulate(config_path, out_path);
    if (figure->parsed()) {
      return run_figure_cmd(
          figure_name, out_dir,
          figure->count("--trials") > 0 ? std::optional<int>(trials_flag) : std::nullopt,
          figure->count("--seed") > 0 ? std::optional<std::uint64_t>(seed_flag) : std::nullopt);
    }
    if (conc->parsed()) return run_concentration(config_path, out_path);
    if (pipe->parsed()) {
      return run_pipeline(layer_paths, tau, min_degree, out_dir,
                          pipe->count("--k") > 0 ? std::optional<int>(k_flag) : std::nullopt,
                          seed_flag);
    }
    if (plot_cmd->parsed()) return run_plot(config_path, plot_x, plot_y, plot_series, out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
