#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlsbm/cluster.hpp"
#include "mlsbm/sbm.hpp"
#include "mlsbm/types.hpp"

namespace mlsbm::experiment {

/// How per-layer connectivity matrices are produced for each trial.
///   Explicit: `b_list` holds one matrix per layer.
///   Constant: `b_list[0]` replicated across L layers.
///   AlternatingHalves: first half of layers use b_list[0], second b_list[1].
///   RandomPair: each layer picks b_list[0] or b_list[1] with equal
///     probability, redrawn per trial from the trial substream.
enum class BPattern { Explicit, Constant, AlternatingHalves, RandomPair };

struct ExperimentConfig {
  int n = 0;
  int K = 0;
  int L = 0;
  std::vector<double> rho_grid;
  int trials = 100;
  std::vector<cluster::AggregationMethod> methods;
  bool weighted = false;
  std::uint64_t base_seed = 1;
  int restarts = 10;
  BPattern b_pattern = BPattern::Explicit;
  std::vector<Matrix> b_list;
  std::vector<int> community_sizes;  // consecutive blocks of nodes

  void validate() const;
  Membership theta() const;
  /// Concrete model for one grid value; `spec_seed` drives the RandomPair
  /// layer draws and is ignored by deterministic patterns.
  sbm::ModelSpec model_for(double rho, std::uint64_t spec_seed) const;
};

/// Flat `key = value` config text with '#' comments. Matrices are written as
/// semicolon-separated rows; lists of matrices separated by '|'.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig read_config_file(const std::string& path);
std::string write_config(const ExperimentConfig& config);

/// One CSV row of simulation output.
struct ResultRecord {
  double rho = 0.0;
  int L = 0;
  int n = 0;
  int K = 0;
  std::string method;
  bool weighted = false;
  int trial = 0;
  std::uint64_t seed = 0;
  int misclustered = 0;
  double rate = 0.0;
};

/// Full sweep over rho_grid x trials x methods. One graph sample per
/// (rho, trial) cell, shared by all methods; the cell seed recorded in each
/// row reproduces that cell in isolation via run_cell.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

/// Re-runs a single (rho, trial) cell from its recorded seed.
std::vector<ResultRecord> run_cell(const ExperimentConfig& config, double rho, int trial,
                                   std::uint64_t cell_seed);

/// Fixed-header CSV, one line per record, byte deterministic.
std::string results_to_csv(const std::vector<ResultRecord>& records);

/// Mean rate per (rho, method) as a plottable CSV.
std::string mean_rates_to_csv(const std::vector<ResultRecord>& records);

/// Named experiment presets.
ExperimentConfig preset_config(const std::string& name);

/// Model builders used by the presets and their tests. The fig2demo spec
/// draws its layer pattern from b_seed; the fig3 spec is deterministic.
sbm::ModelSpec fig2demo_spec(double rho, std::uint64_t b_seed);
sbm::ModelSpec fig3_spec(double rho);

/// Runs a named figure end to end and writes its CSV and SVG outputs under
/// out_dir. Returns the paths written. Known names: fig2demo, fig3, fig4,
/// fig5, fig6weighted.
std::vector<std::string> run_figure(const std::string& name, const std::string& out_dir,
                                    std::optional<int> trials,
                                    std::optional<std::uint64_t> seed);

}  // namespace mlsbm::experiment
