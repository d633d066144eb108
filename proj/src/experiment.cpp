#include "mlsbm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlsbm/aggregate.hpp"
#include "mlsbm/plot.hpp"
#include "mlsbm/rng.hpp"

namespace mlsbm::experiment {

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (K < 1 || K > n) throw std::invalid_argument("config: K must be in 1..n");
  if (L < 1) throw std::invalid_argument("config: L must be >= 1");
  if (rho_grid.empty()) throw std::invalid_argument("config: rho_grid is empty");
  for (double r : rho_grid) {
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("config: rho values must lie in (0, 1]");
  }
  for (std::size_t i = 1; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > rho_grid[i - 1])) {
      throw std::invalid_argument("config: rho_grid must be strictly ascending");
    }
  }
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (methods.empty()) throw std::invalid_argument("config: methods is empty");
  if (restarts < 1) throw std::invalid_argument("config: restarts must be >= 1");
  if (community_sizes.size() != static_cast<std::size_t>(K)) {
    throw std::invalid_argument("config: community_sizes must have K entries");
  }
  int total = 0;
  for (int s : community_sizes) {
    if (s < 1) throw std::invalid_argument("config: community sizes must be positive");
    total += s;
  }
  if (total != n) throw std::invalid_argument("config: community sizes must sum to n");

  switch (b_pattern) {
    case BPattern::Explicit:
      if (b_list.size() != static_cast<std::size_t>(L)) {
        throw std::invalid_argument("config: explicit pattern needs one matrix per layer");
      }
      break;
    case BPattern::Constant:
      if (b_list.size() != 1) throw std::invalid_argument("config: constant pattern needs one matrix");
      break;
    case BPattern::AlternatingHalves:
      if (b_list.size() != 2) throw std::invalid_argument("config: halves pattern needs two matrices");
      if (L % 2 != 0) throw std::invalid_argument("config: halves pattern needs even L");
      break;
    case BPattern::RandomPair:
      if (b_list.size() != 2) throw std::invalid_argument("config: random pair pattern needs two matrices");
      break;
  }
  for (const Matrix& b : b_list) {
    if (b.rows() != K || b.cols() != K) {
      throw std::invalid_argument("config: connectivity matrices must be K x K");
    }
  }
}

Membership ExperimentConfig::theta() const {
  Membership m;
  m.K = K;
  m.labels.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < community_sizes[static_cast<std::size_t>(k)]; ++i) m.labels.push_back(k + 1);
  }
  return m;
}

sbm::ModelSpec ExperimentConfig::model_for(double rho, std::uint64_t spec_seed) const {
  validate();
  sbm::ModelSpec spec;
  spec.n = n;
  spec.K = K;
  spec.theta = theta();
  spec.rho = rho;
  spec.B.reserve(static_cast<std::size_t>(L));
  switch (b_pattern) {
    case BPattern::Explicit:
      spec.B = b_list;
      break;
    case BPattern::Constant:
      spec.B.assign(static_cast<std::size_t>(L), b_list[0]);
      break;
    case BPattern::AlternatingHalves:
      for (int ell = 0; ell < L; ++ell) spec.B.push_back(ell < L / 2 ? b_list[0] : b_list[1]);
      break;
    case BPattern::RandomPair: {
      Rng rng(spec_seed);
      for (int ell = 0; ell < L; ++ell) {
        spec.B.push_back(rng.next_unit() < 0.5 ? b_list[0] : b_list[1]);
      }
      break;
    }
  }
  return spec;
}

namespace {

constexpr std::uint64_t kTagSpec = 1;
constexpr std::uint64_t kTagEdges = 2;
constexpr std::uint64_t kTagKmeansBase = 16;

int method_index(cluster::AggregationMethod m) { return static_cast<int>(m); }

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  std::size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != s.size() || s.empty()) {
    throw std::invalid_argument("config: bad number '" + s + "' for key " + key);
  }
  return v;
}

long long to_int(const std::string& s, const std::string& key) {
  std::size_t consumed = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != s.size() || s.empty()) {
    throw std::invalid_argument("config: bad integer '" + s + "' for key " + key);
  }
  return v;
}

Matrix parse_matrix(const std::string& text, const std::string& key) {
  const std::vector<std::string> row_strs = split(text, ';');
  std::vector<std::vector<double>> rows;
  for (const auto& rs : row_strs) {
    std::vector<double> row;
    for (const auto& es : split(rs, ',')) {
      const std::string t = trim(es);
      if (!t.empty()) row.push_back(to_double(t, key));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("config: empty matrix for key " + key);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw std::invalid_argument("config: ragged matrix rows for key " + key);
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::string format_matrix(const Matrix& m) {
  std::string out;
  char buf[48];
  for (Index i = 0; i < m.rows(); ++i) {
    if (i > 0) out += "; ";
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ",";
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out += buf;
    }
  }
  return out;
}

void apply_key(ExperimentConfig& config, const std::string& key, const std::string& value) {
  if (key == "n") {
    config.n = static_cast<int>(to_int(value, key));
  } else if (key == "K") {
    config.K = static_cast<int>(to_int(value, key));
  } else if (key == "L") {
    config.L = static_cast<int>(to_int(value, key));
  } else if (key == "trials") {
    config.trials = static_cast<int>(to_int(value, key));
  } else if (key == "restarts") {
    config.restarts = static_cast<int>(to_int(value, key));
  } else if (key == "base_seed") {
    config.base_seed = static_cast<std::uint64_t>(to_int(value, key));
  } else if (key == "weighted") {
    if (value == "true") {
      config.weighted = true;
    } else if (value == "false") {
      config.weighted = false;
    } else {
      throw std::invalid_argument("config: weighted must be true or false");
    }
  } else if (key == "rho_grid") {
    config.rho_grid.clear();
    for (const auto& s : split(value, ',')) {
      const std::string t = trim(s);
      if (!t.empty()) config.rho_grid.push_back(to_double(t, key));
    }
  } else if (key == "methods") {
    config.methods.clear();
    for (const auto& s : split(value, ',')) {
      const std::string t = trim(s);
      if (!t.empty()) config.methods.push_back(cluster::method_from_name(t));
    }
  } else if (key == "community_sizes") {
    config.community_sizes.clear();
    for (const auto& s : split(value, ',')) {
      const std::string t = trim(s);
      if (!t.empty()) config.community_sizes.push_back(static_cast<int>(to_int(t, key)));
    }
  } else if (key == "b_pattern") {
    if (value == "explicit") {
      config.b_pattern = BPattern::Explicit;
    } else if (value == "constant") {
      config.b_pattern = BPattern::Constant;
    } else if (value == "alternating_halves") {
      config.b_pattern = BPattern::AlternatingHalves;
    } else if (value == "random_pair") {
      config.b_pattern = BPattern::RandomPair;
    } else {
      throw std::invalid_argument("config: unknown b_pattern '" + value + "'");
    }
  } else if (key == "B") {
    config.b_list.clear();
    for (const auto& s : split(value, '|')) config.b_list.push_back(parse_matrix(s, key));
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string preset_name;
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
    if (key == "preset") {
      preset_name = value;
    } else {
      entries.emplace_back(key, value);
    }
  }

  ExperimentConfig config;
  if (!preset_name.empty()) config = preset_config(preset_name);
  for (const auto& [key, value] : entries) apply_key(config, key, value);
  config.validate();
  return config;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string write_config(const ExperimentConfig& config) {
  std::string out;
  char buf[64];
  out += "n = " + std::to_string(config.n) + "\n";
  out += "K = " + std::to_string(config.K) + "\n";
  out += "L = " + std::to_string(config.L) + "\n";
  out += "community_sizes = ";
  for (std::size_t i = 0; i < config.community_sizes.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(config.community_sizes[i]);
  }
  out += "\nrho_grid = ";
  for (std::size_t i = 0; i < config.rho_grid.size(); ++i) {
    if (i > 0) out += ",";
    std::snprintf(buf, sizeof(buf), "%.17g", config.rho_grid[i]);
    out += buf;
  }
  out += "\ntrials = " + std::to_string(config.trials) + "\n";
  out += "restarts = " + std::to_string(config.restarts) + "\n";
  out += "methods = ";
  for (std::size_t i = 0; i < config.methods.size(); ++i) {
    if (i > 0) out += ",";
    out += cluster::method_name(config.methods[i]);
  }
  out += "\nweighted = ";
  out += config.weighted ? "true" : "false";
  out += "\nbase_seed = " + std::to_string(config.base_seed) + "\n";
  switch (config.b_pattern) {
    case BPattern::Explicit: out += "b_pattern = explicit\n"; break;
    case BPattern::Constant: out += "b_pattern = constant\n"; break;
    case BPattern::AlternatingHalves: out += "b_pattern = alternating_halves\n"; break;
    case BPattern::RandomPair: out += "b_pattern = random_pair\n"; break;
  }
  out += "B = ";
  for (std::size_t i = 0; i < config.b_list.size(); ++i) {
    if (i > 0) out += " | ";
    out += format_matrix(config.b_list[i]);
  }
  out += "\n";
  return out;
}

std::vector<ResultRecord> run_cell(const ExperimentConfig& config, double rho, int trial,
                                   std::uint64_t cell_seed) {
  const sbm::ModelSpec spec = config.model_for(rho, mix(cell_seed, kTagSpec));
  const MultiLayerGraph graph = sbm::sample(spec, mix(cell_seed, kTagEdges));

  // All four aggregates derive from two shared matrices. The matricized Gram
  // equals the sum of squares entry for entry (integer counts both ways), so
  // its embedding reuses the same decomposition with singular-value weights.
  bool need_sum = false, need_sos = false, need_debias = false;
  for (auto m : config.methods) {
    switch (m) {
      case cluster::AggregationMethod::Sum: need_sum = true; break;
      case cluster::AggregationMethod::Sos: need_sos = true; break;
      case cluster::AggregationMethod::Matricize: need_sos = true; break;
      case cluster::AggregationMethod::SosDebias: need_debias = true; break;
    }
  }

  std::optional<linalg::EigenDecomposition> sum_d, sos_d, debias_d;
  std::optional<SymMatrix> sos;
  if (need_sos || need_debias) sos.emplace(aggregate::sum_of_squares(graph));
  if (need_sum) sum_d = linalg::sym_eigen(aggregate::sum_adjacency(graph));
  if (need_sos) sos_d = linalg::sym_eigen(*sos);
  if (need_debias) {
    Matrix m = sos->matrix();
    m.diagonal().setZero();
    debias_d = linalg::sym_eigen(SymMatrix(std::move(m)));
  }

  std::vector<ResultRecord> records;
  for (auto method : config.methods) {
    cluster::EmbeddingResult embedding;
    switch (method) {
      case cluster::AggregationMethod::Sum:
        embedding = cluster::embed_from_decomposition(*sum_d, config.K, config.weighted, false);
        break;
      case cluster::AggregationMethod::Sos:
        embedding = cluster::embed_from_decomposition(*sos_d, config.K, config.weighted, false);
        break;
      case cluster::AggregationMethod::SosDebias:
        embedding = cluster::embed_from_decomposition(*debias_d, config.K, config.weighted, false);
        break;
      case cluster::AggregationMethod::Matricize:
        embedding = cluster::embed_from_decomposition(*sos_d, config.K, config.weighted, true);
        break;
    }
    const std::uint64_t kseed = mix(cell_seed, kTagKmeansBase + static_cast<std::uint64_t>(method_index(method)));
    const cluster::KMeansResult km = cluster::kmeans(embedding.coords, config.K, config.restarts, kseed);
    const cluster::MisclusterResult mis = cluster::misclustering(km.labels, spec.theta);

    ResultRecord rec;
    rec.rho = rho;
    rec.L = config.L;
    rec.n = config.n;
    rec.K = config.K;
    rec.method = cluster::method_name(method);
    rec.weighted = config.weighted;
    rec.trial = trial;
    rec.seed = cell_seed;
    rec.misclustered = mis.count;
    rec.rate = mis.rate;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ResultRecord> records;
  records.reserve(config.rho_grid.size() * static_cast<std::size_t>(config.trials) *
                  config.methods.size());
  for (std::size_t g = 0; g < config.rho_grid.size(); ++g) {
    for (int t = 0; t < config.trials; ++t) {
      const std::uint64_t cell_seed = mix(mix(config.base_seed, g), static_cast<std::uint64_t>(t));
      std::vector<ResultRecord> cell = run_cell(config, config.rho_grid[g], t, cell_seed);
      for (auto& rec : cell) records.push_back(std::move(rec));
    }
  }
  return records;
}

std::string results_to_csv(const std::vector<ResultRecord>& records) {
  std::string out = "rho,L,n,K,method,weighted,trial,seed,misclustered,rate\n";
  char buf[200];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%.10g,%d,%d,%d,%s,%s,%d,%llu,%d,%.10g\n", r.rho, r.L, r.n,
                  r.K, r.method.c_str(), r.weighted ? "true" : "false", r.trial,
                  static_cast<unsigned long long>(r.seed), r.misclustered, r.rate);
    out += buf;
  }
  return out;
}

std::string mean_rates_to_csv(const std::vector<ResultRecord>& records) {
  // Group in order of first appearance for both rho and method.
  std::vector<std::pair<double, std::string>> order;
  std::vector<std::pair<double, int>> sums;
  for (const auto& r : records) {
    const std::pair<double, std::string> key(r.rho, r.method);
    std::size_t idx = order.size();
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i] == key) {
        idx = i;
        break;
      }
    }
    if (idx == order.size()) {
      order.push_back(key);
      sums.emplace_back(0.0, 0);
    }
    sums[idx].first += r.rate;
    sums[idx].second += 1;
  }
  std::string out = "rho,method,mean_rate\n";
  char buf[96];
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.10g,%s,%.10g\n", order[i].first, order[i].second.c_str(),
                  sums[i].first / sums[i].second);
    out += buf;
  }
  return out;
}

namespace {

Matrix fig2_b1() {
  const double s = std::sqrt(3.0) / 8.0;
  Matrix b(2, 2);
  b << 0.75, s, s, 0.5;
  return b;
}

Matrix fig2_b2() {
  const double s = 3.0 * std::sqrt(3.0) / 8.0;
  Matrix b(2, 2);
  b << 0.875, s, s, 0.125;
  return b;
}

Matrix fig3_w() {
  const double r = std::sqrt(2.0) / 2.0;
  Matrix w(3, 3);
  w << 0.5, 0.5, -r, 0.5, 0.5, r, r, -r, 0.0;
  return w;
}

Matrix fig3_b(double third_eigenvalue) {
  Vector d(3);
  d << 1.5, 0.2, third_eigenvalue;
  const Matrix w = fig3_w();
  Matrix b = w * d.asDiagonal() * w.transpose();
  return ((b + b.transpose()) / 2.0).eval();
}

std::vector<double> fig3_rho_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 15; ++i) grid.push_back(0.025 + i * (0.2 - 0.025) / 14.0);
  return grid;
}

}  // namespace

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig config;
  if (name == "fig2demo") {
    config.n = 200;
    config.K = 2;
    config.community_sizes = {100, 100};
    config.L = 30;
    config.rho_grid = {0.02, 0.03, 0.04, 0.05, 0.06};
    config.trials = 100;
    config.methods = {cluster::AggregationMethod::Sum, cluster::AggregationMethod::Sos,
                      cluster::AggregationMethod::SosDebias};
    config.b_pattern = BPattern::RandomPair;
    config.b_list = {fig2_b1(), fig2_b2()};
  } else if (name == "fig3" || name == "fig6weighted") {
    config.n = 500;
    config.K = 3;
    config.community_sizes = {200, 50, 250};
    config.L = 100;
    config.rho_grid = fig3_rho_grid();
    config.trials = 100;
    config.methods = {cluster::AggregationMethod::Sum, cluster::AggregationMethod::Sos,
                      cluster::AggregationMethod::SosDebias, cluster::AggregationMethod::Matricize};
    config.b_pattern = BPattern::AlternatingHalves;
    config.b_list = {fig3_b(0.4), fig3_b(-0.4)};
    config.weighted = name == "fig6weighted";
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return config;
}

sbm::ModelSpec fig2demo_spec(double rho, std::uint64_t b_seed) {
  return preset_config("fig2demo").model_for(rho, b_seed);
}

sbm::ModelSpec fig3_spec(double rho) {
  return preset_config("fig3").model_for(rho, 0);
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::vector<std::string> run_sweep_figure(const std::string& name, const std::string& out_dir,
                                          std::optional<int> trials,
                                          std::optional<std::uint64_t> seed) {
  ExperimentConfig config = preset_config(name);
  if (trials) config.trials = *trials;
  if (seed) config.base_seed = *seed;
  const std::vector<ResultRecord> records = run_experiment(config);

  const std::string raw_path = out_dir + "/" + name + ".csv";
  const std::string mean_path = out_dir + "/" + name + "_mean.csv";
  const std::string svg_path = out_dir + "/" + name + ".svg";
  write_file(raw_path, results_to_csv(records));
  write_file(mean_path, mean_rates_to_csv(records));
  plot::emit_plot(mean_path, plot::PlotSpec{"rho", "mean_rate", "method", name}, svg_path);
  return {raw_path, mean_path, svg_path};
}

std::vector<std::string> run_fig4(const std::string& out_dir, std::optional<std::uint64_t> seed) {
  char buf[128];
  std::string gap_csv = "rho,normalization,gap\n";
  for (double rho : fig3_rho_grid()) {
    const aggregate::PopulationSos pop = aggregate::population_sos_with_bias(fig3_spec(rho));
    std::snprintf(buf, sizeof(buf), "%.10g,gap_over_lambda_k,%.10g\n", rho, pop.gap_over_lambda_k);
    gap_csv += buf;
    std::snprintf(buf, sizeof(buf), "%.10g,gap_over_lambda_next,%.10g\n", rho,
                  pop.gap_over_lambda_next);
    gap_csv += buf;
  }

  const std::uint64_t s = seed.value_or(1);
  const sbm::ModelSpec spec = fig3_spec(0.15);
  const MultiLayerGraph graph = sbm::sample(spec, mix(s, kTagEdges));
  const SymMatrix sos = aggregate::sum_of_squares(graph);
  Matrix debias = sos.matrix();
  debias.diagonal().setZero();
  const Vector raw = linalg::sym_eigen(sos).values;
  const Vector adj = linalg::sym_eigen(SymMatrix(std::move(debias))).values;

  std::string eig_csv = "matrix,index,value\n";
  for (Index i = 0; i < raw.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "sos,%lld,%.10g\n", static_cast<long long>(i), raw(i));
    eig_csv += buf;
  }
  for (Index i = 0; i < adj.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "sos_debias,%lld,%.10g\n", static_cast<long long>(i), adj(i));
    eig_csv += buf;
  }

  const std::string gap_path = out_dir + "/fig4_eigengap.csv";
  const std::string eig_path = out_dir + "/fig4_eigenvalues.csv";
  const std::string svg_path = out_dir + "/fig4_eigengap.svg";
  write_file(gap_path, gap_csv);
  write_file(eig_path, eig_csv);
  plot::emit_plot(gap_path, plot::PlotSpec{"rho", "gap", "normalization", "fig4"}, svg_path);
  return {gap_path, eig_path, svg_path};
}

std::vector<std::string> run_fig5(const std::string& out_dir, std::optional<std::uint64_t> seed) {
  char buf[128];
  const std::uint64_t s = seed.value_or(1);
  std::string deg_csv = "rho,node,community,total_degree\n";
  std::string summary_csv = "rho,community,median,q25,q75,iqr_over_median\n";
  const std::vector<double> rhos = {0.025, 0.2};
  for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
    const sbm::ModelSpec spec = fig3_spec(rhos[ri]);
    const MultiLayerGraph graph = sbm::sample(spec, mix(mix(s, ri), kTagEdges));
    Vector total = Vector::Zero(graph.node_count());
    for (const auto& layer : graph.layers()) total += layer.degrees();
    for (Index i = 0; i < total.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.10g,%lld,%d,%.10g\n", rhos[ri],
                    static_cast<long long>(i), spec.theta.labels[static_cast<std::size_t>(i)],
                    total(i));
      deg_csv += buf;
    }
    for (int k = 1; k <= spec.K; ++k) {
      std::vector<double> values;
      for (Index i = 0; i < total.size(); ++i) {
        if (spec.theta.labels[static_cast<std::size_t>(i)] == k) values.push_back(total(i));
      }
      std::sort(values.begin(), values.end());
      const auto q = [&](double p) {
        const double pos = p * (static_cast<double>(values.size()) - 1.0);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (values[hi] - values[lo]) * (pos - static_cast<double>(lo));
      };
      const double median = q(0.5), q25 = q(0.25), q75 = q(0.75);
      std::snprintf(buf, sizeof(buf), "%.10g,%d,%.10g,%.10g,%.10g,%.10g\n", rhos[ri], k, median,
                    q25, q75, (q75 - q25) / median);
      summary_csv += buf;
    }
  }

  const std::string deg_path = out_dir + "/fig5_degrees.csv";
  const std::string summary_path = out_dir + "/fig5_summary.csv";
  const std::string svg_path = out_dir + "/fig5_summary.svg";
  write_file(deg_path, deg_csv);
  write_file(summary_path, summary_csv);
  plot::emit_plot(summary_path, plot::PlotSpec{"community", "iqr_over_median", "rho", "fig5"},
                  svg_path);
  return {deg_path, summary_path, svg_path};
}

}  // namespace

std::vector<std::string> run_figure(const std::string& name, const std::string& out_dir,
                                    std::optional<int> trials,
                                    std::optional<std::uint64_t> seed) {
  std::filesystem::create_directories(out_dir);
  if (name == "fig2demo" || name == "fig3" || name == "fig6weighted") {
    return run_sweep_figure(name, out_dir, trials, seed);
  }
  if (name == "fig4") return run_fig4(out_dir, seed);
  if (name == "fig5") return run_fig5(out_dir, seed);
  throw std::invalid_argument("unknown figure '" + name + "'");
}

}  // namespace mlsbm::experiment
