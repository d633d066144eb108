#include "mlsbm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "mlsbm/linalg.hpp"

namespace mlsbm::pipeline {

void ExpressionLayer::validate() const {
  if (gene_ids.empty()) throw std::invalid_argument("ExpressionLayer: no genes");
  if (static_cast<std::size_t>(samples.cols()) != gene_ids.size()) {
    throw std::invalid_argument("ExpressionLayer: header and data disagree on gene count");
  }
  if (samples.rows() < 1) throw std::invalid_argument("ExpressionLayer: no sample rows");
  if (!samples.allFinite()) throw std::invalid_argument("ExpressionLayer: non-finite values");
  std::unordered_set<std::string> seen;
  for (const auto& id : gene_ids) {
    if (!seen.insert(id).second) {
      throw std::invalid_argument("ExpressionLayer: duplicate gene id " + id);
    }
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

ExpressionLayer read_expression_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open expression file " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty file");
  const char delim = line.find('\t') != std::string::npos ? '\t' : ',';

  ExpressionLayer layer;
  layer.gene_ids = split_fields(line, delim);
  const std::size_t g = layer.gene_ids.size();

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line, delim);
    if (fields.size() != g) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(g) + " fields, got " +
                                  std::to_string(fields.size()));
    }
    std::vector<double> row(g);
    for (std::size_t c = 0; c < g; ++c) {
      const std::string& f = fields[c];
      if (f.empty()) {
        throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": missing value in column " +
                                    std::to_string(c + 1));
      }
      std::size_t consumed = 0;
      double value = 0.0;
      try {
        value = std::stod(f, &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      if (consumed != f.size()) {
        throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": bad number '" + f +
                                    "' in column " + std::to_string(c + 1));
      }
      row[c] = value;
    }
    rows.push_back(std::move(row));
  }

  layer.samples.resize(static_cast<Index>(rows.size()), static_cast<Index>(g));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < g; ++c) {
      layer.samples(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  layer.validate();
  return layer;
}

SymMatrix pearson_correlation(const ExpressionLayer& layer) {
  layer.validate();
  const Index s = layer.samples.rows();
  const Index g = layer.samples.cols();
  if (s < 3) throw std::invalid_argument("pearson_correlation: need at least 3 samples");

  Matrix z = layer.samples.rowwise() - layer.samples.colwise().mean();
  for (Index c = 0; c < g; ++c) {
    const double sd = std::sqrt(z.col(c).squaredNorm() / static_cast<double>(s));
    if (sd <= 0.0) {
      throw std::invalid_argument("pearson_correlation: gene " + layer.gene_ids[static_cast<std::size_t>(c)] +
                                  " has zero variance");
    }
    z.col(c) /= sd;
  }
  Matrix corr = (z.transpose() * z) / static_cast<double>(s);
  corr = corr.cwiseMax(-1.0).cwiseMin(1.0);
  corr.diagonal().setOnes();
  return SymMatrix(std::move(corr));
}

AdjacencyMatrix threshold_adjacency(const SymMatrix& corr, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("threshold_adjacency: tau must lie in [0, 1]");
  }
  const Matrix& c = corr.matrix();
  if (c.cwiseAbs().maxCoeff() > 1.0 + 1e-9) {
    throw std::invalid_argument("threshold_adjacency: entries outside [-1, 1]");
  }
  const Index n = c.rows();
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(c(i, j)) >= tau) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return AdjacencyMatrix(std::move(a));
}

DegreeFilterResult total_degree_filter(const MultiLayerGraph& g, long min_total) {
  if (min_total < 0) throw std::invalid_argument("total_degree_filter: min_total must be >= 0");
  const Index n = g.node_count();
  Vector total = Vector::Zero(n);
  for (const auto& layer : g.layers()) total += layer.degrees();

  std::vector<int> kept;
  for (Index i = 0; i < n; ++i) {
    if (total(i) >= static_cast<double>(min_total)) kept.push_back(static_cast<int>(i));
  }
  if (kept.empty()) {
    throw std::invalid_argument("total_degree_filter: no node reaches total degree " +
                                std::to_string(min_total));
  }

  const Index m = static_cast<Index>(kept.size());
  std::vector<AdjacencyMatrix> layers;
  layers.reserve(static_cast<std::size_t>(g.layer_count()));
  for (const auto& layer : g.layers()) {
    Matrix sub(m, m);
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        sub(a, b) = layer.matrix()(kept[static_cast<std::size_t>(a)], kept[static_cast<std::size_t>(b)]);
      }
    }
    layers.emplace_back(std::move(sub));
  }
  return DegreeFilterResult(std::move(kept), MultiLayerGraph(std::move(layers)));
}

namespace {

// Union by rank with path compression.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[static_cast<std::size_t>(a)] < rank_[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    if (rank_[static_cast<std::size_t>(a)] == rank_[static_cast<std::size_t>(b)]) ++rank_[static_cast<std::size_t>(a)];
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

}  // namespace

Components connected_components(const AdjacencyMatrix& a) {
  const int n = static_cast<int>(a.node_count());
  UnionFind uf(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a.matrix()(i, j) != 0.0) uf.unite(i, j);
    }
  }
  std::map<int, int> sizes;
  for (int i = 0; i < n; ++i) ++sizes[uf.find(i)];
  Components out;
  out.count = static_cast<int>(sizes.size());
  for (const auto& [root, size] : sizes) out.sizes.push_back(size);
  std::sort(out.sizes.begin(), out.sizes.end(), std::greater<int>());
  return out;
}

double powerlaw_fit_stat(const std::vector<int>& degrees) {
  if (degrees.empty()) throw std::invalid_argument("powerlaw_fit_stat: empty degree sequence");
  std::map<int, int> freq;
  for (int d : degrees) {
    if (d < 0) throw std::invalid_argument("powerlaw_fit_stat: negative degree");
    if (d > 0) ++freq[d];
  }
  if (freq.size() < 2) {
    throw std::invalid_argument("powerlaw_fit_stat: need at least two distinct positive degrees");
  }
  const double total = static_cast<double>(degrees.size());
  std::vector<double> xs, ys;
  for (const auto& [d, count] : freq) {
    xs.push_back(std::log(static_cast<double>(d)));
    ys.push_back(std::log(static_cast<double>(count) / total));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw std::invalid_argument("powerlaw_fit_stat: degenerate log-log spread");
  }
  return -sxy / std::sqrt(sxx * syy);
}

Vector scree(const SymMatrix& m, int max_k) {
  if (max_k < 1) throw std::invalid_argument("scree: max_k must be >= 1");
  const linalg::EigenDecomposition d = linalg::sym_eigen(m);
  Vector mags = d.values.cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<double>());
  const Index k = std::min<Index>(max_k, mags.size());
  return mags.head(k);
}

Vector scree(const Matrix& m, int max_k) {
  if (max_k < 1) throw std::invalid_argument("scree: max_k must be >= 1");
  Matrix gram = m.rows() <= m.cols() ? Matrix(m * m.transpose()) : Matrix(m.transpose() * m);
  const linalg::EigenDecomposition d = linalg::sym_eigen(SymMatrix(std::move(gram)));
  const Index k = std::min<Index>(max_k, d.values.size());
  Vector out(k);
  for (Index i = 0; i < k; ++i) out(i) = std::sqrt(std::max(0.0, d.values(i)));
  return out;
}

}  // namespace mlsbm::pipeline
