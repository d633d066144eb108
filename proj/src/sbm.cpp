#include "mlsbm/sbm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlsbm/rng.hpp"

namespace mlsbm::sbm {

void ModelSpec::validate() const {
  if (n < 1) throw std::invalid_argument("ModelSpec: n must be >= 1");
  if (K < 1 || K > n) throw std::invalid_argument("ModelSpec: K must be in 1..n");
  if (theta.n() != n || theta.K != K) {
    throw std::invalid_argument("ModelSpec: membership shape disagrees with n, K");
  }
  theta.validate();
  for (int size : theta.community_sizes()) {
    if (size == 0) throw std::invalid_argument("ModelSpec: empty community");
  }
  if (B.empty()) throw std::invalid_argument("ModelSpec: need at least one layer");
  if (!(rho >= 0.0)) throw std::invalid_argument("ModelSpec: rho must be nonnegative");
  for (const Matrix& b : B) {
    if (b.rows() != K || b.cols() != K) {
      throw std::invalid_argument("ModelSpec: connectivity matrices must be K x K");
    }
    if (!b.allFinite() || (b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("ModelSpec: connectivity matrices must be finite and symmetric");
    }
    if (b.minCoeff() < 0.0 || rho * b.maxCoeff() > 1.0 + 1e-12) {
      throw std::invalid_argument("ModelSpec: edge probabilities must lie in [0, 1]");
    }
  }
}

MultiLayerGraph sample(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<AdjacencyMatrix> layers;
  layers.reserve(spec.B.size());
  for (const Matrix& b : spec.B) {
    Matrix a = Matrix::Zero(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i) {
      const int ti = spec.theta.labels[static_cast<std::size_t>(i)] - 1;
      for (int j = i + 1; j < spec.n; ++j) {
        const int tj = spec.theta.labels[static_cast<std::size_t>(j)] - 1;
        const double p = spec.rho * b(ti, tj);
        if (rng.next_unit() < p) {
          a(i, j) = 1.0;
          a(j, i) = 1.0;
        }
      }
    }
    layers.emplace_back(std::move(a));
  }
  return MultiLayerGraph(std::move(layers));
}

namespace {

Matrix mean_matrix(const ModelSpec& spec, const Matrix& b, bool zero_diag) {
  Matrix p(spec.n, spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const int ti = spec.theta.labels[static_cast<std::size_t>(i)] - 1;
    for (int j = 0; j < spec.n; ++j) {
      const int tj = spec.theta.labels[static_cast<std::size_t>(j)] - 1;
      p(i, j) = spec.rho * b(ti, tj);
    }
    if (zero_diag) p(i, i) = 0.0;
  }
  return p;
}

}  // namespace

std::vector<SymMatrix> population_matrices(const ModelSpec& spec) {
  spec.validate();
  std::vector<SymMatrix> out;
  out.reserve(spec.B.size());
  for (const Matrix& b : spec.B) out.emplace_back(mean_matrix(spec, b, true));
  return out;
}

std::vector<SymMatrix> population_matrices_with_diag(const ModelSpec& spec) {
  spec.validate();
  std::vector<SymMatrix> out;
  out.reserve(spec.B.size());
  for (const Matrix& b : spec.B) out.emplace_back(mean_matrix(spec, b, false));
  return out;
}

Vector expected_degrees_layer(const ModelSpec& spec, int ell) {
  spec.validate();
  if (ell < 0 || ell >= spec.layer_count()) {
    throw std::invalid_argument("expected_degrees_layer: layer index out of range");
  }
  const Matrix& b = spec.B[static_cast<std::size_t>(ell)];
  const std::vector<int> sizes = spec.theta.community_sizes();
  Vector d(spec.K);
  for (int k = 0; k < spec.K; ++k) {
    double total = 0.0;
    for (int l = 0; l < spec.K; ++l) total += sizes[static_cast<std::size_t>(l)] * b(k, l);
    d(k) = spec.rho * (total - b(k, k));  // no self edge
  }
  return d;
}

Vector expected_degrees(const ModelSpec& spec) {
  spec.validate();
  Vector d = Vector::Zero(spec.K);
  for (int ell = 0; ell < spec.layer_count(); ++ell) d += expected_degrees_layer(spec, ell);
  return d / static_cast<double>(spec.layer_count());
}

std::vector<Matrix> block_means(const MultiLayerGraph& g, const Membership& psi) {
  psi.validate();
  if (psi.n() != g.node_count()) {
    throw std::invalid_argument("block_means: membership length disagrees with graph");
  }
  const std::vector<int> sizes = psi.community_sizes();
  for (int k = 0; k < psi.K; ++k) {
    if (sizes[static_cast<std::size_t>(k)] == 0) {
      throw std::invalid_argument("block_means: community " + std::to_string(k + 1) +
                                  " is empty");
    }
    if (sizes[static_cast<std::size_t>(k)] == 1) {
      throw std::invalid_argument("block_means: community " + std::to_string(k + 1) +
                                  " is a singleton, diagonal block undefined");
    }
  }
  const int n = static_cast<int>(g.node_count());
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(g.layer_count()));
  for (Index ell = 0; ell < g.layer_count(); ++ell) {
    const Matrix& a = g.layer(ell).matrix();
    Matrix sums = Matrix::Zero(psi.K, psi.K);
    for (int i = 0; i < n; ++i) {
      const int ki = psi.labels[static_cast<std::size_t>(i)] - 1;
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        sums(ki, psi.labels[static_cast<std::size_t>(j)] - 1) += a(i, j);
      }
    }
    Matrix means(psi.K, psi.K);
    for (int k = 0; k < psi.K; ++k) {
      for (int l = 0; l < psi.K; ++l) {
        const double nk = sizes[static_cast<std::size_t>(k)];
        const double nl = sizes[static_cast<std::size_t>(l)];
        means(k, l) = (k == l) ? sums(k, l) / (nk * (nk - 1.0)) : sums(k, l) / (nk * nl);
      }
    }
    out.push_back(std::move(means));
  }
  return out;
}

double least_squares_objective(const MultiLayerGraph& g, const Membership& psi) {
  const std::vector<Matrix> means = block_means(g, psi);
  const int n = static_cast<int>(g.node_count());
  double obj = 0.0;
  for (Index ell = 0; ell < g.layer_count(); ++ell) {
    const Matrix& a = g.layer(ell).matrix();
    const Matrix& m = means[static_cast<std::size_t>(ell)];
    for (int i = 0; i < n; ++i) {
      const int ki = psi.labels[static_cast<std::size_t>(i)] - 1;
      for (int j = i + 1; j < n; ++j) {
        const double r = a(i, j) - m(ki, psi.labels[static_cast<std::size_t>(j)] - 1);
        obj += r * r;
      }
    }
  }
  return obj;
}

namespace {

// For binary data the residual sum inside one block with edge sum S over N
// pairs is S - S^2 / N, so the objective only needs per-block pair counts and
// edge sums. Blocks with no pairs (singleton diagonals) contribute nothing.
double pairwise_objective(const MultiLayerGraph& g, const std::vector<int>& labels0, int k) {
  const int n = static_cast<int>(g.node_count());
  std::vector<double> pair_count(static_cast<std::size_t>(k * k), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int a = std::min(labels0[static_cast<std::size_t>(i)], labels0[static_cast<std::size_t>(j)]);
      const int b = std::max(labels0[static_cast<std::size_t>(i)], labels0[static_cast<std::size_t>(j)]);
      pair_count[static_cast<std::size_t>(a * k + b)] += 1.0;
    }
  }
  double obj = 0.0;
  for (Index ell = 0; ell < g.layer_count(); ++ell) {
    const Matrix& adj = g.layer(ell).matrix();
    std::vector<double> edge_sum(static_cast<std::size_t>(k * k), 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (adj(i, j) != 0.0) {
          const int a = std::min(labels0[static_cast<std::size_t>(i)], labels0[static_cast<std::size_t>(j)]);
          const int b = std::max(labels0[static_cast<std::size_t>(i)], labels0[static_cast<std::size_t>(j)]);
          edge_sum[static_cast<std::size_t>(a * k + b)] += 1.0;
        }
      }
    }
    for (int a = 0; a < k; ++a) {
      for (int b = a; b < k; ++b) {
        const double cnt = pair_count[static_cast<std::size_t>(a * k + b)];
        if (cnt > 0.0) {
          const double s = edge_sum[static_cast<std::size_t>(a * k + b)];
          obj += s - s * s / cnt;
        }
      }
    }
  }
  return obj;
}

}  // namespace

Membership exhaustive_least_squares(const MultiLayerGraph& g, int k) {
  const int n = static_cast<int>(g.node_count());
  if (n > 16 || k > 4 || k < 1) {
    throw std::invalid_argument("exhaustive_least_squares: feasible only for n <= 16, K <= 4");
  }
  if (k > n) throw std::invalid_argument("exhaustive_least_squares: K must be <= n");

  // Node 0 is pinned to label 0: every assignment is label-permutation
  // equivalent to one of that form, and the lexicographically smallest
  // minimizer starts with the first label.
  std::vector<int> labels0(static_cast<std::size_t>(n), 0);
  std::vector<int> best;
  double best_obj = 0.0;
  bool have_best = false;

  while (true) {
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int v : labels0) ++counts[static_cast<std::size_t>(v)];
    if (std::all_of(counts.begin(), counts.end(), [](int c) { return c > 0; })) {
      const double obj = pairwise_objective(g, labels0, k);
      if (!have_best || obj < best_obj) {
        best = labels0;
        best_obj = obj;
        have_best = true;
      }
    }
    // Advance the K-ary counter over nodes 1..n-1, most significant first,
    // so assignments are visited in lexicographic order.
    int pos = n - 1;
    while (pos >= 1 && labels0[static_cast<std::size_t>(pos)] == k - 1) {
      labels0[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 1) break;
    ++labels0[static_cast<std::size_t>(pos)];
  }

  if (!have_best) {
    throw std::invalid_argument("exhaustive_least_squares: no assignment with K nonempty communities");
  }
  Membership result;
  result.K = k;
  result.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) result.labels[static_cast<std::size_t>(i)] = best[static_cast<std::size_t>(i)] + 1;
  return result;
}

}  // namespace mlsbm::sbm
