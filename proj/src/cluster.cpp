#include "mlsbm/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mlsbm/aggregate.hpp"
#include "mlsbm/rng.hpp"

namespace mlsbm::cluster {

const char* method_name(AggregationMethod m) {
  switch (m) {
    case AggregationMethod::Sum: return "sum";
    case AggregationMethod::Sos: return "sos";
    case AggregationMethod::SosDebias: return "sos_debias";
    case AggregationMethod::Matricize: return "matricize";
  }
  throw std::invalid_argument("method_name: unknown method");
}

AggregationMethod method_from_name(const std::string& name) {
  if (name == "sum") return AggregationMethod::Sum;
  if (name == "sos") return AggregationMethod::Sos;
  if (name == "sos_debias") return AggregationMethod::SosDebias;
  if (name == "matricize") return AggregationMethod::Matricize;
  throw std::invalid_argument("unknown aggregation method: " + name);
}

EmbeddingResult embed_from_decomposition(const linalg::EigenDecomposition& d, int k,
                                         bool weighted, bool singular) {
  if (k < 1 || k > d.values.size()) {
    throw std::invalid_argument("embed_from_decomposition: K must be in 1..n");
  }
  // Leading K eigenpairs in descending eigenvalue order. The informative
  // block structure sits in the algebraically largest eigenvalues; selecting
  // by magnitude instead can pick up the negative edge of the noise bulk on
  // diagonal-removed input and merge communities.
  EmbeddingResult out;
  out.coords.resize(d.vectors.rows(), k);
  out.weights.resize(k);
  for (int j = 0; j < k; ++j) {
    out.coords.col(j) = d.vectors.col(j);
    out.weights(j) = singular ? std::sqrt(std::max(0.0, d.values(j))) : d.values(j);
  }
  out.weighted = weighted;
  if (weighted) {
    for (int j = 0; j < k; ++j) out.coords.col(j) *= std::abs(out.weights(j));
  }
  return out;
}

EmbeddingResult spectral_embed(const SymMatrix& m, int k, bool weighted) {
  if (k < 1 || k > m.size()) throw std::invalid_argument("spectral_embed: K must be in 1..n");
  return embed_from_decomposition(linalg::sym_eigen(m), k, weighted, false);
}

EmbeddingResult spectral_embed(const Matrix& m, int k, bool weighted) {
  if (k < 1 || k > std::min(m.rows(), m.cols())) {
    throw std::invalid_argument("spectral_embed: K must be in 1..min(n,m)");
  }
  const Matrix gram = m * m.transpose();
  return embed_from_decomposition(linalg::sym_eigen(SymMatrix(gram)), k, weighted, true);
}

namespace {

struct LloydRun {
  std::vector<int> assign;  // 0-based cluster per point
  Matrix centers;
  double sse = 0.0;
  int iterations = 0;
  int repair_events = 0;
  std::vector<double> sse_trace;
};

double sq_dist(const Matrix& points, Index i, const Matrix& centers, int c) {
  return (points.row(i) - centers.row(c)).squaredNorm();
}

LloydRun lloyd_once(const Matrix& points, int k, Rng& rng) {
  const Index n = points.rows();
  LloydRun run;
  run.centers.resize(k, points.cols());

  // Distance-squared seeding.
  std::vector<double> d2(static_cast<std::size_t>(n), 0.0);
  const Index first = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n)));
  run.centers.row(0) = points.row(first);
  for (Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = sq_dist(points, i, run.centers, 0);
  for (int c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    Index pick = 0;
    if (total > 0.0) {
      const double target = rng.next_unit() * total;
      double cum = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        cum += d2[static_cast<std::size_t>(i)];
        if (cum > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n)));
    }
    run.centers.row(c) = points.row(pick);
    for (Index i = 0; i < n; ++i) {
      d2[static_cast<std::size_t>(i)] =
          std::min(d2[static_cast<std::size_t>(i)], sq_dist(points, i, run.centers, c));
    }
  }

  run.assign.assign(static_cast<std::size_t>(n), 0);
  std::vector<double> cur_dist(static_cast<std::size_t>(n), 0.0);
  const int max_iters = 100;
  for (int iter = 0; iter < max_iters; ++iter) {
    run.iterations = iter + 1;
    // Assignment, ties to the lowest cluster index.
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(points, i, run.centers, 0);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(points, i, run.centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      run.assign[static_cast<std::size_t>(i)] = best;
      cur_dist[static_cast<std::size_t>(i)] = best_d;
    }

    // Repair empty clusters with the farthest point of any multi-point
    // cluster, lowest cluster index first.
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int a : run.assign) ++counts[static_cast<std::size_t>(a)];
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Index far = -1;
      double far_d = -1.0;
      for (Index i = 0; i < n; ++i) {
        const int owner = run.assign[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(owner)] < 2) continue;
        if (cur_dist[static_cast<std::size_t>(i)] > far_d) {
          far_d = cur_dist[static_cast<std::size_t>(i)];
          far = i;
        }
      }
      --counts[static_cast<std::size_t>(run.assign[static_cast<std::size_t>(far)])];
      run.assign[static_cast<std::size_t>(far)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      cur_dist[static_cast<std::size_t>(far)] = 0.0;
      run.centers.row(c) = points.row(far);
      ++run.repair_events;
    }

    run.sse = std::accumulate(cur_dist.begin(), cur_dist.end(), 0.0);
    run.sse_trace.push_back(run.sse);

    // Centroid update.
    Matrix next = Matrix::Zero(k, points.cols());
    for (Index i = 0; i < n; ++i) next.row(run.assign[static_cast<std::size_t>(i)]) += points.row(i);
    double movement = 0.0;
    for (int c = 0; c < k; ++c) {
      next.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      movement = std::max(movement, (next.row(c) - run.centers.row(c)).norm());
    }
    run.centers = next;
    if (movement < 1e-8) break;
  }

  // Final SSE against the converged centers.
  run.sse = 0.0;
  for (Index i = 0; i < n; ++i) {
    run.sse += sq_dist(points, i, run.centers, run.assign[static_cast<std::size_t>(i)]);
  }
  return run;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed) {
  const Index n = points.rows();
  if (k < 1) throw std::invalid_argument("kmeans: K must be >= 1");
  if (n < k) throw std::invalid_argument("kmeans: need at least K points");
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
  if (!points.allFinite()) throw std::invalid_argument("kmeans: non-finite coordinates");

  LloydRun best;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(mix(seed, static_cast<std::uint64_t>(r)));
    LloydRun run = lloyd_once(points, k, rng);
    if (!have || run.sse < best.sse) {
      best = std::move(run);
      have = true;
    }
  }

  KMeansResult out;
  out.labels.K = k;
  out.labels.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    out.labels.labels[static_cast<std::size_t>(i)] = best.assign[static_cast<std::size_t>(i)] + 1;
  }
  out.centers = best.centers;
  out.sse = best.sse;
  out.iterations = best.iterations;
  out.repair_events = best.repair_events;
  out.sse_trace = best.sse_trace;
  return out;
}

namespace {

// Exact assignment via shortest augmenting paths with potentials; minimizes
// total cost over perfect matchings of a k x k matrix.
std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost) {
  const int k = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(k + 1), 0.0), v(static_cast<std::size_t>(k + 1), 0.0);
  std::vector<int> p(static_cast<std::size_t>(k + 1), 0), way(static_cast<std::size_t>(k + 1), 0);
  for (int i = 1; i <= k; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(k + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(k + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(k), 0);
  for (int j = 1; j <= k; ++j) row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return row_to_col;
}

}  // namespace

MisclusterResult misclustering(const Membership& estimate, const Membership& reference) {
  estimate.validate();
  reference.validate();
  if (estimate.n() != reference.n()) {
    throw std::invalid_argument("misclustering: label sequences differ in length");
  }
  if (estimate.K != reference.K) {
    throw std::invalid_argument("misclustering: label sequences differ in K");
  }
  const int k = estimate.K;
  const int n = estimate.n();

  std::vector<std::vector<double>> confusion(
      static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (int i = 0; i < n; ++i) {
    const int a = estimate.labels[static_cast<std::size_t>(i)] - 1;
    const int b = reference.labels[static_cast<std::size_t>(i)] - 1;
    confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += 1.0;
  }

  double best_match = 0.0;
  if (k <= 8) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double match = 0.0;
      for (int a = 0; a < k; ++a) {
        match += confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])];
      }
      best_match = std::max(best_match, match);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<std::vector<double>> cost(
        static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        cost[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            -confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      }
    }
    const std::vector<int> match = hungarian_min(cost);
    for (int a = 0; a < k; ++a) {
      best_match += confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(match[static_cast<std::size_t>(a)])];
    }
  }

  MisclusterResult out;
  out.count = n - static_cast<int>(best_match + 0.5);
  out.rate = static_cast<double>(out.count) / static_cast<double>(n);
  return out;
}

Membership estimate_communities(const MultiLayerGraph& g, int k, AggregationMethod method,
                                bool weighted, std::uint64_t seed, int restarts) {
  EmbeddingResult embedding;
  switch (method) {
    case AggregationMethod::Sum:
      embedding = spectral_embed(aggregate::sum_adjacency(g), k, weighted);
      break;
    case AggregationMethod::Sos:
      embedding = spectral_embed(aggregate::sum_of_squares(g), k, weighted);
      break;
    case AggregationMethod::SosDebias:
      embedding = spectral_embed(aggregate::bias_adjusted_sos(g), k, weighted);
      break;
    case AggregationMethod::Matricize:
      embedding = spectral_embed(aggregate::matricize(g), k, weighted);
      break;
  }
  return kmeans(embedding.coords, k, restarts, seed).labels;
}

}  // namespace mlsbm::cluster
