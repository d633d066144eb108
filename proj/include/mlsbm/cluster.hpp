#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlsbm/linalg.hpp"
#include "mlsbm/types.hpp"

namespace mlsbm::cluster {

/// Aggregation strategies for multi-layer community estimation.
enum class AggregationMethod { Sum, Sos, SosDebias, Matricize };

const char* method_name(AggregationMethod m);
AggregationMethod method_from_name(const std::string& name);

/// Row-wise spectral coordinates. `weights` holds the eigen or singular
/// values backing each column, in descending order; when `weighted` is set,
/// column j of coords is scaled by |weights[j]|.
struct EmbeddingResult {
  Matrix coords;
  Vector weights;
  bool weighted = false;
};

/// Embedding from the leading K eigenvectors (largest eigenvalues) of a
/// symmetric matrix.
EmbeddingResult spectral_embed(const SymMatrix& m, int k, bool weighted);

/// Embedding from the top-K left singular vectors of a rectangular matrix.
EmbeddingResult spectral_embed(const Matrix& m, int k, bool weighted);

/// Embedding built from an existing decomposition. With `singular` set the
/// decomposition is treated as a Gram spectrum: weights become square roots
/// of the (clamped) eigenvalues.
EmbeddingResult embed_from_decomposition(const linalg::EigenDecomposition& d, int k,
                                         bool weighted, bool singular);

/// Lloyd's algorithm with distance-squared seeding. Runs `restarts`
/// independent starts on substreams of `seed` and keeps the lowest SSE
/// (ties to the earliest restart). Empty clusters are repaired by splitting
/// off the point farthest from its centroid.
struct KMeansResult {
  Membership labels;
  Matrix centers;                // K x d
  double sse = 0.0;
  int iterations = 0;
  int repair_events = 0;
  std::vector<double> sse_trace;  // winning restart, one entry per iteration
};

KMeansResult kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed);

/// Hamming distance minimized over label permutations, and its rate per node.
/// Exhaustive over permutations for K <= 8, maximum-weight matching above.
struct MisclusterResult {
  int count = 0;
  double rate = 0.0;
};

MisclusterResult misclustering(const Membership& estimate, const Membership& reference);

/// One-call pipeline: aggregate the graph with the chosen method, embed, and
/// cluster with kmeans (10 restarts).
Membership estimate_communities(const MultiLayerGraph& g, int k, AggregationMethod method,
                                bool weighted, std::uint64_t seed, int restarts = 10);

}  // namespace mlsbm::cluster
