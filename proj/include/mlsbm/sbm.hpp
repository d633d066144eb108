#pragma once

#include <cstdint>
#include <vector>

#include "mlsbm/types.hpp"

namespace mlsbm::sbm {

/// Multi-layer stochastic block model: n nodes in K communities shared by all
/// layers, layer ell connecting i ~ j with probability rho * B[ell](theta_i, theta_j).
struct ModelSpec {
  int n = 0;
  int K = 0;
  Membership theta;
  double rho = 0.0;
  std::vector<Matrix> B;  // one K x K connectivity matrix per layer

  int layer_count() const { return static_cast<int>(B.size()); }
  void validate() const;
};

/// Samples all layers from one seed. Edges are drawn per layer in ascending
/// layer order, iterating pairs i < j row-major, one uniform draw per pair.
MultiLayerGraph sample(const ModelSpec& spec, std::uint64_t seed);

/// Mean adjacency matrices P_ell = rho * Theta B_ell Theta^T with the diagonal
/// zeroed to match the no-self-loop sampling convention.
std::vector<SymMatrix> population_matrices(const ModelSpec& spec);

/// Same as population_matrices but keeping the diagonal blocks' self terms.
std::vector<SymMatrix> population_matrices_with_diag(const ModelSpec& spec);

/// Expected degree of one node per community, averaged over layers.
Vector expected_degrees(const ModelSpec& spec);

/// Expected degree of one node per community under a single layer.
Vector expected_degrees_layer(const ModelSpec& spec, int ell);

/// Per-layer block mean estimates: diagonal blocks divide by n_k (n_k - 1),
/// off-diagonal blocks by n_k * n_l.
std::vector<Matrix> block_means(const MultiLayerGraph& g, const Membership& psi);

/// Sum over layers and pairs i < j of squared residuals against the block
/// mean fit implied by psi.
double least_squares_objective(const MultiLayerGraph& g, const Membership& psi);

/// Exact minimizer of the block-mean least-squares objective over all
/// assignments with every community nonempty. Feasible only for n <= 16,
/// K <= 4. Ties resolve to the lexicographically smallest label sequence.
Membership exhaustive_least_squares(const MultiLayerGraph& g, int K);

}  // namespace mlsbm::sbm
