#pragma once

#include "mlsbm/sbm.hpp"
#include "mlsbm/types.hpp"

namespace mlsbm::aggregate {

/// Sum of adjacency matrices over layers.
SymMatrix sum_adjacency(const MultiLayerGraph& g);

/// Sum of squared adjacency matrices. Entry (i, j) counts common neighbors of
/// i and j summed over layers; the diagonal carries the total degrees.
SymMatrix sum_of_squares(const MultiLayerGraph& g);

/// Bias-adjusted sum of squares: sum_of_squares with the diagonal zeroed,
/// which subtracts each layer's degree matrix exactly.
SymMatrix bias_adjusted_sos(const MultiLayerGraph& g);

/// Layers glued side by side into an n x (L*n) matrix, layer ell occupying
/// columns [ell*n, (ell+1)*n).
Matrix matricize(const MultiLayerGraph& g);

/// Population counterpart of the raw sum of squares including its diagonal
/// bias term: sum_ell (P_ell^2 + Dtilde_ell) with Dtilde the expected degree
/// diagonal. Exposes the eigengap between values K and K+1 under both
/// normalizations since either is used as a separation diagnostic.
struct PopulationSos {
  SymMatrix matrix;
  Vector spectrum;               // descending
  double gap_over_lambda_k;      // (l_K - l_{K+1}) / l_K
  double gap_over_lambda_next;   // (l_K - l_{K+1}) / l_{K+1}
  bool degenerate;               // true when a normalizer is too small
};

PopulationSos population_sos_with_bias(const sbm::ModelSpec& spec);

/// Exact split of the sampled sum of squares around its mean structure:
/// sum A_ell^2 = signal + linear + quadratic with X_ell = A_ell - P_ell,
/// signal = sum P_ell^2, linear = sum (X_ell P_ell + P_ell X_ell),
/// quadratic = sum X_ell^2.
struct NoiseDecomposition {
  SymMatrix signal;
  SymMatrix linear;
  SymMatrix quadratic;
};

NoiseDecomposition noise_decomposition(const MultiLayerGraph& g, const sbm::ModelSpec& spec);

}  // namespace mlsbm::aggregate
