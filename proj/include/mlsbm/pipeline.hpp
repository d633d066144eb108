#pragma once

#include <string>
#include <vector>

#include "mlsbm/types.hpp"

namespace mlsbm::pipeline {

/// One expression table: rows are samples, columns are genes.
struct ExpressionLayer {
  std::vector<std::string> gene_ids;
  Matrix samples;  // s x g

  void validate() const;
};

/// Parses a delimited text file with a gene-id header row followed by one row
/// of numbers per sample. Tab or comma delimited, autodetected from the
/// header. Missing or malformed fields are reported with their location.
ExpressionLayer read_expression_file(const std::string& path);

/// Pearson correlation across samples between every pair of genes. Errors on
/// zero-variance genes, naming the offender.
SymMatrix pearson_correlation(const ExpressionLayer& layer);

/// Unweighted graph keeping pairs with |correlation| >= tau.
AdjacencyMatrix threshold_adjacency(const SymMatrix& corr, double tau);

/// Drops nodes whose degree summed over all layers is below min_total.
/// `kept` maps new node indices to original ones, ascending.
struct DegreeFilterResult {
  std::vector<int> kept;
  MultiLayerGraph graph;

  DegreeFilterResult(std::vector<int> kept_in, MultiLayerGraph graph_in)
      : kept(std::move(kept_in)), graph(std::move(graph_in)) {}
};

DegreeFilterResult total_degree_filter(const MultiLayerGraph& g, long min_total);

/// Connected component count and sizes (descending).
struct Components {
  int count = 0;
  std::vector<int> sizes;
};

Components connected_components(const AdjacencyMatrix& a);

/// Negated Pearson correlation between log degree and log frequency over the
/// positive-degree support. Larger values mean a cleaner power-law decay.
/// Needs at least two distinct positive degrees.
double powerlaw_fit_stat(const std::vector<int>& degrees);

/// Leading spectrum magnitudes for elbow inspection: top max_k of |eigenvalue|
/// for symmetric input, singular values for rectangular input.
Vector scree(const SymMatrix& m, int max_k);
Vector scree(const Matrix& m, int max_k);

}  // namespace mlsbm::pipeline
