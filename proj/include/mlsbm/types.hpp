#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace mlsbm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense real symmetric matrix. Construction symmetrizes inputs whose
/// asymmetry is at most 1e-10 * ||M||_F and rejects anything worse, so the
/// symmetric invariant holds exactly afterwards.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix m);

  Index size() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }

 private:
  Matrix mat_;
};

/// Simple undirected graph on n nodes stored as a dense 0/1 matrix with zero
/// diagonal. The constructor validates all three properties.
class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(Matrix m);

  Index node_count() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }
  Vector degrees() const { return mat_.rowwise().sum(); }

 private:
  Matrix mat_;
};

/// L adjacency matrices on a shared node set.
class MultiLayerGraph {
 public:
  explicit MultiLayerGraph(std::vector<AdjacencyMatrix> layers);

  Index layer_count() const { return static_cast<Index>(layers_.size()); }
  Index node_count() const { return layers_.front().node_count(); }
  const AdjacencyMatrix& layer(Index ell) const { return layers_.at(static_cast<std::size_t>(ell)); }
  const std::vector<AdjacencyMatrix>& layers() const { return layers_; }

 private:
  std::vector<AdjacencyMatrix> layers_;
};

/// Community assignment: labels[i] in {1..K}.
struct Membership {
  std::vector<int> labels;
  int K = 0;

  int n() const { return static_cast<int>(labels.size()); }
  void validate() const;
  /// Number of nodes carrying each label, index 0 = label 1.
  std::vector<int> community_sizes() const;
};

}  // namespace mlsbm
