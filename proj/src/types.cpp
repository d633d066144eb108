#include "mlsbm/types.hpp"

#include <string>

namespace mlsbm {

SymMatrix::SymMatrix(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() < 1 || mat_.rows() != mat_.cols()) {
    throw std::invalid_argument("SymMatrix: need a square matrix with n >= 1");
  }
  if (!mat_.allFinite()) {
    throw std::invalid_argument("SymMatrix: non-finite entries");
  }
  const double asym = (mat_ - mat_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * mat_.norm()) {
    throw std::invalid_argument("SymMatrix: asymmetry " + std::to_string(asym) +
                                " exceeds tolerance");
  }
  if (asym > 0.0) {
    mat_ = ((mat_ + mat_.transpose()) / 2.0).eval();
  }
}

AdjacencyMatrix::AdjacencyMatrix(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() < 1 || mat_.rows() != mat_.cols()) {
    throw std::invalid_argument("AdjacencyMatrix: need a square matrix with n >= 1");
  }
  for (Index j = 0; j < mat_.cols(); ++j) {
    for (Index i = 0; i < mat_.rows(); ++i) {
      const double v = mat_(i, j);
      if (v != 0.0 && v != 1.0) {
        throw std::invalid_argument("AdjacencyMatrix: entries must be 0 or 1");
      }
      if (i == j && v != 0.0) {
        throw std::invalid_argument("AdjacencyMatrix: diagonal must be zero");
      }
      if (j < i && v != mat_(j, i)) {
        throw std::invalid_argument("AdjacencyMatrix: matrix must be symmetric");
      }
    }
  }
}

MultiLayerGraph::MultiLayerGraph(std::vector<AdjacencyMatrix> layers)
    : layers_(std::move(layers)) {
  if (layers_.empty()) {
    throw std::invalid_argument("MultiLayerGraph: need at least one layer");
  }
  const Index n = layers_.front().node_count();
  for (const auto& a : layers_) {
    if (a.node_count() != n) {
      throw std::invalid_argument("MultiLayerGraph: layers disagree on node count");
    }
  }
}

void Membership::validate() const {
  if (K < 1) throw std::invalid_argument("Membership: K must be >= 1");
  if (labels.empty()) throw std::invalid_argument("Membership: empty labels");
  for (int v : labels) {
    if (v < 1 || v > K) {
      throw std::invalid_argument("Membership: label " + std::to_string(v) +
                                  " outside {1.." + std::to_string(K) + "}");
    }
  }
}

std::vector<int> Membership::community_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(K), 0);
  for (int v : labels) ++sizes[static_cast<std::size_t>(v - 1)];
  return sizes;
}

}  // namespace mlsbm
