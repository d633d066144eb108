#include "mlsbm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mlsbm::linalg {
namespace {

// Largest-magnitude entry positive; magnitude ties resolved toward the
// lowest index so the convention is deterministic.
void fix_column_signs(Matrix& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index best = 0;
    double best_abs = std::abs(vectors(0, j));
    for (Index i = 1; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (vectors(best, j) < 0.0) vectors.col(j) = -vectors.col(j);
  }
}

void check_orthonormal(const Matrix& u, const char* who) {
  const Matrix gram = u.transpose() * u;
  const double err = (gram - Matrix::Identity(u.cols(), u.cols())).norm();
  if (err > 1e-8) {
    throw std::invalid_argument(std::string(who) +
                                ": columns not orthonormal, error " + std::to_string(err));
  }
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sym_eigen: eigensolver failed to converge on a " +
                             std::to_string(m.size()) + "x" + std::to_string(m.size()) +
                             " matrix");
  }
  const Index n = m.size();
  EigenDecomposition d;
  d.values.resize(n);
  d.vectors.resize(n, n);
  // Solver returns ascending order; flip to descending, stably.
  for (Index j = 0; j < n; ++j) {
    d.values(j) = solver.eigenvalues()(n - 1 - j);
    d.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  fix_column_signs(d.vectors);
  return d;
}

std::vector<Index> top_k_indices_by_magnitude(const EigenDecomposition& d, int k) {
  const Index n = d.values.size();
  if (k < 1 || k > n) {
    throw std::invalid_argument("top_k_by_magnitude: K must be in 1..n");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = std::abs(d.values(a)), mb = std::abs(d.values(b));
    if (ma != mb) return ma > mb;
    if (d.values(a) != d.values(b)) return d.values(a) > d.values(b);
    return a < b;
  });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

Matrix top_k_by_magnitude(const EigenDecomposition& d, int k) {
  const std::vector<Index> order = top_k_indices_by_magnitude(d, k);
  Matrix out(d.vectors.rows(), k);
  for (int j = 0; j < k; ++j) out.col(j) = d.vectors.col(order[static_cast<std::size_t>(j)]);
  return out;
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) throw std::invalid_argument("operator_norm: empty matrix");
  if (!m.allFinite()) throw std::invalid_argument("operator_norm: non-finite entries");
  if (m.rows() == m.cols() &&
      (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * m.norm()) {
    const EigenDecomposition d = sym_eigen(SymMatrix(m));
    return d.values.cwiseAbs().maxCoeff();
  }
  // Rectangular or visibly asymmetric: eigenvalues of the smaller Gram product.
  Matrix gram;
  if (m.rows() <= m.cols()) {
    gram = m * m.transpose();
  } else {
    gram = m.transpose() * m;
  }
  const EigenDecomposition d = sym_eigen(SymMatrix(std::move(gram)));
  return std::sqrt(std::max(0.0, d.values(0)));
}

SymMatrix symmetric_dilation(const Matrix& m) {
  const Index n = m.rows(), c = m.cols();
  Matrix out = Matrix::Zero(n + c, n + c);
  out.topRightCorner(n, c) = m;
  out.bottomLeftCorner(c, n) = m.transpose();
  return SymMatrix(std::move(out));
}

Matrix left_singular_vectors(const Matrix& m, int k) {
  if (k < 1 || k > std::min(m.rows(), m.cols())) {
    throw std::invalid_argument("left_singular_vectors: K must be in 1..min(n,m)");
  }
  const Matrix gram = m * m.transpose();
  const EigenDecomposition d = sym_eigen(SymMatrix(gram));
  // Gram eigenvalues are nonnegative, so descending signed order is already
  // descending singular-value order.
  Matrix out(m.rows(), k);
  for (int j = 0; j < k; ++j) out.col(j) = d.vectors.col(j);
  return out;
}

double subspace_distance(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw std::invalid_argument("subspace_distance: shape mismatch");
  }
  check_orthonormal(u, "subspace_distance");
  check_orthonormal(v, "subspace_distance");
  return (u * u.transpose() - v * v.transpose()).norm() / std::sqrt(2.0);
}

}  // namespace mlsbm::linalg
