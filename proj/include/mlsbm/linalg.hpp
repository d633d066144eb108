#pragma once

#include <vector>

#include "mlsbm/types.hpp"

namespace mlsbm::linalg {

/// Full spectrum of a symmetric matrix. Eigenvalues are sorted in descending
/// signed order; column j of `vectors` is the unit eigenvector for values[j],
/// with its sign fixed so the largest-magnitude entry is positive (ties on
/// magnitude resolved toward the lowest index).
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

EigenDecomposition sym_eigen(const SymMatrix& m);

/// Selects K eigenvector columns ordered by descending |value|, ties broken
/// by descending signed value and then by position in the decomposition.
Matrix top_k_by_magnitude(const EigenDecomposition& d, int k);

/// Column indices behind top_k_by_magnitude, same ordering rules.
std::vector<Index> top_k_indices_by_magnitude(const EigenDecomposition& d, int k);

/// Largest singular value of a dense matrix. Symmetric inputs go straight
/// through sym_eigen; rectangular inputs through the smaller Gram product.
double operator_norm(const Matrix& m);

/// [[0, M], [M^T, 0]], a symmetric (n+m) x (n+m) matrix whose spectrum is
/// plus/minus the singular values of M padded with zeros.
SymMatrix symmetric_dilation(const Matrix& m);

/// Top-K left singular vectors, computed from the eigenvectors of M M^T,
/// signs fixed as in sym_eigen.
Matrix left_singular_vectors(const Matrix& m, int k);

/// ||U U^T - V V^T||_F / sqrt(2) for column-orthonormal U, V of equal shape.
double subspace_distance(const Matrix& u, const Matrix& v);

}  // namespace mlsbm::linalg
