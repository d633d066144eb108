#include "mlsbm/aggregate.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mlsbm/linalg.hpp"

namespace mlsbm::aggregate {
namespace {

// A_ell^2 accumulated by enumerating wedges i - k - j, which costs
// sum_k d_k^2 per layer instead of n^3 and stays exact: every entry is an
// integer count either way.
void add_square_wedges(const Matrix& a, Matrix& acc) {
  const Index n = a.rows();
  std::vector<std::vector<Index>> nbrs(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (a(i, j) != 0.0) nbrs[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  for (Index k = 0; k < n; ++k) {
    const auto& nk = nbrs[static_cast<std::size_t>(k)];
    for (Index j : nk) {
      double* col = acc.col(j).data();
      for (Index i : nk) col[i] += 1.0;
    }
  }
}

double wedge_cost(const MultiLayerGraph& g) {
  double cost = 0.0;
  for (const auto& layer : g.layers()) {
    const Vector d = layer.degrees();
    cost += d.squaredNorm();
  }
  return cost;
}

Matrix square_sym(const Matrix& m) {
  Matrix s = Matrix::Zero(m.rows(), m.cols());
  s.selfadjointView<Eigen::Lower>().rankUpdate(m);
  return s.selfadjointView<Eigen::Lower>();
}

}  // namespace

SymMatrix sum_adjacency(const MultiLayerGraph& g) {
  Matrix acc = Matrix::Zero(g.node_count(), g.node_count());
  for (const auto& layer : g.layers()) acc += layer.matrix();
  return SymMatrix(std::move(acc));
}

SymMatrix sum_of_squares(const MultiLayerGraph& g) {
  const Index n = g.node_count();
  Matrix acc = Matrix::Zero(n, n);
  const double dense_cost = static_cast<double>(g.layer_count()) * std::pow(static_cast<double>(n), 3) / 4.0;
  if (wedge_cost(g) < dense_cost) {
    for (const auto& layer : g.layers()) add_square_wedges(layer.matrix(), acc);
  } else {
    for (const auto& layer : g.layers()) acc.selfadjointView<Eigen::Lower>().rankUpdate(layer.matrix());
    acc = Matrix(acc.selfadjointView<Eigen::Lower>());
  }
  return SymMatrix(std::move(acc));
}

SymMatrix bias_adjusted_sos(const MultiLayerGraph& g) {
  Matrix m = sum_of_squares(g).matrix();
  m.diagonal().setZero();
  return SymMatrix(std::move(m));
}

Matrix matricize(const MultiLayerGraph& g) {
  const Index n = g.node_count();
  const Index L = g.layer_count();
  Matrix out(n, n * L);
  for (Index ell = 0; ell < L; ++ell) {
    out.middleCols(ell * n, n) = g.layer(ell).matrix();
  }
  return out;
}

PopulationSos population_sos_with_bias(const sbm::ModelSpec& spec) {
  spec.validate();
  const Index n = spec.n;

  // Layers sharing a connectivity matrix share P_ell and its degree diagonal,
  // so group before forming any n x n product.
  std::vector<std::pair<std::size_t, int>> groups;  // (index into spec.B, multiplicity)
  for (std::size_t ell = 0; ell < spec.B.size(); ++ell) {
    bool found = false;
    for (auto& [rep, count] : groups) {
      if (spec.B[rep] == spec.B[ell]) {
        ++count;
        found = true;
        break;
      }
    }
    if (!found) groups.emplace_back(ell, 1);
  }

  Matrix acc = Matrix::Zero(n, n);
  for (const auto& [rep, count] : groups) {
    sbm::ModelSpec one = spec;
    one.B = {spec.B[rep]};
    const Matrix p = sbm::population_matrices(one).front().matrix();
    acc += static_cast<double>(count) * square_sym(p);
    const Vector deg = sbm::expected_degrees_layer(one, 0);
    for (Index i = 0; i < n; ++i) {
      acc(i, i) += count * deg(spec.theta.labels[static_cast<std::size_t>(i)] - 1);
    }
  }

  PopulationSos out{SymMatrix(std::move(acc)), Vector(), 0.0, 0.0, false};
  const linalg::EigenDecomposition d = linalg::sym_eigen(out.matrix);
  out.spectrum = d.values;

  const double scale = std::max(1.0, out.matrix.matrix().norm());
  if (spec.K >= n) {
    out.degenerate = true;
    out.gap_over_lambda_k = std::numeric_limits<double>::quiet_NaN();
    out.gap_over_lambda_next = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double lk = d.values(spec.K - 1);
  const double lnext = d.values(spec.K);
  const double gap = lk - lnext;
  if (std::abs(lk) <= 1e-12 * scale || std::abs(lnext) <= 1e-12 * scale) {
    out.degenerate = true;
    out.gap_over_lambda_k = std::numeric_limits<double>::quiet_NaN();
    out.gap_over_lambda_next = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.gap_over_lambda_k = gap / lk;
    out.gap_over_lambda_next = gap / lnext;
  }
  return out;
}

NoiseDecomposition noise_decomposition(const MultiLayerGraph& g, const sbm::ModelSpec& spec) {
  spec.validate();
  if (g.node_count() != spec.n || g.layer_count() != spec.layer_count()) {
    throw std::invalid_argument("noise_decomposition: graph shape disagrees with spec");
  }
  const Index n = g.node_count();
  const std::vector<SymMatrix> pops = sbm::population_matrices(spec);
  Matrix signal = Matrix::Zero(n, n);
  Matrix linear = Matrix::Zero(n, n);
  Matrix quad = Matrix::Zero(n, n);
  for (Index ell = 0; ell < g.layer_count(); ++ell) {
    const Matrix& p = pops[static_cast<std::size_t>(ell)].matrix();
    const Matrix x = g.layer(ell).matrix() - p;
    signal += square_sym(p);
    const Matrix xp = x * p;
    linear += xp + xp.transpose();
    quad += square_sym(x);
  }
  return NoiseDecomposition{SymMatrix(std::move(signal)), SymMatrix(std::move(linear)),
                            SymMatrix(std::move(quad))};
}

}  // namespace mlsbm::aggregate
