#include "mlsbm/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "mlsbm/linalg.hpp"
#include "mlsbm/rng.hpp"

namespace mlsbm::concentration {

BernoulliBernstein bernoulli_bernstein(double p) {
  if (!(p >= 0.0 && p <= 0.5)) {
    throw std::invalid_argument("bernoulli_bernstein: p must lie in [0, 1/2]");
  }
  BernoulliBernstein out;
  out.linear = {2.0 * p, 1.0};
  out.squared = {2.0 * p, 1.0};
  out.product = {2.0 * p * p, 1.0};
  return out;
}

double centered_bernoulli_abs_moment(double p, int k) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("abs_moment: p outside [0, 1]");
  if (k < 1) throw std::invalid_argument("abs_moment: k must be >= 1");
  return p * std::pow(1.0 - p, k) + (1.0 - p) * std::pow(p, k);
}

BernsteinCheck verify_bernstein(const std::function<double(int)>& abs_moment,
                                const BernsteinParams& params, int k_max) {
  if (k_max < 2) throw std::invalid_argument("verify_bernstein: k_max must be >= 2");
  if (params.v < 0.0 || params.R < 0.0) {
    throw std::invalid_argument("verify_bernstein: parameters must be nonnegative");
  }
  BernsteinCheck check;
  double factorial = 1.0;
  for (int k = 2; k <= k_max; ++k) {
    factorial *= k;
    const double bound = 0.5 * params.v * factorial * std::pow(params.R, k - 2);
    const double moment = abs_moment(k);
    if (!std::isfinite(moment)) {
      throw std::invalid_argument("verify_bernstein: moment evaluation not finite");
    }
    if (moment > bound * (1.0 + 1e-9)) {
      check.ok = false;
      check.first_violation = k;
      return check;
    }
  }
  return check;
}

SigmaProfile sigma_profile(const std::vector<Matrix>& g_list) {
  if (g_list.empty()) throw std::invalid_argument("sigma_profile: empty family");
  const Index n = g_list.front().rows();
  SigmaProfile s;
  double op_sq = 0.0, diag_sq = 0.0, frob_sq = 0.0;
  for (const Matrix& g : g_list) {
    if (g.rows() != n || g.cols() != n) {
      throw std::invalid_argument("sigma_profile: matrices must be square and equal-sized");
    }
    const double op = linalg::operator_norm(g);
    op_sq += op * op;
    diag_sq += g.diagonal().squaredNorm();
    frob_sq += g.squaredNorm();
    const double row_norm = g.rowwise().norm().maxCoeff();
    const double col_norm = g.colwise().norm().maxCoeff();
    s.sigma2 = std::max({s.sigma2, row_norm, col_norm});
    s.sigma3 = std::max(s.sigma3, g.cwiseAbs().maxCoeff());
  }
  s.sigma1 = std::sqrt(op_sq);
  s.sigma2_prime = std::sqrt(diag_sq);
  s.sigma1_prime = std::sqrt(frob_sq);
  return s;
}

namespace {

void check_family(const std::vector<Matrix>& x_list, const std::vector<Matrix>& g_list,
                  bool x_symmetric) {
  if (x_list.empty() || x_list.size() != g_list.size()) {
    throw std::invalid_argument("quadratic split: need equally many X and G matrices");
  }
  const Index n = x_list.front().rows();
  for (std::size_t ell = 0; ell < x_list.size(); ++ell) {
    const Matrix& x = x_list[ell];
    const Matrix& g = g_list[ell];
    if (x.rows() != n || x.cols() != n || g.rows() != n || g.cols() != n) {
      throw std::invalid_argument("quadratic split: all matrices must be n x n");
    }
    if (x_symmetric && (x - x.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, x.norm())) {
      throw std::invalid_argument("quadratic split: X matrices must be symmetric");
    }
  }
}

}  // namespace

QuadraticSplit quadratic_split_sym(const std::vector<Matrix>& x_list,
                                   const std::vector<Matrix>& g_list) {
  check_family(x_list, g_list, true);
  const Index n = x_list.front().rows();
  QuadraticSplit out;
  out.s = Matrix::Zero(n, n);
  out.s2 = Matrix::Zero(n, n);
  for (std::size_t ell = 0; ell < x_list.size(); ++ell) {
    const Matrix& x = x_list[ell];
    const Matrix& g = g_list[ell];
    out.s += x * g * x.transpose();
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double sq = x(i, j) * x(i, j);
        out.s2(i, i) += sq * g(j, j);
        out.s2(j, j) += sq * g(i, i);
        out.s2(i, j) += sq * g(j, i);
        out.s2(j, i) += sq * g(i, j);
      }
      out.s2(i, i) += x(i, i) * x(i, i) * g(i, i);
    }
  }
  out.s1 = out.s - out.s2;
  return out;
}

QuadraticSplit quadratic_split_asym(const std::vector<Matrix>& x_list,
                                    const std::vector<Matrix>& g_list) {
  check_family(x_list, g_list, false);
  const Index n = x_list.front().rows();
  QuadraticSplit out;
  out.s = Matrix::Zero(n, n);
  out.s2 = Matrix::Zero(n, n);
  for (std::size_t ell = 0; ell < x_list.size(); ++ell) {
    const Matrix& x = x_list[ell];
    const Matrix& g = g_list[ell];
    out.s += x * g * x.transpose();
    for (Index i = 0; i < n; ++i) {
      double acc = 0.0;
      for (Index j = 0; j < n; ++j) acc += x(i, j) * x(i, j) * g(j, j);
      out.s2(i, i) += acc;
    }
  }
  out.s1 = out.s - out.s2;
  return out;
}

QuadraticSplit decoupled_stat(const std::vector<Matrix>& x_list,
                              const std::vector<Matrix>& xtilde_list,
                              const std::vector<Matrix>& g_list, bool symmetric) {
  check_family(x_list, g_list, symmetric);
  check_family(xtilde_list, g_list, symmetric);
  const Index n = x_list.front().rows();
  QuadraticSplit out;
  out.s = Matrix::Zero(n, n);
  out.s2 = Matrix::Zero(n, n);
  for (std::size_t ell = 0; ell < x_list.size(); ++ell) {
    const Matrix& x = x_list[ell];
    const Matrix& xt = xtilde_list[ell];
    const Matrix& g = g_list[ell];
    out.s += x * g * xt.transpose();
    if (symmetric) {
      for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
          const double prod = x(i, j) * xt(i, j);
          out.s2(i, i) += prod * g(j, j);
          out.s2(j, j) += prod * g(i, i);
          out.s2(i, j) += prod * g(j, i);
          out.s2(j, i) += prod * g(i, j);
        }
        out.s2(i, i) += x(i, i) * xt(i, i) * g(i, i);
      }
    } else {
      for (Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Index j = 0; j < n; ++j) acc += x(i, j) * xt(i, j) * g(j, j);
        out.s2(i, i) += acc;
      }
    }
  }
  out.s1 = out.s - out.s2;
  return out;
}

LinearCoefStats linear_coef_stats(const std::vector<Matrix>& h_list) {
  if (h_list.empty()) throw std::invalid_argument("linear_coef_stats: empty family");
  const Index r = h_list.front().rows();
  const Index m = h_list.front().cols();
  Matrix hth = Matrix::Zero(m, m);
  LinearCoefStats out;
  for (const Matrix& h : h_list) {
    if (h.rows() != r || h.cols() != m) {
      throw std::invalid_argument("linear_coef_stats: matrices must share a shape");
    }
    hth += h.transpose() * h;
    out.frob_sq_sum += h.squaredNorm();
    out.max_row_norm = std::max(out.max_row_norm, h.rowwise().norm().maxCoeff());
  }
  out.opnorm_sum_hth = linalg::operator_norm(hth);
  return out;
}

double bound_linear(double t, int n, int m, const BernsteinParams& params,
                    const LinearCoefStats& coef, bool symmetric) {
  if (t <= 0.0) throw std::invalid_argument("bound_linear: t must be positive");
  if (n < 1 || m < 1) throw std::invalid_argument("bound_linear: need n, m >= 1");
  const double variance_term =
      params.v * std::max(static_cast<double>(n) * coef.opnorm_sum_hth, coef.frob_sq_sum);
  const double denom = variance_term + params.R * coef.max_row_norm * t;
  if (denom <= 0.0) return 0.0;
  const double numer = symmetric ? t * t / 8.0 : t * t / 2.0;
  const double prefactor = symmetric ? 4.0 * (m + n) : 2.0 * (m + n);
  return prefactor * std::exp(-numer / denom);
}

double bound_s1_sparse(int L, int n, double rho, double C) {
  if (L < 1 || n < 1) throw std::invalid_argument("bound_s1_sparse: need L, n >= 1");
  if (rho < 0.0 || C < 0.0) throw std::invalid_argument("bound_s1_sparse: bad rho or C");
  return C * std::sqrt(static_cast<double>(L)) * rho * n *
         std::sqrt(std::log(static_cast<double>(L + n)));
}

QuadraticBounds bound_quadratic_sym(int L, int n, const BernsteinParams& linear,
                                    const BernsteinParams& squared,
                                    const BernsteinParams& product,
                                    const SigmaProfile& profile, double C) {
  if (L < 1 || n < 1) throw std::invalid_argument("bound_quadratic_sym: need L, n >= 1");
  if (C <= 0.0) throw std::invalid_argument("bound_quadratic_sym: C must be positive");
  const double lg = std::log(static_cast<double>(L + n));
  const double v1 = linear.v, r1 = linear.R;
  const double v2 = squared.v, r2 = squared.R;
  const double v2p = product.v, r2p = product.R;

  QuadraticBounds out;
  out.s1 = C * (v1 * n * lg * profile.sigma1 +
                std::sqrt(v1) * r1 * std::sqrt(static_cast<double>(L) * n) * std::pow(lg, 1.5) *
                    profile.sigma2 +
                std::sqrt(v2p) * lg * (std::sqrt(static_cast<double>(L)) * profile.sigma2 +
                                       profile.sigma2_prime) +
                (r1 * r1 + r2p) * lg * lg * profile.sigma3);
  out.s2 = C * (std::sqrt(v2) * lg * (std::sqrt(static_cast<double>(L)) * profile.sigma2 +
                                      profile.sigma2_prime) +
                r2 * lg * profile.sigma3);
  out.total = C * (v1 * n * lg * profile.sigma1 +
                   std::sqrt(v1) * r1 * std::sqrt(static_cast<double>(L) * n) * std::pow(lg, 1.5) *
                       profile.sigma2 +
                   std::sqrt(v2p + v2) * lg * (std::sqrt(static_cast<double>(L)) * profile.sigma2 +
                                               profile.sigma2_prime) +
                   (r1 * r1 + r2 + r2p) * lg * lg * profile.sigma3);
  return out;
}

CountingChecks counting_checks(const MultiLayerGraph& g, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("counting_checks: rho must be positive");
  const double n = static_cast<double>(g.node_count());
  const double L = static_cast<double>(g.layer_count());
  CountingChecks out;
  Vector total = Vector::Zero(g.node_count());
  Matrix sos = Matrix::Zero(g.node_count(), g.node_count());
  for (const auto& layer : g.layers()) {
    const Vector d = layer.degrees();
    out.max_layer_degree = std::max(out.max_layer_degree, d.maxCoeff());
    total += d;
    sos.selfadjointView<Eigen::Lower>().rankUpdate(layer.matrix());
  }
  out.max_total_degree = total.maxCoeff();
  out.sum_degrees = total.sum();
  out.sos_opnorm = linalg::operator_norm(Matrix(sos.selfadjointView<Eigen::Lower>()));
  out.scale_max_layer_degree = std::log(L + n);
  out.scale_max_total_degree = L * n * rho;
  out.scale_sum_degrees = L * n * n * rho;
  out.scale_sos_opnorm = L * n * rho;
  return out;
}

const char* mc_statistic_name(McStatistic s) {
  switch (s) {
    case McStatistic::S1: return "s1";
    case McStatistic::S2Centered: return "s2_centered";
    case McStatistic::Linear: return "linear";
    case McStatistic::S1Decoupled: return "s1_decoupled";
  }
  throw std::invalid_argument("mc_statistic_name: unknown statistic");
}

McStatistic mc_statistic_from_name(const std::string& name) {
  if (name == "s1") return McStatistic::S1;
  if (name == "s2_centered") return McStatistic::S2Centered;
  if (name == "linear") return McStatistic::Linear;
  if (name == "s1_decoupled") return McStatistic::S1Decoupled;
  throw std::invalid_argument("unknown statistic: " + name);
}

namespace {

// One symmetric zero-diagonal Bernoulli(rho) layer, pairs i < j row-major.
Matrix sample_er_layer(int n, double rho, Rng& rng) {
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.next_unit() < rho) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

void add_product_wedges(const Matrix& a, const Matrix& b, Matrix& acc) {
  const Index n = a.rows();
  std::vector<std::vector<Index>> na(static_cast<std::size_t>(n)), nb(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (a(i, j) != 0.0) na[static_cast<std::size_t>(j)].push_back(i);
      if (b(i, j) != 0.0) nb[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  for (Index k = 0; k < n; ++k) {
    for (Index j : nb[static_cast<std::size_t>(k)]) {
      double* col = acc.col(j).data();
      for (Index i : na[static_cast<std::size_t>(k)]) col[i] += 1.0;
    }
  }
}

// The four statistics share the expansion around P = rho (J - I):
//   X P = rho (row_sums(X) 1^T - X),  P X = (X P)^T,
//   P^2 = rho^2 ((n - 2) J + I).
// Accumulating adjacency sums, degree sums, and pairwise products keeps every
// replicate at O(L n^2) instead of L dense products.
double er_statistic(McStatistic stat, int n, int L, double rho, std::uint64_t seed) {
  Rng rng(seed);
  const double nn = static_cast<double>(n);

  Matrix prod_acc = Matrix::Zero(n, n);  // sum A_ell^2 or sum A_ell Atilde_ell
  Matrix sum_a = Matrix::Zero(n, n);
  Matrix sum_at = Matrix::Zero(n, n);
  Vector deg_sum = Vector::Zero(n);
  Vector deg_sum_t = Vector::Zero(n);
  Vector s2_diag = Vector::Zero(n);

  const bool decoupled = stat == McStatistic::S1Decoupled;
  for (int ell = 0; ell < L; ++ell) {
    const Matrix a = sample_er_layer(n, rho, rng);
    const Matrix at = decoupled ? sample_er_layer(n, rho, rng) : Matrix();
    const Vector d = a.rowwise().sum();
    deg_sum += d;
    sum_a += a;
    if (decoupled) {
      const Vector dt = at.rowwise().sum();
      deg_sum_t += dt;
      sum_at += at;
      add_product_wedges(a, at, prod_acc);
      // (S2)_ii = sum_j (A - rho)(Atilde - rho) = common_i - rho (d_i + dt_i) + (n-1) rho^2
      const Vector common = (a.cwiseProduct(at)).rowwise().sum();
      s2_diag += common - rho * (d + dt) + Vector::Constant(n, (nn - 1.0) * rho * rho);
    } else {
      add_product_wedges(a, a, prod_acc);
      // (S2)_ii = sum_j X_ij^2 = (n-1) rho^2 + (1 - 2 rho) d_i
      s2_diag += (1.0 - 2.0 * rho) * d + Vector::Constant(n, (nn - 1.0) * rho * rho);
    }
  }

  if (stat == McStatistic::Linear) {
    // sum X_ell P = rho [ (sum_ell r_ell) 1^T - sum_ell X_ell ] with
    // r_ell = d_ell - (n-1) rho 1 and sum X_ell = sum A_ell - L rho (J - I).
    const Vector r = deg_sum - Vector::Constant(n, (nn - 1.0) * rho * L);
    Matrix m = r * Eigen::RowVectorXd::Ones(n);
    m -= sum_a;
    m += L * rho * (Matrix::Ones(n, n) - Matrix::Identity(n, n));
    m *= rho;
    return linalg::operator_norm(m);
  }

  if (stat == McStatistic::S2Centered) {
    const Vector centered =
        s2_diag - Vector::Constant(n, L * (nn - 1.0) * rho * (1.0 - rho));
    return centered.cwiseAbs().maxCoeff();
  }

  // Full S (or decoupled S) from the expansion.
  Matrix s = prod_acc;
  if (decoupled) {
    // S = sum A Atilde - rho (dA 1^T + 1 dAt^T) + rho (A + Atilde)
    //     + L rho^2 ((n-2) J + I)
    s -= rho * (deg_sum * Eigen::RowVectorXd::Ones(n));
    s -= rho * (Eigen::VectorXd::Ones(n) * deg_sum_t.transpose());
    s += rho * (sum_a + sum_at);
  } else {
    s -= rho * (deg_sum * Eigen::RowVectorXd::Ones(n));
    s -= rho * (Eigen::VectorXd::Ones(n) * deg_sum.transpose());
    s += 2.0 * rho * sum_a;
  }
  s += static_cast<double>(L) * rho * rho *
       ((nn - 2.0) * Matrix::Ones(n, n) + Matrix::Identity(n, n));
  s.diagonal() -= s2_diag;  // S1 = S - S2 with diagonal S2
  return linalg::operator_norm(s);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

McStudyResult mc_opnorm_study(const McStudyConfig& config) {
  if (config.n < 2) throw std::invalid_argument("mc_opnorm_study: need n >= 2");
  if (config.reps < 1) throw std::invalid_argument("mc_opnorm_study: need reps >= 1");
  if (config.L_grid.empty() || config.rho_grid.empty()) {
    throw std::invalid_argument("mc_opnorm_study: empty grid");
  }
  for (int L : config.L_grid) {
    if (L < 1) throw std::invalid_argument("mc_opnorm_study: L must be >= 1");
  }
  for (double rho : config.rho_grid) {
    if (!(rho >= 0.0 && rho <= 0.5)) {
      throw std::invalid_argument("mc_opnorm_study: rho must lie in [0, 1/2]");
    }
  }

  McStudyResult out;
  std::size_t g = 0;
  for (int L : config.L_grid) {
    for (double rho : config.rho_grid) {
      std::vector<double> values;
      values.reserve(static_cast<std::size_t>(config.reps));
      for (int rep = 0; rep < config.reps; ++rep) {
        const std::uint64_t seed = mix(mix(config.base_seed, g), static_cast<std::uint64_t>(rep));
        const double value = er_statistic(config.statistic, config.n, L, rho, seed);
        out.samples.push_back({config.statistic, config.n, L, rho, rep, seed, value});
        values.push_back(value);
      }
      std::sort(values.begin(), values.end());
      out.points.push_back({L, rho, quantile_sorted(values, 0.25), quantile_sorted(values, 0.5),
                            quantile_sorted(values, 0.75)});
      ++g;
    }
  }

  // Least-squares slope of log median against log L, one fit per rho.
  for (std::size_t ri = 0; ri < config.rho_grid.size(); ++ri) {
    const double rho = config.rho_grid[ri];
    std::vector<double> xs, ys;
    for (const auto& pt : out.points) {
      if (pt.rho == rho && pt.median > 0.0) {
        xs.push_back(std::log(static_cast<double>(pt.L)));
        ys.push_back(std::log(pt.median));
      }
    }
    if (xs.size() >= 2) {
      const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
      const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
      }
      out.slopes.emplace_back(rho, num / den);
    }
  }
  return out;
}

std::string mc_samples_to_csv(const std::vector<McSample>& samples) {
  std::string out = "statistic,n,L,rho,rep,seed,value\n";
  char buf[160];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.10g,%d,%llu,%.10g\n", mc_statistic_name(s.statistic),
                  s.n, s.L, s.rho, s.rep, static_cast<unsigned long long>(s.seed), s.value);
    out += buf;
  }
  return out;
}

}  // namespace mlsbm::concentration
