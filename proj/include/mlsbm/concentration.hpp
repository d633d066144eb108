#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mlsbm/types.hpp"

namespace mlsbm::concentration {

/// Moment growth parameters: E|Y|^k <= (v/2) k! R^(k-2) for k >= 2.
struct BernsteinParams {
  double v = 0.0;
  double R = 0.0;
};

/// Parameters certified for a centered Bernoulli(p) variable Y = A - p with
/// p <= 1/2: the variable itself, its centered square, and the product of two
/// independent copies.
struct BernoulliBernstein {
  BernsteinParams linear;   // (2p, 1)
  BernsteinParams squared;  // (2p, 1) for Y^2 - E Y^2
  BernsteinParams product;  // (2p^2, 1) for Y Ytilde
};

BernoulliBernstein bernoulli_bernstein(double p);

/// Checks the moment condition for k = 2..k_max against exact absolute
/// moments supplied by the caller. first_violation is -1 when all pass.
struct BernsteinCheck {
  bool ok = true;
  int first_violation = -1;
};

BernsteinCheck verify_bernstein(const std::function<double(int)>& abs_moment,
                                const BernsteinParams& params, int k_max);

/// Exact k-th absolute moment of a centered Bernoulli(p).
double centered_bernoulli_abs_moment(double p, int k);

/// Norm profile of a family of square coefficient matrices G_ell:
///   sigma1  = sqrt(sum ||G||^2)            (operator norms)
///   sigma2  = max over ell of max(||G||_{2,inf}, ||G^T||_{2,inf})
///   sigma2p = sqrt(sum_ell sum_j G_jj^2)
///   sigma3  = max entry magnitude
///   sigma1p = sqrt(sum ||G||_F^2)
struct SigmaProfile {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double sigma2_prime = 0.0;
  double sigma3 = 0.0;
  double sigma1_prime = 0.0;
};

SigmaProfile sigma_profile(const std::vector<Matrix>& g_list);

/// Splits S = sum_ell X_ell G_ell X_ell^T for symmetric X into the part driven
/// by squared entries (s2) and the rest (s1). The symmetric variant keeps the
/// four rank-one terms per unordered pair; the asymmetric variant keeps only
/// the diagonal contraction sum_ij X_ij^2 e_i e_i^T G_jj.
struct QuadraticSplit {
  Matrix s;   // full sum
  Matrix s1;  // s - s2
  Matrix s2;  // squared-entry part
};

QuadraticSplit quadratic_split_sym(const std::vector<Matrix>& x_list,
                                   const std::vector<Matrix>& g_list);

QuadraticSplit quadratic_split_asym(const std::vector<Matrix>& x_list,
                                    const std::vector<Matrix>& g_list);

/// Decoupled statistic sum_ell X_ell G_ell Xtilde_ell^T with an independent
/// copy Xtilde, split the same way with X_ij Xtilde_ij in place of X_ij^2.
QuadraticSplit decoupled_stat(const std::vector<Matrix>& x_list,
                              const std::vector<Matrix>& xtilde_list,
                              const std::vector<Matrix>& g_list, bool symmetric);

/// Coefficient statistics entering the linear-term tail bound.
struct LinearCoefStats {
  double opnorm_sum_hth = 0.0;  // ||sum H_ell^T H_ell||
  double frob_sq_sum = 0.0;     // sum ||H_ell||_F^2
  double max_row_norm = 0.0;    // max_ell ||H_ell||_{2,inf}
};

LinearCoefStats linear_coef_stats(const std::vector<Matrix>& h_list);

/// Tail bound for ||sum_ell X_ell H_ell|| at threshold t, X_ell n x n with
/// independent (v, R)-controlled entries, H_ell n x m. The symmetric flag
/// switches to the variant valid when each X_ell is symmetric (prefactor
/// 4(m+n), exponent t^2/8 instead of t^2/2).
double bound_linear(double t, int n, int m, const BernsteinParams& params,
                    const LinearCoefStats& coef, bool symmetric = false);

/// Specialization of the s1 tail scale to sparse Bernoulli(rho) layers with
/// G = I: C * sqrt(L) * rho * n * sqrt(log(L + n)).
double bound_s1_sparse(int L, int n, double rho, double C);

/// The three deviation scales for the symmetric quadratic split at a given
/// sigma profile, evaluated with an explicit constant C.
struct QuadraticBounds {
  double s1 = 0.0;
  double s2 = 0.0;
  double total = 0.0;
};

QuadraticBounds bound_quadratic_sym(int L, int n, const BernsteinParams& linear,
                                    const BernsteinParams& squared,
                                    const BernsteinParams& product,
                                    const SigmaProfile& profile, double C);

/// Degree and operator-norm statistics of a sampled multi-layer graph next to
/// the deterministic scales they should track at density rho:
///   max_ell,i d_ell,i      vs log(L + n)
///   max_i sum_ell d_ell,i  vs L * n * rho
///   sum_ell,i d_ell,i      vs L * n^2 * rho
///   ||sum A_ell^2||        vs L * n * rho
struct CountingChecks {
  double max_layer_degree = 0.0;
  double max_total_degree = 0.0;
  double sum_degrees = 0.0;
  double sos_opnorm = 0.0;
  double scale_max_layer_degree = 0.0;
  double scale_max_total_degree = 0.0;
  double scale_sum_degrees = 0.0;
  double scale_sos_opnorm = 0.0;
};

CountingChecks counting_checks(const MultiLayerGraph& g, double rho);

/// Monte Carlo study of an operator-norm statistic over symmetric
/// zero-diagonal Bernoulli(rho) layers with identity coefficients.
enum class McStatistic { S1, S2Centered, Linear, S1Decoupled };

const char* mc_statistic_name(McStatistic s);
McStatistic mc_statistic_from_name(const std::string& name);

struct McStudyConfig {
  McStatistic statistic = McStatistic::S1;
  int n = 0;
  std::vector<int> L_grid;
  std::vector<double> rho_grid;
  int reps = 0;
  std::uint64_t base_seed = 1;
};

struct McSample {
  McStatistic statistic;
  int n = 0;
  int L = 0;
  double rho = 0.0;
  int rep = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
};

struct McPointSummary {
  int L = 0;
  double rho = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
};

struct McStudyResult {
  std::vector<McSample> samples;
  std::vector<McPointSummary> points;
  /// Slope of log(median) against log(L) per rho value, least squares.
  std::vector<std::pair<double, double>> slopes;  // (rho, slope)
};

McStudyResult mc_opnorm_study(const McStudyConfig& config);

std::string mc_samples_to_csv(const std::vector<McSample>& samples);

}  // namespace mlsbm::concentration
