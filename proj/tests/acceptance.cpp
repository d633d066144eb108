// Acceptance gate: ten end-to-end checks printed one line each. Exit status
// is the number of failed criteria; --criterion N restricts to a single one.
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mlsbm/aggregate.hpp"
#include "mlsbm/cluster.hpp"
#include "mlsbm/concentration.hpp"
#include "mlsbm/experiment.hpp"
#include "mlsbm/linalg.hpp"
#include "mlsbm/pipeline.hpp"
#include "mlsbm/rng.hpp"
#include "mlsbm/sbm.hpp"

using namespace mlsbm;

namespace {

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// Mean rate per (rho, method) from raw sweep records.
std::map<std::pair<double, std::string>, double> mean_rates(
    const std::vector<experiment::ResultRecord>& records) {
  std::map<std::pair<double, std::string>, std::pair<double, int>> acc;
  for (const auto& rec : records) {
    auto& cell = acc[{rec.rho, rec.method}];
    cell.first += rec.rate;
    cell.second += 1;
  }
  std::map<std::pair<double, std::string>, double> out;
  for (const auto& [key, cell] : acc) out[key] = cell.first / cell.second;
  return out;
}

double grid_value(const std::vector<double>& grid, double target) {
  for (double v : grid) {
    if (std::abs(v - target) < 1e-9) return v;
  }
  throw std::runtime_error("grid point not found");
}

bool criterion_two_community(std::string& detail) {
  experiment::ExperimentConfig config = experiment::preset_config("fig2demo");
  const auto means = mean_rates(experiment::run_experiment(config));

  const double debias06 = means.at({grid_value(config.rho_grid, 0.06), "sos_debias"});
  bool ok = debias06 <= 0.15;
  bool dominated = true;
  for (double target : {0.04, 0.05, 0.06}) {
    const double rho = grid_value(config.rho_grid, target);
    const double debias = means.at({rho, "sos_debias"});
    dominated = dominated && debias < means.at({rho, "sum"}) && debias < means.at({rho, "sos"});
  }
  ok = ok && dominated;
  detail = fmt("debiased mean rate %.4f at the densest point (cap 0.15); beats sum and plain "
               "square aggregate at the three densest points: %s",
               debias06, dominated ? "yes" : "no");
  return ok;
}

bool criterion_three_community(std::string& detail) {
  experiment::ExperimentConfig config = experiment::preset_config("fig3");
  config.trials = 25;
  const auto means = mean_rates(experiment::run_experiment(config));

  double min_sum = 1.0, max_gap = 0.0;
  for (double rho : config.rho_grid) {
    min_sum = std::min(min_sum, means.at({rho, "sum"}));
    max_gap = std::max(max_gap, std::abs(means.at({rho, "sos"}) - means.at({rho, "matricize"})));
  }
  const double rho15 = grid_value(config.rho_grid, 0.15);
  const double debias15 = means.at({rho15, "sos_debias"});
  // The separation is required just below the recovery density; 0.125 and
  // 0.1375 bracket that point on the grid, so demand it at both.
  double min_sep = 1.0;
  for (double target : {0.125, 0.1375}) {
    const double rho = grid_value(config.rho_grid, target);
    min_sep = std::min(min_sep, means.at({rho, "sos"}) - means.at({rho, "sos_debias"}));
  }

  const bool sum_stuck = min_sum >= 0.2;
  const bool overlap = max_gap <= 0.02;
  const bool transition = debias15 <= 0.05 && min_sep >= 0.1;
  detail = fmt("layer-sum floor %.3f (needs >= 0.2); square vs matricized gap %.4f "
               "(cap 0.02); debiased %.4f at density 0.15 (cap 0.05); square minus "
               "debiased separation %.3f just below recovery (needs >= 0.1)",
               min_sum, max_gap, debias15, min_sep);
  return sum_stuck && overlap && transition;
}

bool criterion_population_gap(std::string& detail) {
  const aggregate::PopulationSos lo =
      aggregate::population_sos_with_bias(experiment::fig3_spec(0.025));
  const aggregate::PopulationSos hi =
      aggregate::population_sos_with_bias(experiment::fig3_spec(0.2));
  const bool ok = hi.gap_over_lambda_k > 0.0 && hi.gap_over_lambda_next > 0.0 &&
                  hi.gap_over_lambda_k >= 3.0 * lo.gap_over_lambda_k &&
                  hi.gap_over_lambda_next >= 3.0 * lo.gap_over_lambda_next;
  detail = fmt("relative eigengap %.4f -> %.4f and %.4f -> %.4f across the density grid "
               "(factor >= 3 required)",
               lo.gap_over_lambda_k, hi.gap_over_lambda_k, lo.gap_over_lambda_next,
               hi.gap_over_lambda_next);
  return ok;
}

bool criterion_cross_term_scaling(std::string& detail) {
  concentration::McStudyConfig config;
  config.statistic = concentration::McStatistic::S1;
  config.n = 200;
  config.L_grid = {8, 16, 32, 64, 128};
  config.rho_grid = {0.04};
  config.reps = 200;
  config.base_seed = 1;
  const concentration::McStudyResult result = concentration::mc_opnorm_study(config);
  const double slope = result.slopes.at(0).second;
  detail = fmt("log-log slope of the median cross-term norm against layer count: %.4f "
               "(accepted band [0.4, 0.6])",
               slope);
  return slope >= 0.4 && slope <= 0.6;
}

bool criterion_split_exactness(std::string& detail) {
  Rng rng(5150);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Index n = 2 + static_cast<Index>(rng.next_below(5));
    const int L = 1 + static_cast<int>(rng.next_below(3));
    std::vector<Matrix> xs, xa, xt, gs;
    for (int ell = 0; ell < L; ++ell) {
      Matrix m(n, n), a(n, n), t(n, n), g(n, n);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          m(i, j) = 2.0 * rng.next_unit() - 1.0;
          a(i, j) = 2.0 * rng.next_unit() - 1.0;
          t(i, j) = 2.0 * rng.next_unit() - 1.0;
          g(i, j) = 2.0 * rng.next_unit() - 1.0;
        }
      }
      xs.push_back(((m + m.transpose()) / 2.0).eval());
      xt.push_back(((t + t.transpose()) / 2.0).eval());
      xa.push_back(a);
      gs.push_back(g);
    }

    // Four-index oracles, fully looped.
    auto full_sum = [n, L](const std::vector<Matrix>& x_list, const std::vector<Matrix>& y_list,
                           const std::vector<Matrix>& g_list) {
      Matrix s = Matrix::Zero(n, n);
      for (int ell = 0; ell < L; ++ell) {
        for (Index i = 0; i < n; ++i) {
          for (Index j = 0; j < n; ++j) {
            for (Index a = 0; a < n; ++a) {
              for (Index b = 0; b < n; ++b) {
                s(i, j) += x_list[static_cast<std::size_t>(ell)](i, a) *
                           g_list[static_cast<std::size_t>(ell)](a, b) *
                           y_list[static_cast<std::size_t>(ell)](j, b);
              }
            }
          }
        }
      }
      return s;
    };
    auto s2_sym = [n, L](const std::vector<Matrix>& x_list, const std::vector<Matrix>& y_list,
                         const std::vector<Matrix>& g_list) {
      Matrix s2 = Matrix::Zero(n, n);
      for (int ell = 0; ell < L; ++ell) {
        const Matrix& x = x_list[static_cast<std::size_t>(ell)];
        const Matrix& y = y_list[static_cast<std::size_t>(ell)];
        const Matrix& g = g_list[static_cast<std::size_t>(ell)];
        for (Index i = 0; i < n; ++i) {
          for (Index j = i + 1; j < n; ++j) {
            const double prod = x(i, j) * y(i, j);
            s2(i, i) += prod * g(j, j);
            s2(j, j) += prod * g(i, i);
            s2(i, j) += prod * g(j, i);
            s2(j, i) += prod * g(i, j);
          }
          s2(i, i) += x(i, i) * y(i, i) * g(i, i);
        }
      }
      return s2;
    };
    auto s2_asym = [n, L](const std::vector<Matrix>& x_list, const std::vector<Matrix>& y_list,
                          const std::vector<Matrix>& g_list) {
      Matrix s2 = Matrix::Zero(n, n);
      for (int ell = 0; ell < L; ++ell) {
        for (Index i = 0; i < n; ++i) {
          for (Index j = 0; j < n; ++j) {
            s2(i, i) += x_list[static_cast<std::size_t>(ell)](i, j) *
                        y_list[static_cast<std::size_t>(ell)](i, j) *
                        g_list[static_cast<std::size_t>(ell)](j, j);
          }
        }
      }
      return s2;
    };

    const auto check = [&worst](const concentration::QuadraticSplit& split, const Matrix& s_ref,
                                const Matrix& s2_ref) {
      worst = std::max(worst, (split.s - s_ref).cwiseAbs().maxCoeff());
      worst = std::max(worst, (split.s2 - s2_ref).cwiseAbs().maxCoeff());
      worst = std::max(worst, (split.s1 + split.s2 - s_ref).cwiseAbs().maxCoeff());
    };
    check(concentration::quadratic_split_sym(xs, gs), full_sum(xs, xs, gs), s2_sym(xs, xs, gs));
    check(concentration::quadratic_split_asym(xa, gs), full_sum(xa, xa, gs), s2_asym(xa, xa, gs));
    check(concentration::decoupled_stat(xs, xt, gs, true), full_sum(xs, xt, gs),
          s2_sym(xs, xt, gs));
    check(concentration::decoupled_stat(xa, xa, gs, false), full_sum(xa, xa, gs),
          s2_asym(xa, xa, gs));
  }
  detail = fmt("largest entrywise deviation from the looped oracle across 1000 instances: %.3g "
               "(tolerance 1e-12)",
               worst);
  return worst <= 1e-12;
}

bool criterion_exhaustive_agreement(std::string& detail) {
  sbm::ModelSpec spec;
  spec.n = 8;
  spec.K = 2;
  spec.theta.K = 2;
  spec.theta.labels = {1, 1, 1, 1, 2, 2, 2, 2};
  spec.rho = 1.0;
  Matrix b(2, 2);
  b << 1.0, 0.05, 0.05, 0.9;
  spec.B.assign(3, b);

  int agree = 0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    const MultiLayerGraph g = sbm::sample(spec, 7000 + static_cast<std::uint64_t>(s));
    const Membership spectral = cluster::estimate_communities(
        g, 2, cluster::AggregationMethod::SosDebias, false, 40 + static_cast<std::uint64_t>(s));
    const Membership exact = sbm::exhaustive_least_squares(g, 2);
    if (cluster::misclustering(spectral, exact).count == 0) ++agree;
  }
  detail = fmt("spectral estimate equals the exhaustive least-squares assignment in %d/%d seeded "
               "instances (need >= 45)",
               agree, seeds);
  return agree >= 45;
}

bool criterion_sigma_closed_form(std::string& detail) {
  bool ok = true;
  for (const auto& [n, L] : std::vector<std::pair<int, int>>{{5, 3}, {10, 7}, {50, 20}}) {
    const std::vector<Matrix> eye(static_cast<std::size_t>(L), Matrix::Identity(n, n));
    const concentration::SigmaProfile s = concentration::sigma_profile(eye);
    const double root_l = std::sqrt(static_cast<double>(L));
    const double root_ln = std::sqrt(static_cast<double>(L) * n);
    ok = ok && s.sigma1 == root_l && s.sigma2 == 1.0 && s.sigma2_prime == root_ln &&
         s.sigma3 == 1.0 && s.sigma1_prime == root_ln;
  }
  detail = ok ? "identity coefficient profiles match (sqrt(L), 1, sqrt(Ln), 1, sqrt(Ln)) exactly"
              : "identity coefficient profile mismatch";
  return ok;
}

bool criterion_moment_certificate(std::string& detail) {
  bool ok = true;
  for (const double p : {0.01, 0.1, 0.3, 0.5}) {
    const concentration::BernsteinCheck check = concentration::verify_bernstein(
        [p](int k) {
          return p * std::pow(1.0 - p, 2 * k) + (1.0 - p) * std::pow(p, 2 * k);
        },
        concentration::BernsteinParams{2.0 * p, 1.0}, 20);
    ok = ok && check.ok;
  }
  detail = ok ? "squared centered Bernoulli moments satisfy the (2p, 1) certificate up to k=20"
              : "certificate violated";
  return ok;
}

bool criterion_counting_band(std::string& detail) {
  double worst_ratio = 0.0;
  int within = 0;
  const int seeds = 500;
  for (int s = 0; s < seeds; ++s) {
    const sbm::ModelSpec spec =
        experiment::fig2demo_spec(0.04, 11000 + static_cast<std::uint64_t>(s));
    const MultiLayerGraph g = sbm::sample(spec, 12000 + static_cast<std::uint64_t>(s));
    const concentration::CountingChecks c = concentration::counting_checks(g, 0.04);
    const double ratio = std::max(
        {c.max_layer_degree / c.scale_max_layer_degree,
         c.max_total_degree / c.scale_max_total_degree, c.sum_degrees / c.scale_sum_degrees,
         c.sos_opnorm / c.scale_sos_opnorm});
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio < 20.0) ++within;
  }
  detail = fmt("all four statistics stayed below 20x their scales in %d/%d seeds "
               "(worst ratio %.2f)",
               within, seeds, worst_ratio);
  return within == seeds;
}

bool criterion_kernel_identities(std::string& detail) {
  Rng rng(31337);
  double worst_residual = 0.0, worst_ortho = 0.0, worst_dilation = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Index n = 2 + static_cast<Index>(rng.next_below(49));
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) m(i, j) = 2.0 * rng.next_unit() - 1.0;
    }
    const SymMatrix sym(((m + m.transpose()) / 2.0).eval());
    const linalg::EigenDecomposition d = linalg::sym_eigen(sym);
    const double scale = std::max(1.0, d.values.cwiseAbs().maxCoeff());
    worst_residual = std::max(
        worst_residual,
        (sym.matrix() * d.vectors - d.vectors * d.values.asDiagonal()).cwiseAbs().maxCoeff() /
            scale);
    worst_ortho = std::max(
        worst_ortho, (d.vectors.transpose() * d.vectors - Matrix::Identity(n, n))
                         .cwiseAbs()
                         .maxCoeff());
  }
  for (int rep = 0; rep < 50; ++rep) {
    Matrix m(7, 4);
    for (Index i = 0; i < 7; ++i) {
      for (Index j = 0; j < 4; ++j) m(i, j) = 2.0 * rng.next_unit() - 1.0;
    }
    worst_dilation = std::max(
        worst_dilation,
        std::abs(linalg::operator_norm(linalg::symmetric_dilation(m).matrix()) -
                 linalg::operator_norm(m)));
  }

  // Unfolded layers against the summed squares, in exact integer arithmetic.
  double gram_gap = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    sbm::ModelSpec spec;
    spec.n = 30;
    spec.K = 2;
    spec.theta.K = 2;
    spec.theta.labels.assign(30, 1);
    for (int i = 15; i < 30; ++i) spec.theta.labels[static_cast<std::size_t>(i)] = 2;
    spec.rho = 0.5;
    Matrix b(2, 2);
    b << 0.9, 0.3, 0.3, 0.8;
    spec.B.assign(4, b);
    const MultiLayerGraph g = sbm::sample(spec, 500 + static_cast<std::uint64_t>(rep));
    const Matrix unfolded = aggregate::matricize(g);
    gram_gap = std::max(gram_gap, (unfolded * unfolded.transpose() -
                                   aggregate::sum_of_squares(g).matrix())
                                      .cwiseAbs()
                                      .maxCoeff());
  }

  const bool ok = worst_residual <= 1e-10 && worst_ortho <= 1e-10 && worst_dilation <= 1e-10 &&
                  gram_gap == 0.0;
  detail = fmt("eigen residual %.2g, orthonormality %.2g, dilation norm gap %.2g (all <= 1e-10); "
               "unfolded Gram deviation %.2g (exact)",
               worst_residual, worst_ortho, worst_dilation, gram_gap);
  return ok;
}

struct Criterion {
  int id;
  const char* name;
  bool (*run)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "two-community sweep: debiased aggregate leads at high density", criterion_two_community},
    {2, "three-community sweep: aggregate orderings across the density grid",
     criterion_three_community},
    {3, "population eigengap grows with density", criterion_population_gap},
    {4, "cross-term norm scales like sqrt(layer count)", criterion_cross_term_scaling},
    {5, "quadratic split exactness on random instances", criterion_split_exactness},
    {6, "spectral estimate matches exhaustive least squares", criterion_exhaustive_agreement},
    {7, "identity coefficient profile closed form", criterion_sigma_closed_form},
    {8, "moment certificate for centered Bernoulli squares", criterion_moment_certificate},
    {9, "degree and norm statistics inside the counting band", criterion_counting_band},
    {10, "eigensolver, dilation, and unfolding identities", criterion_kernel_identities},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc == 3 && std::strcmp(argv[1], "--criterion") == 0) {
    only = std::atoi(argv[2]);
    if (only < 1 || only > 10) {
      std::fprintf(stderr, "usage: %s [--criterion 1..10]\n", argv[0]);
      return 64;
    }
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion 1..10]\n", argv[0]);
    return 64;
  }

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s: %s\n", ok ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
