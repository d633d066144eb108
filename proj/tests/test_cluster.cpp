#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mlsbm/cluster.hpp"
#include "mlsbm/rng.hpp"
#include "mlsbm/sbm.hpp"

using namespace mlsbm;

namespace {

Membership make_membership(std::vector<int> labels, int k) {
  Membership m;
  m.labels = std::move(labels);
  m.K = k;
  return m;
}

double normal_draw(Rng& rng) {
  // Box-Muller; one draw per call keeps the stream layout simple.
  const double u1 = std::max(rng.next_unit(), 1e-300);
  const double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int permutation_oracle(const Membership& estimate, const Membership& reference) {
  // Direct minimum over all K! relabelings of the estimate.
  std::vector<int> perm(static_cast<std::size_t>(estimate.K));
  for (int k = 0; k < estimate.K; ++k) perm[static_cast<std::size_t>(k)] = k + 1;
  int best = static_cast<int>(estimate.labels.size()) + 1;
  do {
    int mismatches = 0;
    for (std::size_t i = 0; i < estimate.labels.size(); ++i) {
      if (perm[static_cast<std::size_t>(estimate.labels[i] - 1)] != reference.labels[i]) {
        ++mismatches;
      }
    }
    best = std::min(best, mismatches);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("method names round trip") {
  using cluster::AggregationMethod;
  for (auto m : {AggregationMethod::Sum, AggregationMethod::Sos, AggregationMethod::SosDebias,
                 AggregationMethod::Matricize}) {
    CHECK(cluster::method_from_name(cluster::method_name(m)) == m);
  }
  CHECK_THROWS_AS(cluster::method_from_name("median"), std::invalid_argument);
}

TEST_CASE("spectral embedding of a diagonal matrix") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 9.0;
  m(1, 1) = 4.0;
  m(2, 2) = 1.0;

  const cluster::EmbeddingResult plain = cluster::spectral_embed(SymMatrix(m), 2, false);
  Matrix expected(3, 2);
  expected << 1, 0, 0, 1, 0, 0;
  CHECK((plain.coords - expected).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(plain.weights(0) == doctest::Approx(9.0));
  CHECK(plain.weights(1) == doctest::Approx(4.0));
  CHECK_FALSE(plain.weighted);

  const cluster::EmbeddingResult weighted = cluster::spectral_embed(SymMatrix(m), 2, true);
  Matrix scaled(3, 2);
  scaled << 9, 0, 0, 4, 0, 0;
  CHECK((weighted.coords - scaled).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(weighted.weighted);
}

TEST_CASE("embedding skips a dominant negative eigenvalue") {
  // Indefinite input: the largest-magnitude eigenvalue is negative and must
  // not be selected; the leading directions are the algebraically largest.
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = -9.0;
  m(1, 1) = 4.0;
  m(2, 2) = 1.0;

  const cluster::EmbeddingResult e = cluster::spectral_embed(SymMatrix(m), 2, false);
  Matrix expected(3, 2);
  expected << 0, 0, 1, 0, 0, 1;
  CHECK((e.coords - expected).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(e.weights(0) == doctest::Approx(4.0));
  CHECK(e.weights(1) == doctest::Approx(1.0));
}

TEST_CASE("embedding invariants on a random symmetric matrix") {
  Rng rng(40);
  Matrix m(8, 8);
  for (Index i = 0; i < 8; ++i) {
    for (Index j = i; j < 8; ++j) {
      m(i, j) = 2.0 * rng.next_unit() - 1.0;
      m(j, i) = m(i, j);
    }
  }
  const cluster::EmbeddingResult plain = cluster::spectral_embed(SymMatrix(m), 3, false);
  const Matrix gram = plain.coords.transpose() * plain.coords;
  CHECK((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-9);

  const cluster::EmbeddingResult weighted = cluster::spectral_embed(SymMatrix(m), 3, true);
  for (int j = 0; j < 3; ++j) {
    const Vector rescaled = plain.coords.col(j) * std::abs(plain.weights(j));
    CHECK((weighted.coords.col(j) - rescaled).cwiseAbs().maxCoeff() <= 1e-12);
  }

  CHECK_THROWS_AS(cluster::spectral_embed(SymMatrix(m), 9, false), std::invalid_argument);
}

TEST_CASE("two-block population embedding has exactly two distinct rows") {
  sbm::ModelSpec spec;
  spec.n = 6;
  spec.K = 2;
  spec.theta = make_membership({1, 1, 1, 2, 2, 2}, 2);
  spec.rho = 0.9;
  Matrix b(2, 2);
  b << 0.9, 0.2, 0.2, 0.8;
  spec.B = {b, b};

  // Mean of the bias-adjusted aggregate: the squared population matrices.
  const std::vector<SymMatrix> pops = sbm::population_matrices(spec);
  Matrix mean = Matrix::Zero(6, 6);
  for (const auto& p : pops) mean += p.matrix() * p.matrix();

  const cluster::EmbeddingResult e = cluster::spectral_embed(SymMatrix(mean), 2, false);
  for (int i : {1, 2}) {
    CHECK((e.coords.row(i) - e.coords.row(0)).cwiseAbs().maxCoeff() <= 1e-9);
  }
  for (int i : {4, 5}) {
    CHECK((e.coords.row(i) - e.coords.row(3)).cwiseAbs().maxCoeff() <= 1e-9);
  }
  CHECK((e.coords.row(3) - e.coords.row(0)).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("kmeans on two obvious clusters") {
  Matrix points(4, 2);
  points << 0, 0, 0, 1, 10, 0, 10, 1;
  const cluster::KMeansResult r = cluster::kmeans(points, 2, 4, 17);
  CHECK(r.labels.labels[0] == r.labels.labels[1]);
  CHECK(r.labels.labels[2] == r.labels.labels[3]);
  CHECK(r.labels.labels[0] != r.labels.labels[2]);
  CHECK(r.sse == doctest::Approx(1.0));  // 4 points each 0.5 from its center

  const cluster::KMeansResult again = cluster::kmeans(points, 2, 4, 17);
  CHECK(again.labels.labels == r.labels.labels);
  CHECK(again.sse == r.sse);
}

TEST_CASE("kmeans degenerate and invalid inputs") {
  SUBCASE("identical points trigger empty-cluster repair") {
    const Matrix points = Matrix::Ones(5, 2);
    const cluster::KMeansResult r = cluster::kmeans(points, 2, 1, 3);
    CHECK(r.sse == 0.0);
    CHECK(r.repair_events >= 1);
  }

  SUBCASE("more clusters than points is infeasible") {
    const Matrix points = Matrix::Zero(3, 2);
    CHECK_THROWS_AS(cluster::kmeans(points, 5, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("kmeans recovers well-separated gaussians across seeds") {
  Rng rng(71);
  Matrix points(40, 2);
  std::vector<int> truth;
  for (int i = 0; i < 40; ++i) {
    const double cx = i < 20 ? 0.0 : 10.0;
    points(i, 0) = cx + normal_draw(rng);
    points(i, 1) = cx + normal_draw(rng);
    truth.push_back(i < 20 ? 1 : 2);
  }
  const Membership reference = make_membership(truth, 2);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const cluster::KMeansResult r = cluster::kmeans(points, 2, 10, seed);
    CHECK(cluster::misclustering(r.labels, reference).count == 0);
  }
}

TEST_CASE("kmeans sse trace is non-increasing") {
  Rng rng(90);
  Matrix points(30, 3);
  for (Index i = 0; i < 30; ++i) {
    for (Index j = 0; j < 3; ++j) points(i, j) = rng.next_unit();
  }
  const cluster::KMeansResult r = cluster::kmeans(points, 4, 6, 8);
  REQUIRE(r.sse_trace.size() >= 1);
  for (std::size_t t = 1; t < r.sse_trace.size(); ++t) {
    CHECK(r.sse_trace[t] <= r.sse_trace[t - 1] + 1e-12);
  }
}

TEST_CASE("misclustering basics") {
  const Membership theta = make_membership({1, 1, 2, 2}, 2);
  CHECK(cluster::misclustering(theta, theta).count == 0);
  CHECK(cluster::misclustering(make_membership({2, 2, 1, 1}, 2), theta).count == 0);
  const cluster::MisclusterResult one =
      cluster::misclustering(make_membership({1, 2, 2, 2}, 2), theta);
  CHECK(one.count == 1);
  CHECK(one.rate == doctest::Approx(0.25));

  CHECK_THROWS_AS(cluster::misclustering(make_membership({1, 1, 2}, 2), theta),
                  std::invalid_argument);
  CHECK_THROWS_AS(cluster::misclustering(make_membership({1, 1, 2, 3}, 3), theta),
                  std::invalid_argument);
}

TEST_CASE("misclustering is symmetric and matches the permutation oracle") {
  Rng rng(66);
  for (int rep = 0; rep < 1000; ++rep) {
    const int k = 2 + static_cast<int>(rng.next_below(3));  // 2..4
    const int n = k + static_cast<int>(rng.next_below(10));
    std::vector<int> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k))));
      b.push_back(1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k))));
    }
    const Membership ma = make_membership(a, k), mb = make_membership(b, k);
    const int d = cluster::misclustering(ma, mb).count;
    CHECK(d == permutation_oracle(ma, mb));
    CHECK(d == cluster::misclustering(mb, ma).count);
  }
}

TEST_CASE("matching path agrees with enumeration above the exhaustive cutoff") {
  // K = 9 exercises the assignment-solver branch; the oracle enumerates 9!.
  Rng rng(5150);
  for (int rep = 0; rep < 25; ++rep) {
    const int k = 9;
    const int n = 40;
    std::vector<int> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k))));
      b.push_back(1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k))));
    }
    // Force every label to appear so the confusion matrix is well exercised.
    for (int i = 0; i < k; ++i) {
      a[static_cast<std::size_t>(i)] = i + 1;
      b[static_cast<std::size_t>(n - 1 - i)] = i + 1;
    }
    const Membership ma = make_membership(a, k), mb = make_membership(b, k);
    CHECK(cluster::misclustering(ma, mb).count == permutation_oracle(ma, mb));
  }
}

TEST_CASE("estimate_communities recovers an exact two-block graph") {
  // rho = 1 with a binary connectivity matrix makes sampling deterministic.
  sbm::ModelSpec spec;
  spec.n = 10;
  spec.K = 2;
  spec.theta = make_membership({1, 1, 1, 1, 1, 2, 2, 2, 2, 2}, 2);
  spec.rho = 1.0;
  Matrix b(2, 2);
  b << 1.0, 0.0, 0.0, 1.0;
  spec.B = {b, b};
  const MultiLayerGraph g = sbm::sample(spec, 1);

  const Membership est =
      cluster::estimate_communities(g, 2, cluster::AggregationMethod::SosDebias, false, 11);
  CHECK(cluster::misclustering(est, spec.theta).count == 0);
}

TEST_CASE("estimate_communities is equivariant under node permutation") {
  sbm::ModelSpec spec;
  spec.n = 60;
  spec.K = 3;
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) labels.push_back(i / 20 + 1);
  spec.theta = make_membership(labels, 3);
  spec.rho = 0.9;
  Matrix b(3, 3);
  b << 0.9, 0.1, 0.1, 0.1, 0.9, 0.1, 0.1, 0.1, 0.9;
  spec.B = {b, b, b};
  const MultiLayerGraph g = sbm::sample(spec, 77);

  Rng rng(13);
  std::vector<int> perm(60);
  for (int i = 0; i < 60; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = 59; i > 0; --i) {
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i + 1)))]);
  }
  Matrix sigma = Matrix::Zero(60, 60);
  std::vector<int> permuted_labels(60);
  for (int i = 0; i < 60; ++i) {
    sigma(perm[static_cast<std::size_t>(i)], i) = 1.0;
    permuted_labels[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
        labels[static_cast<std::size_t>(i)];
  }
  std::vector<AdjacencyMatrix> permuted;
  for (const auto& layer : g.layers()) {
    permuted.push_back(AdjacencyMatrix((sigma * layer.matrix() * sigma.transpose()).eval()));
  }
  const MultiLayerGraph pg(permuted);
  const Membership reference = make_membership(permuted_labels, 3);

  for (auto method : {cluster::AggregationMethod::Sum, cluster::AggregationMethod::Sos,
                      cluster::AggregationMethod::SosDebias, cluster::AggregationMethod::Matricize}) {
    const Membership direct = cluster::estimate_communities(g, 3, method, false, 5);
    const Membership via_perm = cluster::estimate_communities(pg, 3, method, false, 5);
    CHECK(cluster::misclustering(direct, spec.theta).count == 0);
    CHECK(cluster::misclustering(via_perm, reference).count == 0);
  }
}
