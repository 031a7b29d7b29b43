#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kmace/error.hpp"
#include "kmace/kmeans.hpp"
#include "kmace/metrics.hpp"
#include "support/fixtures.hpp"

using namespace kmace;
using kmace::testing::random_dataset;

namespace {

// Pair-counting definition of the adjusted Rand index, O(N^2).
double ari_pair_oracle(const std::vector<int>& t, const std::vector<int>& p) {
  const std::size_t n = t.size();
  double n11 = 0.0, n10 = 0.0, n01 = 0.0, n00 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same_t = t[i] == t[j];
      const bool same_p = p[i] == p[j];
      if (same_t && same_p) ++n11;
      else if (same_t) ++n10;
      else if (same_p) ++n01;
      else ++n00;
    }
  const double total = n11 + n10 + n01 + n00;
  const double expected = (n11 + n10) * (n11 + n01) / total;
  const double max_index = 0.5 * ((n11 + n10) + (n11 + n01));
  if (max_index == expected) return 1.0;
  return (n11 - expected) / (max_index - expected);
}

std::vector<int> permuted_labels(const std::vector<int>& labels, Rng& rng) {
  const int m = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<int> perm(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = m - 1; i > 0; --i)
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[rng.uniform_index(static_cast<std::size_t>(i) + 1)]);
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[i] = perm[static_cast<std::size_t>(labels[i])];
  return out;
}

std::vector<int> random_labels(std::size_t n, int m, Rng& rng) {
  std::vector<int> out(n);
  for (auto& v : out) v = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(m)));
  // Guarantee every label id appears so ids stay dense.
  for (int j = 0; j < m && static_cast<std::size_t>(j) < n; ++j)
    out[static_cast<std::size_t>(j)] = j;
  return out;
}

}  // namespace

TEST_CASE("ari is 1 on identical partitions and 0 on the degenerate pair") {
  std::vector<int> p{0, 1, 2, 0, 1, 2};
  CHECK(adjusted_rand_index(p, p) == doctest::Approx(1.0));

  std::vector<int> singletons{0, 1, 2, 3};
  std::vector<int> one_cluster{0, 0, 0, 0};
  CHECK(adjusted_rand_index(singletons, one_cluster) == doctest::Approx(0.0));
}

TEST_CASE("ari matches the pair-counting oracle on random partitions") {
  Rng rng(RngSpec{91, "ari"});
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_labels(50, 4, rng);
    const auto p = random_labels(50, 3, rng);
    CHECK(adjusted_rand_index(t, p) ==
          doctest::Approx(ari_pair_oracle(t, p)).epsilon(1e-12));
  }
}

TEST_CASE("ari and nvi are invariant under label permutations") {
  Rng rng(RngSpec{92, "perm"});
  const auto t = random_labels(80, 5, rng);
  const auto p = random_labels(80, 4, rng);
  const double ari0 = adjusted_rand_index(t, p);
  const double nvi0 = normalized_variation_information(t, p);
  for (int trial = 0; trial < 5; ++trial) {
    const auto tp = permuted_labels(t, rng);
    const auto pp = permuted_labels(p, rng);
    CHECK(adjusted_rand_index(tp, pp) == doctest::Approx(ari0).epsilon(1e-12));
    CHECK(normalized_variation_information(tp, pp) ==
          doctest::Approx(nvi0).epsilon(1e-12));
  }
}

TEST_CASE("nvi is 0 on identical partitions and 1 on independent ones") {
  std::vector<int> p{0, 0, 1, 1, 2, 2};
  CHECK(normalized_variation_information(p, p) == 0.0);

  // Balanced independent pair: every contingency cell equals N/4, which
  // makes VI equal the joint entropy exactly.
  const std::size_t n = 400;
  std::vector<int> t(n), q(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = i < n / 2 ? 0 : 1;
    q[i] = static_cast<int>(i % 2);
  }
  CHECK(normalized_variation_information(t, q) == doctest::Approx(1.0));
}

TEST_CASE("metrics validate their inputs") {
  std::vector<int> a{0, 1};
  std::vector<int> b{0, 1, 2};
  CHECK_THROWS_WITH_AS(adjusted_rand_index(a, b), doctest::Contains("LengthMismatch"),
                       Error);
  CHECK_THROWS_AS(normalized_variation_information(a, b), Error);
}

TEST_CASE("cnc accuracy summary") {
  std::vector<int> all_right{9, 9, 9, 9};
  const CncAccuracy exact = cnc_accuracy(all_right, 9);
  CHECK(exact.mean == doctest::Approx(9.0));
  CHECK(exact.stddev == doctest::Approx(0.0));
  CHECK(exact.accuracy_pct == doctest::Approx(100.0));

  std::vector<int> mixed{8, 9, 9, 10};
  const CncAccuracy half = cnc_accuracy(mixed, 9);
  CHECK(half.mean == doctest::Approx(9.0));
  CHECK(half.stddev == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(half.accuracy_pct == doctest::Approx(50.0));

  CHECK_THROWS_WITH_AS(cnc_accuracy(std::vector<int>{}, 3),
                       doctest::Contains("EmptyRuns"), Error);
}

TEST_CASE("baseline indices on well-separated equal clusters") {
  // Three tight blobs far apart: silhouette near 1 at the true m.
  Rng rng(RngSpec{93, "sep"});
  Matrix pts(60, 2);
  std::vector<int> init(60);
  for (std::size_t i = 0; i < 60; ++i) {
    const int j = static_cast<int>(i / 20);
    pts(i, 0) = 40.0 * j + 0.1 * rng.normal();
    pts(i, 1) = 0.1 * rng.normal();
    init[i] = j;
  }
  const Dataset data = validate_dataset(std::move(pts));
  std::vector<Partition> partitions;
  for (int m = 2; m <= 4; ++m)
    partitions.push_back(kmeans(data, m, RngSpec{94, "m" + std::to_string(m)}));
  const auto indices = baseline_indices(data, partitions);
  REQUIRE(indices.size() == 3);
  CHECK(indices[1].silhouette > 0.95);           // m = 3 (the truth)
  CHECK(indices[1].silhouette > indices[0].silhouette);
  CHECK(indices[1].silhouette > indices[2].silhouette);
  CHECK(indices[1].davies_bouldin < indices[2].davies_bouldin);
}

TEST_CASE("davies-bouldin penalizes splitting a coherent cluster") {
  // Hand-checked fixture: two groups of four collinear points far apart.
  Matrix pts{{0.0, 0.0},   {0.5, 0.0},   {1.0, 0.0},   {1.5, 0.0},
             {100.0, 0.0}, {100.5, 0.0}, {101.0, 0.0}, {101.5, 0.0}};
  const Dataset data = validate_dataset(std::move(pts));
  const Partition two = lloyd_from_assignment(data, 2, {0, 0, 0, 0, 1, 1, 1, 1}, 0);
  const Partition three =
      lloyd_from_assignment(data, 3, {0, 0, 0, 0, 1, 1, 2, 2}, 0);
  std::vector<Partition> parts{two, three};
  const auto idx = baseline_indices(data, parts);
  // m=2: mean scatter 0.5 per group, center gap 100 => DB = 1/100.
  CHECK(idx[0].davies_bouldin == doctest::Approx(0.01));
  // Splitting the right group leaves two scattered halves one unit apart:
  // their mutual term (0.25 + 0.25) / 1 dominates and DB jumps to
  // (0.75/99.5 + 0.5 + 0.5) / 3.
  CHECK(idx[1].davies_bouldin ==
        doctest::Approx((0.75 / 99.5 + 0.5 + 0.5) / 3.0));
  CHECK(idx[1].davies_bouldin > idx[0].davies_bouldin);
}

TEST_CASE("baseline indices reject m < 2 and are translation invariant") {
  const Dataset data = random_dataset(30, 2, RngSpec{95, "ti"});
  const Partition one = lloyd_from_assignment(data, 1, std::vector<int>(30, 0));
  std::vector<Partition> bad{one};
  CHECK_THROWS_WITH_AS(baseline_indices(data, bad),
                       doctest::Contains("DegenerateClusterNumber"), Error);

  const Partition p = kmeans(data, 3, RngSpec{96, "p"});
  Matrix shifted = data.samples;
  for (std::size_t i = 0; i < shifted.rows(); ++i) {
    shifted(i, 0) += 500.0;
    shifted(i, 1) -= 250.0;
  }
  const Dataset moved = validate_dataset(std::move(shifted));
  const Partition q = lloyd_from_assignment(moved, 3, p.assign, 0);
  REQUIRE(q.assign == p.assign);
  std::vector<Partition> pa{p};
  std::vector<Partition> qa{q};
  const auto ia = baseline_indices(data, pa);
  const auto ib = baseline_indices(moved, qa);
  CHECK(ia[0].calinski_harabasz == doctest::Approx(ib[0].calinski_harabasz).epsilon(1e-9));
  CHECK(ia[0].davies_bouldin == doctest::Approx(ib[0].davies_bouldin).epsilon(1e-9));
  CHECK(ia[0].silhouette == doctest::Approx(ib[0].silhouette).epsilon(1e-9));
}
