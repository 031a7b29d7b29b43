#include <doctest.h>

#include <cmath>
#include <limits>

#include "kmace/error.hpp"
#include "kmace/kmeans.hpp"
#include "kmace/linalg.hpp"
#include "support/fixtures.hpp"

using namespace kmace;
using kmace::testing::random_dataset;
using kmace::testing::two_blobs;

TEST_CASE("kmeans m=1 on the unit square corners") {
  Matrix corners{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  const Dataset data = validate_dataset(corners);
  const Partition p = kmeans(data, 1, RngSpec{1, "corners"});
  CHECK(p.centers(0, 0) == doctest::Approx(0.5));
  CHECK(p.centers(0, 1) == doctest::Approx(0.5));
  CHECK(p.compactness_per_cluster[0] == doctest::Approx(2.0));
  CHECK(p.compactness_total == doctest::Approx(0.5));
  check_partition(data, p);
}

TEST_CASE("kmeans m=2 separates two far pairs") {
  Matrix pts{{0.0, 0.0}, {0.0, 1.0}, {100.0, 0.0}, {100.0, 1.0}};
  const Dataset data = validate_dataset(pts);
  const Partition p = kmeans(data, 2, RngSpec{2, "pairs"});
  CHECK(p.assign[0] == p.assign[1]);
  CHECK(p.assign[2] == p.assign[3]);
  CHECK(p.assign[0] != p.assign[2]);
  // Within-pair variance: each pair contributes 2 * (0.5)^2 = 0.5.
  CHECK(p.compactness_total == doctest::Approx(1.0 / 4.0));
  check_partition(data, p);
}

TEST_CASE("kmeans objective is near the best of many restarts") {
  const Dataset data = random_dataset(30, 2, RngSpec{3, "restart-oracle"}, 2.0);
  const Partition p = kmeans(data, 3, RngSpec{4, "default"});
  const Partition exhaustive =
      kmeans(data, 3, RngSpec{5, "exhaustive"}, KMeansOptions{200, 300});
  CHECK(p.compactness_total <=
        doctest::Approx(exhaustive.compactness_total * 1.01));
}

TEST_CASE("kmeans rejects m > N and m < 1") {
  const Dataset data = random_dataset(5, 2, RngSpec{6, "small"});
  CHECK_THROWS_WITH_AS(kmeans(data, 6, RngSpec{}), doctest::Contains("TooManyClusters"),
                       Error);
  CHECK_THROWS_AS(kmeans(data, 0, RngSpec{}), Error);
}

TEST_CASE("kmeans is deterministic for a fixed RngSpec") {
  const Dataset data = random_dataset(60, 3, RngSpec{7, "det"});
  const Partition a = kmeans(data, 4, RngSpec{8, "run"});
  const Partition b = kmeans(data, 4, RngSpec{8, "run"});
  CHECK(a.assign == b.assign);
  CHECK(a.centers == b.centers);
  CHECK(a.compactness_total == b.compactness_total);
}

TEST_CASE("lloyd objective never increases across iterations") {
  const Dataset data = random_dataset(80, 2, RngSpec{9, "mono"}, 3.0);
  // Drive Lloyd one iteration at a time and watch the objective.
  std::vector<int> assign(data.size());
  Rng rng(RngSpec{10, "mono-init"});
  for (auto& a : assign) a = static_cast<int>(rng.uniform_index(5));
  double prev = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 40; ++step) {
    const Partition p = lloyd_from_assignment(data, 5, assign, 1);
    CHECK(p.compactness_total <= prev + 1e-12);
    prev = p.compactness_total;
    assign = p.assign;
  }
}

TEST_CASE("empty clusters are repaired so every cluster is populated") {
  Matrix pts{{0.0}, {0.1}, {10.0}, {10.1}, {20.0}};
  const Dataset data = validate_dataset(pts);
  // Initial assignment leaves clusters 2..4 empty.
  const Partition p = lloyd_from_assignment(data, 5, {0, 0, 1, 1, 1});
  for (int size : p.sizes) CHECK(size > 0);
  check_partition(data, p);
}

TEST_CASE("compactness on hand-checked inputs") {
  Matrix pts{{0.0}, {2.0}};
  const Dataset data = validate_dataset(pts);
  const Partition p = lloyd_from_assignment(data, 1, {0, 0});
  auto [per_cluster, total] = compactness(data, p);
  CHECK(per_cluster[0] == doctest::Approx(2.0));
  CHECK(total == doctest::Approx(1.0));

  Matrix same{{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}};
  const Dataset identical = validate_dataset(same);
  const Partition q = lloyd_from_assignment(identical, 1, {0, 0, 0});
  auto [per_q, total_q] = compactness(identical, q);
  CHECK(per_q[0] == 0.0);
  CHECK(total_q == 0.0);
}

TEST_CASE("compactness equals the Frobenius centering form") {
  // y_mj must match ||X_j - X_j B||_F^2 cluster by cluster.
  const Dataset data = random_dataset(40, 3, RngSpec{11, "frob"}, 2.0);
  const Partition p = kmeans(data, 4, RngSpec{12, "frob-run"});
  auto [per_cluster, total] = compactness(data, p);
  for (int j = 0; j < p.m; ++j) {
    const auto members = p.members_of(j);
    const Matrix block = data.samples.take_rows(members);
    auto [a, b] = centering_matrices(static_cast<int>(members.size()));
    // Rows are samples, so the averaging acts on the left: X - B X.
    const Matrix averaged = matmul(b, block);
    double frob = 0.0;
    for (std::size_t r = 0; r < block.rows(); ++r)
      for (std::size_t c = 0; c < block.cols(); ++c) {
        const double diff = block(r, c) - averaged(r, c);
        frob += diff * diff;
      }
    CHECK(per_cluster[static_cast<std::size_t>(j)] ==
          doctest::Approx(frob).epsilon(1e-8));
  }
  CHECK(total * static_cast<double>(data.size()) ==
        doctest::Approx(per_cluster[0] + per_cluster[1] + per_cluster[2] +
                        per_cluster[3]));
}

TEST_CASE("two blobs with ground truth recover the labels") {
  const Dataset data = two_blobs(50, 20.0, 1.0, RngSpec{13, "blobs"});
  const Partition p = kmeans(data, 2, RngSpec{14, "blobs-run"});
  int flips = 0;
  for (std::size_t i = 1; i < data.size(); ++i)
    if ((p.assign[i] == p.assign[0]) != ((*data.labels)[i] == (*data.labels)[0]))
      ++flips;
  CHECK(flips == 0);
}
