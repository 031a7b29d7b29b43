#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kmace/error.hpp"
#include "kmace/kernel.hpp"
#include "kmace/kmeans.hpp"
#include "kmace/linalg.hpp"
#include "kmace/metrics.hpp"
#include "support/fixtures.hpp"

using namespace kmace;
using kmace::testing::concentric_rings;
using kmace::testing::random_dataset;
using kmace::testing::two_blobs;

TEST_CASE("gram of identical points is all ones") {
  Matrix same(5, 2, 3.0);
  const Dataset data = validate_dataset(std::move(same));
  const GramMatrix g = gram(data, 1.0);
  for (double v : g.values.storage()) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("gram tends to all ones as sigma grows") {
  const Dataset data = random_dataset(8, 2, RngSpec{71, "bigsigma"});
  const GramMatrix g = gram(data, 1e8);
  for (double v : g.values.storage()) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gram matches the per-pair exponential") {
  const Dataset data = random_dataset(10, 2, RngSpec{72, "gram"});
  const double sigma = 0.8;
  const GramMatrix g = gram(data, sigma);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      const double d2 =
          squared_distance(data.samples.row(i), data.samples.row(j));
      CHECK(std::abs(g.values(i, j) - std::exp(-d2 / (2.0 * sigma * sigma))) <
            1e-12);
    }
}

TEST_CASE("gram rejects non-positive sigma") {
  const Dataset data = random_dataset(4, 2, RngSpec{73, "sig"});
  CHECK_THROWS_WITH_AS(gram(data, 0.0), doctest::Contains("NonPositiveSigma"), Error);
}

TEST_CASE("gram matrices are positive semidefinite on test sizes") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Dataset data = random_dataset(24, 3, RngSpec{seed, "psd"}, 2.0);
    for (double sigma : {0.3, 1.0, 5.0}) {
      const GramMatrix g = gram(data, sigma);
      auto ev = symmetric_eigenvalues_ql(g.values);
      const double min_ev = *std::min_element(ev.begin(), ev.end());
      CHECK(min_ev >= -1e-8);
    }
  }
}

TEST_CASE("initial assignment: one cluster and all singletons") {
  const Dataset data = random_dataset(6, 2, RngSpec{74, "init"});
  const GramMatrix g = gram(data, 1.0);
  const auto one = initial_assignment(g, 1);
  for (int a : one) CHECK(a == 0);

  const auto singletons = initial_assignment(g, 6);
  std::vector<int> seen(6, 0);
  for (int a : singletons) ++seen[static_cast<std::size_t>(a)];
  for (int c : seen) CHECK(c == 1);
}

TEST_CASE("initial assignment seeds the square diagonal for m = 2") {
  Matrix corners{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  const Dataset data = validate_dataset(std::move(corners));
  const GramMatrix g = gram(data, 0.8);
  const auto assign = initial_assignment(g, 2);
  // Exhaustive check of the max-min rule: the mutually farthest pair is a
  // diagonal, so diagonal corners must land in opposite clusters.
  double far = -1.0;
  std::size_t far_i = 0, far_j = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      const double d2 = g.values(i, i) + g.values(j, j) - 2.0 * g.values(i, j);
      if (d2 > far) {
        far = d2;
        far_i = i;
        far_j = j;
      }
    }
  CHECK(far_i + far_j == 3);  // (0,3) or (1,2): a diagonal
  CHECK(assign[far_i] != assign[far_j]);
}

TEST_CASE("kernel k-means with the linear kernel reproduces plain k-means") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset data = random_dataset(40, 2, RngSpec{seed, "lin-eq"}, 2.0);
    const GramMatrix lin = linear_gram(data);
    const int m = 3;
    const auto init = initial_assignment(lin, m);
    const Partition kernel_p = kernel_kmeans_from_assignment(data, lin, m, init);
    const Partition plain_p = lloyd_from_assignment(data, m, init);
    // Feature space is input space: identical objectives on the shared init.
    auto [per_cluster, total] = compactness(data, plain_p);
    CHECK(std::abs(kernel_p.compactness_total - total) < 1e-9);
  }
}

TEST_CASE("kernel k-means m=N yields zero feature compactness") {
  const Dataset data = random_dataset(10, 2, RngSpec{75, "mn"});
  const GramMatrix g = gram(data, 1.0);
  const Partition p = kernel_kmeans(data, g, 10, RngSpec{});
  CHECK(p.compactness_total == doctest::Approx(0.0));
  for (int s : p.sizes) CHECK(s == 1);
}

TEST_CASE("kernel k-means separates concentric rings at a suitable sigma") {
  const Dataset data = concentric_rings(60, 1.0, 5.0, 0.08, RngSpec{76, "rings"});
  // Plain k-means cannot split the rings.
  const Partition plain = kmeans(data, 2, RngSpec{77, "plain"});
  const double plain_ari =
      adjusted_rand_index(*data.labels, plain.assign);
  CHECK(plain_ari < 0.2);

  const GramMatrix g = gram(data, 1.0);
  const Partition p = kernel_kmeans(data, g, 2, RngSpec{});
  CHECK(adjusted_rand_index(*data.labels, p.assign) == doctest::Approx(1.0));
}

TEST_CASE("kernel objective never increases across iterations") {
  const Dataset data = random_dataset(50, 2, RngSpec{78, "kmono"}, 2.0);
  const GramMatrix g = gram(data, 1.5);
  std::vector<int> assign(data.size());
  Rng rng(RngSpec{79, "kmono-init"});
  for (auto& a : assign) a = static_cast<int>(rng.uniform_index(4));
  double prev = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 30; ++step) {
    const Partition p = kernel_kmeans_from_assignment(data, g, 4, assign, 1);
    CHECK(p.compactness_total <= prev + 1e-12);
    prev = p.compactness_total;
    assign = p.assign;
  }
}

TEST_CASE("feature-space moments reduce to input-space spectra under the linear kernel") {
  const Dataset data = random_dataset(30, 2, RngSpec{80, "fsm"}, 1.5);
  const GramMatrix lin = linear_gram(data);
  const Partition p = lloyd_from_assignment(data, 2, initial_assignment(lin, 2));
  const auto fm = feature_space_moments(lin, p);
  REQUIRE(fm.size() == 2);
  for (int j = 0; j < 2; ++j) {
    const auto& cluster = fm[static_cast<std::size_t>(j)];
    CHECK(cluster.d_eff == 2);  // intrinsic dimension of the data
    const SymSpectrum direct =
        sym_eigenvalues(covariance(data.samples.take_rows(p.members_of(j))));
    for (std::size_t r = 0; r < direct.eigenvalues.size(); ++r) {
      const double expect = direct.eigenvalues[r];
      const double got =
          r < cluster.spectrum.eigenvalues.size() ? cluster.spectrum.eigenvalues[r] : 0.0;
      CHECK(std::abs(got - expect) < 1e-8 * std::max(1.0, expect));
    }
    // Eigenvalues past the intrinsic dimension vanish.
    for (std::size_t r = 2; r < cluster.spectrum.eigenvalues.size(); ++r)
      CHECK(cluster.spectrum.eigenvalues[r] < 1e-8);
  }
}

TEST_CASE("feature-space moments of identical points vanish") {
  Matrix same(12, 2, 2.0);
  const Dataset data = validate_dataset(std::move(same));
  const GramMatrix g = gram(data, 1.0);
  const Partition p = kernel_kmeans(data, g, 1, RngSpec{});
  const auto fm = feature_space_moments(g, p);
  CHECK(fm[0].moments.trace_sum() == doctest::Approx(0.0));
}

TEST_CASE("feature-space trace identity against direct centering") {
  const Dataset data = random_dataset(20, 2, RngSpec{81, "trace"}, 1.0);
  const GramMatrix g = gram(data, 1.2);
  const Partition p = kernel_kmeans(data, g, 1, RngSpec{});
  const auto fm = feature_space_moments(g, p);
  // Sum of eigenvalues equals tr(H K H) / (n - 1) computed directly.
  const std::size_t n = data.size();
  double total = 0.0;
  double diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diag += g.values(i, i);
    for (std::size_t j = 0; j < n; ++j) total += g.values(i, j);
  }
  const double expected = (diag - total / static_cast<double>(n)) /
                          (static_cast<double>(n) - 1.0);
  CHECK(fm[0].spectrum.trace() == doctest::Approx(expected).epsilon(1e-8));
  CHECK(feature_space_total_scatter(g) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("kernel selection with a single-width grid returns that width") {
  const Dataset data = two_blobs(30, 10.0, 1.0, RngSpec{82, "single"});
  const KernelSelection sel =
      kernel_select_cnc(data, 1, 4, {1.5}, 5.0, 5.0, RngSpec{83, "run"});
  CHECK(sel.sweep.sigma_hat == doctest::Approx(1.5));
  CHECK(sel.sweep.grid.size() == 1);
  CHECK(sel.report.sigma == doctest::Approx(1.5));
  for (double s : sel.sweep.score) CHECK(s == 0.0);
}

TEST_CASE("kernel selection validates its grid") {
  const Dataset data = two_blobs(10, 8.0, 1.0, RngSpec{84, "grid"});
  CHECK_THROWS_WITH_AS(
      kernel_select_cnc(data, 1, 3, {}, 5.0, 5.0, RngSpec{}),
      doctest::Contains("GridTooSmall"), Error);
  CHECK_THROWS_AS(kernel_select_cnc(data, 1, 3, {1.0, 0.5}, 5.0, 5.0, RngSpec{}),
                  Error);
  CHECK_THROWS_AS(kernel_select_cnc(data, 1, 3, {-1.0, 0.5}, 5.0, 5.0, RngSpec{}),
                  Error);
}

TEST_CASE("default sigma grid brackets the pairwise distance scale") {
  const Dataset data = two_blobs(30, 10.0, 1.0, RngSpec{85, "defgrid"});
  const auto grid = default_sigma_grid(data);
  REQUIRE(grid.size() == 20);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(grid.front() > 0.0);
  double max_dist = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t j = i + 1; j < data.size(); ++j)
      max_dist = std::max(max_dist, std::sqrt(squared_distance(
                                        data.samples.row(i), data.samples.row(j))));
  CHECK(grid.back() == doctest::Approx(2.0 * max_dist));
}

TEST_CASE("kernel selection finds two blobs and reports a sane sweep") {
  const Dataset data = two_blobs(40, 14.0, 1.0, RngSpec{86, "ksel"});
  const auto grid = default_sigma_grid(data, 8);
  const KernelSelection sel =
      kernel_select_cnc(data, 1, 5, grid, 5.0, 5.0, RngSpec{87, "run"});
  CHECK(sel.report.m_hat == 2);
  CHECK(sel.sweep.min_upper_z.size() == grid.size());
  CHECK(sel.sweep.sigma_hat_index >= 0);
  CHECK(sel.sweep.sigma_hat ==
        grid[static_cast<std::size_t>(sel.sweep.sigma_hat_index)]);
}
