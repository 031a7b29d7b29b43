#include "kmace/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kmace/error.hpp"

namespace kmace {

namespace {

void recompute_centers(const Dataset& data, const std::vector<int>& assign,
                       int m, Matrix& centers, std::vector<int>& sizes) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  centers = Matrix(static_cast<std::size_t>(m), d, 0.0);
  sizes.assign(static_cast<std::size_t>(m), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int j = assign[i];
    ++sizes[static_cast<std::size_t>(j)];
    const auto x = data.samples.row(i);
    auto c = centers.row(static_cast<std::size_t>(j));
    for (std::size_t f = 0; f < d; ++f) c[f] += x[f];
  }
  for (int j = 0; j < m; ++j) {
    const int nj = sizes[static_cast<std::size_t>(j)];
    if (nj == 0) continue;
    auto c = centers.row(static_cast<std::size_t>(j));
    for (std::size_t f = 0; f < d; ++f) c[f] /= nj;
  }
}

// k-means++ seeding: first center uniform, then squared-distance
// proportional sampling.
std::vector<std::size_t> kmeanspp_seeds(const Dataset& data, int m, Rng& rng) {
  const std::size_t n = data.size();
  std::vector<std::size_t> seeds;
  seeds.reserve(static_cast<std::size_t>(m));
  seeds.push_back(rng.uniform_index(n));

  std::vector<double> dist_sq(n, std::numeric_limits<double>::infinity());
  for (int c = 1; c < m; ++c) {
    const auto last = data.samples.row(seeds.back());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist_sq[i] = std::min(dist_sq[i],
                            squared_distance(data.samples.row(i), last));
      total += dist_sq[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist_sq[i];
        if (acc >= target && dist_sq[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.uniform_index(n);  // all points coincide with a seed
    }
    seeds.push_back(pick);
  }
  return seeds;
}

void assign_nearest(const Dataset& data, const Matrix& centers, int m,
                    std::vector<int>& assign) {
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.samples.row(i);
    int best = 0;
    double best_d = squared_distance(x, centers.row(0));
    for (int j = 1; j < m; ++j) {
      const double dj = squared_distance(x, centers.row(static_cast<std::size_t>(j)));
      if (dj < best_d) {
        best_d = dj;
        best = j;
      }
    }
    assign[i] = best;
  }
}

// Move the point farthest from its current center into each empty cluster.
// Keeps m clusters populated so that the m-sweep sees exactly m clusters.
void repair_empty_clusters(const Dataset& data, int m, std::vector<int>& assign,
                           Matrix& centers, std::vector<int>& sizes) {
  for (int j = 0; j < m; ++j) {
    if (sizes[static_cast<std::size_t>(j)] > 0) continue;
    double worst = -1.0;
    std::size_t victim = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const int owner = assign[i];
      if (sizes[static_cast<std::size_t>(owner)] <= 1) continue;
      const double d2 = squared_distance(
          data.samples.row(i), centers.row(static_cast<std::size_t>(owner)));
      if (d2 > worst) {
        worst = d2;
        victim = i;
      }
    }
    --sizes[static_cast<std::size_t>(assign[victim])];
    assign[victim] = j;
    ++sizes[static_cast<std::size_t>(j)];
    recompute_centers(data, assign, m, centers, sizes);
  }
}

Partition finalize_partition(const Dataset& data, int m,
                             std::vector<int> assign) {
  Partition p;
  p.m = m;
  p.assign = std::move(assign);
  recompute_centers(data, p.assign, m, p.centers, p.sizes);
  auto [per_cluster, total] = compactness(data, p);
  p.compactness_per_cluster = std::move(per_cluster);
  p.compactness_total = total;
  return p;
}

struct LloydResult {
  std::vector<int> assign;
  double objective = std::numeric_limits<double>::infinity();
};

LloydResult lloyd(const Dataset& data, int m, std::vector<int> assign,
                  int max_iter) {
  Matrix centers;
  std::vector<int> sizes;
  recompute_centers(data, assign, m, centers, sizes);
  repair_empty_clusters(data, m, assign, centers, sizes);

  std::vector<int> next(assign.size());
  for (int iter = 0; iter < max_iter; ++iter) {
    next = assign;
    assign_nearest(data, centers, m, next);
    std::vector<int> next_sizes(static_cast<std::size_t>(m), 0);
    for (int a : next) ++next_sizes[static_cast<std::size_t>(a)];
    bool had_empty = false;
    for (int j = 0; j < m; ++j) had_empty |= next_sizes[static_cast<std::size_t>(j)] == 0;
    if (had_empty) {
      Matrix tmp_centers;
      recompute_centers(data, next, m, tmp_centers, next_sizes);
      repair_empty_clusters(data, m, next, tmp_centers, next_sizes);
    }
    if (next == assign) break;
    assign = next;
    recompute_centers(data, assign, m, centers, sizes);
  }
  return {std::move(assign), 0.0};
}

}  // namespace

Partition lloyd_from_assignment(const Dataset& data, int m,
                                std::vector<int> initial_assign, int max_iter) {
  if (m < 1 || static_cast<std::size_t>(m) > data.size())
    fail(errc::too_many_clusters, "m must satisfy 1 <= m <= N");
  if (initial_assign.size() != data.size())
    fail(errc::partition_dataset_mismatch, "initial assignment length mismatch");
  auto result = lloyd(data, m, std::move(initial_assign), max_iter);
  return finalize_partition(data, m, std::move(result.assign));
}

Partition kmeans(const Dataset& data, int m, const RngSpec& rng,
                 const KMeansOptions& opts) {
  const std::size_t n = data.size();
  if (m < 1 || static_cast<std::size_t>(m) > n)
    fail(errc::too_many_clusters,
         "m=" + std::to_string(m) + " outside [1, N=" + std::to_string(n) + "]");

  Partition best;
  double best_obj = std::numeric_limits<double>::infinity();
  const int restarts = std::max(1, opts.restarts);
  for (int r = 0; r < restarts; ++r) {
    Rng engine(rng.derive("kmeans/restart" + std::to_string(r)));
    const auto seeds = kmeanspp_seeds(data, m, engine);
    Matrix centers(static_cast<std::size_t>(m), data.dim());
    for (int j = 0; j < m; ++j) {
      const auto src = data.samples.row(seeds[static_cast<std::size_t>(j)]);
      auto dst = centers.row(static_cast<std::size_t>(j));
      std::copy(src.begin(), src.end(), dst.begin());
    }
    std::vector<int> assign(n, 0);
    assign_nearest(data, centers, m, assign);
    auto result = lloyd(data, m, std::move(assign), opts.max_iter);
    Partition candidate = finalize_partition(data, m, std::move(result.assign));
    const double obj = candidate.compactness_total * static_cast<double>(n);
    if (obj < best_obj) {
      best_obj = obj;
      best = std::move(candidate);
    }
  }
  return best;
}

std::pair<std::vector<double>, double> compactness(const Dataset& data,
                                                   const Partition& p) {
  if (p.assign.size() != data.size())
    fail(errc::partition_dataset_mismatch, "partition does not match dataset");
  std::vector<double> per_cluster(static_cast<std::size_t>(p.m), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    per_cluster[static_cast<std::size_t>(p.assign[i])] += squared_distance(
        data.samples.row(i), p.centers.row(static_cast<std::size_t>(p.assign[i])));
  }
  double total = 0.0;
  for (double y : per_cluster) total += y;
  total /= static_cast<double>(data.size());
  return {std::move(per_cluster), total};
}

}  // namespace kmace
