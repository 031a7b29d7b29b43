#include "kmace/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "kmace/error.hpp"

namespace kmace {

int Dataset::true_cluster_count() const noexcept {
  if (!labels || labels->empty()) return 0;
  return *std::max_element(labels->begin(), labels->end()) + 1;
}

Dataset validate_dataset(Matrix raw, std::optional<std::vector<int>> labels,
                         std::string name) {
  if (raw.rows() == 0 || raw.cols() == 0) {
    fail(errc::empty_data, "dataset requires N >= 1 samples and d >= 1 features");
  }
  if (!raw.all_finite()) {
    fail(errc::non_finite_value, "dataset contains NaN or Inf");
  }
  if (labels) {
    if (labels->size() != raw.rows()) {
      fail(errc::label_length_mismatch,
           "expected " + std::to_string(raw.rows()) + " labels, got " +
               std::to_string(labels->size()));
    }
    // Remap arbitrary ids to dense 0..m-1 in order of first appearance.
    std::unordered_map<int, int> remap;
    for (int& l : *labels) {
      auto [it, inserted] = remap.emplace(l, static_cast<int>(remap.size()));
      l = it->second;
    }
  }
  return Dataset{std::move(raw), std::move(labels), std::move(name)};
}

std::vector<int> Partition::members_of(int cluster) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < assign.size(); ++i) {
    if (assign[i] == cluster) out.push_back(static_cast<int>(i));
  }
  return out;
}

void check_partition(const Dataset& data, const Partition& p) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  if (p.m < 1) fail(errc::internal, "partition has no clusters");
  if (p.assign.size() != n) fail(errc::internal, "assignment length mismatch");
  if (p.centers.rows() != static_cast<std::size_t>(p.m) || p.centers.cols() != d)
    fail(errc::internal, "centers shape mismatch");
  if (p.sizes.size() != static_cast<std::size_t>(p.m) ||
      p.compactness_per_cluster.size() != static_cast<std::size_t>(p.m))
    fail(errc::internal, "per-cluster array length mismatch");

  std::vector<int> counts(p.m, 0);
  for (int a : p.assign) {
    if (a < 0 || a >= p.m) fail(errc::internal, "cluster index out of range");
    ++counts[a];
  }
  long total = 0;
  for (int j = 0; j < p.m; ++j) {
    if (counts[j] != p.sizes[j]) fail(errc::internal, "cluster size mismatch");
    total += counts[j];
  }
  if (total != static_cast<long>(n)) fail(errc::internal, "sizes do not sum to N");

  // Centers must equal member means within 1e-9 per coordinate.
  Matrix means(p.m, d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.samples.row(i);
    auto c = means.row(static_cast<std::size_t>(p.assign[i]));
    for (std::size_t f = 0; f < d; ++f) c[f] += x[f];
  }
  for (int j = 0; j < p.m; ++j) {
    if (p.sizes[j] == 0) continue;
    for (std::size_t f = 0; f < d; ++f) {
      const double mean = means(j, f) / p.sizes[j];
      if (std::abs(mean - p.centers(static_cast<std::size_t>(j), f)) > 1e-9)
        fail(errc::internal, "center is not the member mean");
    }
  }

  double sum = 0.0;
  for (double y : p.compactness_per_cluster) sum += y;
  sum /= static_cast<double>(n);
  const double scale = std::max(std::abs(sum), std::abs(p.compactness_total));
  if (std::abs(sum - p.compactness_total) > 1e-9 * std::max(1.0, scale))
    fail(errc::internal, "total compactness inconsistent with per-cluster sums");
}

}  // namespace kmace
