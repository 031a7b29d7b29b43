#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kmace/matrix.hpp"

namespace kmace {

/// Immutable sample collection: N rows of d features, optionally paired with
/// ground-truth cluster ids (dense, 0-based after ingest).
struct Dataset {
  Matrix samples;
  std::optional<std::vector<int>> labels;
  std::string name;

  std::size_t size() const noexcept { return samples.rows(); }
  std::size_t dim() const noexcept { return samples.cols(); }

  /// Number of distinct ground-truth clusters; 0 when unlabeled.
  int true_cluster_count() const noexcept;
};

/// Validate a raw matrix (and optional labels) into a Dataset. Labels are
/// remapped to contiguous 0-based ids in order of first appearance.
Dataset validate_dataset(Matrix raw,
                         std::optional<std::vector<int>> labels = std::nullopt,
                         std::string name = "");

/// An m-clustering: assignment, per-cluster centers/sizes, and compactness.
/// For kernel runs the compactness fields hold feature-space values while
/// centers remain input-space means (reporting only).
struct Partition {
  int m = 0;
  std::vector<int> assign;
  Matrix centers;
  std::vector<int> sizes;
  std::vector<double> compactness_per_cluster;
  double compactness_total = 0.0;

  std::vector<int> members_of(int cluster) const;
};

/// Verify the structural Partition invariants against a dataset; throws
/// errc::internal on violation. Exercised by tests and debug paths.
void check_partition(const Dataset& data, const Partition& p);

}  // namespace kmace
