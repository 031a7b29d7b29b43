#pragma once

#include <utility>
#include <vector>

#include "kmace/dataset.hpp"
#include "kmace/rng.hpp"

namespace kmace {

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
};

/// Lloyd's K-means with k-means++ seeding. Runs `restarts` independent
/// seedings and returns the partition with the lowest total within-cluster
/// sum of squares. Deterministic for a fixed RngSpec; nearest-center ties
/// break to the lowest cluster index; an emptied cluster is repaired by
/// moving in the point currently farthest from its own center.
Partition kmeans(const Dataset& data, int m, const RngSpec& rng,
                 const KMeansOptions& opts = {});

/// Lloyd iterations from a caller-provided initial assignment (no restarts,
/// no reseeding). Shared by the kernel-equivalence checks.
Partition lloyd_from_assignment(const Dataset& data, int m,
                                std::vector<int> initial_assign,
                                int max_iter = 300);

/// Per-cluster sums of squared distances to the cluster center and their
/// (1/N)-scaled total, recomputed from the assignment.
std::pair<std::vector<double>, double> compactness(const Dataset& data,
                                                   const Partition& p);

}  // namespace kmace
