#pragma once

#include <span>
#include <vector>

#include "kmace/dataset.hpp"

namespace kmace {

/// Adjusted Rand index in [-1, 1]; 1 for identical partitions, 0 in
/// expectation for independent ones. Invariant under relabeling.
double adjusted_rand_index(std::span<const int> truth,
                           std::span<const int> predicted);

/// Variation of information normalized by the joint entropy, in [0, 1];
/// 0 for identical partitions. Invariant under relabeling.
double normalized_variation_information(std::span<const int> truth,
                                        std::span<const int> predicted);

struct CncAccuracy {
  double mean = 0.0;
  double stddev = 0.0;       // sample standard deviation (divisor n-1)
  double accuracy_pct = 0.0; // percent of runs with m_hat == true_m
};

CncAccuracy cnc_accuracy(std::span<const int> m_hats, int true_m);

/// One row of the baseline validity-index table. Selection rules: max CH,
/// min DB, max silhouette.
struct ValidityIndices {
  double calinski_harabasz = 0.0;
  double davies_bouldin = 0.0;
  double silhouette = 0.0;
};

/// Standard Calinski-Harabasz, Davies-Bouldin, and mean silhouette values
/// for each partition of a contiguous m-range (every m must be >= 2).
std::vector<ValidityIndices> baseline_indices(const Dataset& data,
                                              std::span<const Partition> partitions);

}  // namespace kmace
