#pragma once

#include <string>
#include <vector>

#include "kmace/dataset.hpp"
#include "kmace/rng.hpp"

namespace kmace {

/// Gaussian mixture blueprint: fixed true centers, per-cluster covariances,
/// and per-cluster sample counts. Sampling draws scatter around the fixed
/// centers, so repeated runs share centers and vary only the scatter.
struct MixtureSpec {
  std::string name;
  Matrix centers;                   // m x d
  std::vector<Matrix> covariances;  // m PSD d x d matrices
  std::vector<int> counts;
  RngSpec rng;

  int cluster_count() const noexcept { return static_cast<int>(counts.size()); }
  int total_count() const noexcept {
    int n = 0;
    for (int c : counts) n += c;
    return n;
  }
};

/// Draw the dataset: sample i of cluster j is center_j + chol(Sigma_j) * z,
/// z standard normal. Ground-truth labels record j.
Dataset sample_mixture(const MixtureSpec& spec);

/// Named experiment families. s1-s4 are fixed 2-D fixtures of increasing
/// difficulty; u1-u6 are 10-D fixtures whose 9 centers are drawn uniformly
/// in a hypercube (side 10 for the minor-overlap variants, 8 for the major
/// ones) with per-dimension scatter deviation below 0.3.
MixtureSpec scenario(const std::string& name, const RngSpec& rng);

/// Smallest center distance divided by the sum of the two clusters' standard
/// deviations along the center-connecting direction. Quantifies overlap:
/// major < 2, minor in [2, 4], none > 6.
double min_overlap_ratio(const MixtureSpec& spec);

}  // namespace kmace
