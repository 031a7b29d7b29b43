#pragma once

#include <vector>

#include "kmace/ace.hpp"
#include "kmace/dataset.hpp"
#include "kmace/moments.hpp"
#include "kmace/rng.hpp"

namespace kmace {

/// Kernel similarity matrix. Gaussian entries exp(-||xi-xj||^2 / (2 sigma^2))
/// are the first-class path; `linear_gram` builds K = X X^T as a test hook
/// (sigma = 0 marks non-Gaussian).
struct GramMatrix {
  Matrix values;
  double sigma = 0.0;

  std::size_t size() const noexcept { return values.rows(); }
};

GramMatrix gram(const Dataset& data, double sigma);
GramMatrix linear_gram(const Dataset& data);

/// Deterministic farthest-first seeding in feature space: the two mutually
/// farthest points seed the first clusters, each further seed maximizes its
/// minimum feature-space distance to the existing seeds, and every remaining
/// point joins the nearest seed.
std::vector<int> initial_assignment(const GramMatrix& gram, int m);

/// Lloyd iterations in feature space via the kernel trick. Returned centers
/// are input-space member means (for reporting); the compactness fields hold
/// feature-space values. Deterministic: the seeding above replaces random
/// initialization, so `rng` is accepted for interface parity but unused.
Partition kernel_kmeans(const Dataset& data, const GramMatrix& gram, int m,
                        const RngSpec& rng, int max_iter = 300);

/// Kernel Lloyd iterations from a caller-provided assignment (shared-init
/// equivalence checks and per-iteration objective probes).
Partition kernel_kmeans_from_assignment(const Dataset& data,
                                        const GramMatrix& gram, int m,
                                        std::vector<int> initial_assign,
                                        int max_iter = 300);

/// Feature-space scatter spectrum of one partition cluster: eigenvalues of
/// the doubly centered Gram block divided by (n-1), plus the effective
/// dimension (eigenvalues above 1e-10 of the largest) that substitutes for d
/// in the moment formulas. Singletons yield a zero spectrum with d_eff = 1.
struct FeatureClusterMoments {
  SymSpectrum spectrum;
  int d_eff = 1;
  ClusterMoments moments;
};

std::vector<FeatureClusterMoments> feature_space_moments(const GramMatrix& gram,
                                                         const Partition& p);

/// Trace of the feature-space covariance of the whole dataset (doubly
/// centered full Gram over n-1); scales the kernel-side discard sentinel.
double feature_space_total_scatter(const GramMatrix& gram);

/// Kernel-width sweep record: the minimized ACE upper bound per sigma, the
/// per-sigma CNC estimate, and the gradient-sum score past the curve peak.
struct SigmaSweep {
  std::vector<double> grid;
  std::vector<double> min_upper_z;
  std::vector<int> m_hat_per_sigma;
  std::vector<double> score;  // 0 where the rule is undefined
  double sigma_hat = 0.0;
  int sigma_hat_index = 0;
  int peak_index = 0;
  bool fallback = false;  // score rule undefined; fell back to argmin past peak
};

struct KernelSelection {
  SelectionReport report;  // the report computed at sigma_hat
  SigmaSweep sweep;
};

/// Feature-space selection across a sigma grid with automatic kernel-width
/// choice by the gradient-sum rule.
KernelSelection kernel_select_cnc(const Dataset& data, int m_min, int m_max,
                                  std::vector<double> sigma_grid, double alpha,
                                  double beta, const RngSpec& rng,
                                  int max_iter = 300);

/// Data-driven default grid: `points` widths linearly spaced from
/// 0.1 x median pairwise distance to 2 x maximum pairwise distance.
std::vector<double> default_sigma_grid(const Dataset& data, int points = 20);

}  // namespace kmace
