#pragma once

#include <vector>

#include "kmace/dataset.hpp"
#include "kmace/kmeans.hpp"
#include "kmace/moments.hpp"
#include "kmace/rng.hpp"

namespace kmace {

/// Confidence interval on the m-clustering average central error:
/// upper = E_up[Z_m] + beta sqrt(Var[Z_m]), lower = E_lo[Z_m] - beta sqrt(Var),
/// where E_up/E_lo substitute the Delta upper/lower bounds. `excluded` is set
/// when any member cluster's DeltaBound was discarded; `upper` then carries
/// the sentinel so the m loses every argmin.
struct AceBounds {
  double mean = 0.0;      // midpoint estimate of E[Z_m]
  double variance = 0.0;  // Var[Z_m]
  double lower = 0.0;
  double upper = 0.0;
  double beta = 0.0;
  bool excluded = false;
};

/// Scatter spectra of the covariance-source clusters (one per k-cluster)
/// plus the formula dimension each one carries (ambient d in input space,
/// d_eff in feature space).
struct ClusterSpectraSource {
  std::vector<SymSpectrum> spectra;
  std::vector<int> dims;
};

/// Per-cluster covariance spectra of a partition (input space).
ClusterSpectraSource cluster_spectra(const Dataset& data, const Partition& p);

/// Sentinel dominating any legitimate ACE value: 1e6 * tr(global covariance).
double delta_max_sentinel(const Dataset& data);

/// Assemble the ACE bounds of an m-partition using scatter spectra looked up
/// through the k-assignment. Pure function over plain arrays so the kernel
/// pipeline can reuse it with feature-space inputs.
AceBounds assemble_ace_bounds(const std::vector<int>& m_assign,
                              const std::vector<int>& m_sizes,
                              const std::vector<double>& m_compactness,
                              const std::vector<int>& k_assign,
                              const ClusterSpectraSource& source,
                              double alpha, double beta, double delta_max);

/// ACE bounds for an m-partition with per-sample covariances estimated from
/// the clusters of `k_source`.
AceBounds ace_bounds(const Dataset& data, const Partition& m_partition,
                     const Partition& k_source, double alpha, double beta);

/// Result of the two-index (m, k) selection.
struct SelectionReport {
  int m_min = 0;
  int m_max = 0;
  Matrix z_upper_surface;           // rows: m index, cols: k index
  std::vector<int> m_hat_of_k;      // per k
  std::vector<double> discrepancy;  // (z_up[m_hat_k,k] - z_up[k,k]) / z_up[m_hat_k,k]
  int k_star = 0;
  int m_hat = 0;
  Partition chosen_partition;

  // Parameter echo for replay.
  RngSpec rng;
  double alpha = 5.0;
  double beta = 5.0;
  double delta_max = 0.0;
  double sigma = 0.0;  // kernel width when produced by the kernel pipeline
};

/// Column-wise argmin, normalized discrepancies, and the final (k*, m_hat)
/// choice from a z-upper surface. Ties break to the smallest index.
void select_from_surface(SelectionReport& report, double sentinel);

/// The full estimator: K-means once per m in [m_min, m_max], the
/// (m, k) bound surface, and the discrepancy-minimizing selection.
SelectionReport select_cnc(const Dataset& data, int m_min, int m_max,
                           double alpha, double beta, const RngSpec& rng,
                           const KMeansOptions& opts = {});

}  // namespace kmace
