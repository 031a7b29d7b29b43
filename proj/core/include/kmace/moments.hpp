#pragma once

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "kmace/linalg.hpp"

namespace kmace {

/// Per-cluster aggregates of the scatter-covariance eigenvalue spectra of
/// each member sample: the trace sums that drive every central-error and
/// compactness moment.
struct ClusterMoments {
  std::vector<double> per_sample_trace;     // tr(L_i)
  std::vector<double> per_sample_trace_sq;  // tr(L_i^2)
  double cross_trace_sum = 0.0;             // sum_{i != k} tr(L_i L_k)
  int n = 0;
  int d = 0;

  double trace_sum() const noexcept {
    double t = 0.0;
    for (double v : per_sample_trace) t += v;
    return t;
  }
  double trace_sq_sum() const noexcept {
    double t = 0.0;
    for (double v : per_sample_trace_sq) t += v;
    return t;
  }
};

/// All n samples share one spectrum: trace aggregates in closed form
/// (cross sum = n(n-1) tr(L^2)).
ClusterMoments shared_spectrum_moments(const SymSpectrum& spectrum, int n, int d);

/// Samples carry per-group spectra ((spectrum, count) pairs); the cross sum
/// is computed from the summed eigenvalue vector in O(n_groups * d).
ClusterMoments grouped_spectrum_moments(
    std::span<const std::pair<const SymSpectrum*, int>> groups, int d);

struct MomentPair {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of the cluster central error Z given the squared bias
/// term ||Delta||^2.
MomentPair z_moments(const ClusterMoments& cluster, double delta_sq);

/// Mean and variance of the observable cluster compactness Y given
/// ||Delta||^2.
MomentPair y_moments(const ClusterMoments& cluster, double delta_sq);

/// Probabilistic bounds on the unobservable ||Delta||^2 recovered from the
/// observed compactness y via the Chebyshev band |E[Y] - y| <= a sqrt(Var[Y]),
/// whose boundary is a quadratic in ||Delta||^2. `discarded` is set when the
/// band admits no plausible value (negative upper root, or no real roots);
/// the upper bound then reports the caller-provided sentinel.
struct DeltaBound {
  double lower = 0.0;
  double upper = 0.0;
  bool discarded = false;
  double y_bar = 0.0;   // interval center
  double k_term = 0.0;  // interval half-width
};

DeltaBound delta_bounds(const ClusterMoments& cluster, double y_mj, double alpha,
                        double delta_max = std::numeric_limits<double>::infinity());

/// Coefficients (b, c) of the boundary quadratic X^2 + bX + c = 0 in
/// X = ||Delta||^2. Exposed so tests can solve the polynomial independently.
std::pair<double, double> delta_quadratic_coefficients(
    const ClusterMoments& cluster, double y_mj, double alpha);

}  // namespace kmace
