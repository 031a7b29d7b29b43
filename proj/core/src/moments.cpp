#include "kmace/moments.hpp"

#include <algorithm>
#include <cmath>

#include "kmace/error.hpp"

namespace kmace {

ClusterMoments shared_spectrum_moments(const SymSpectrum& spectrum, int n, int d) {
  ClusterMoments out;
  out.n = n;
  out.d = d;
  const double tr = spectrum.trace();
  const double tr_sq = spectrum.trace_sq();
  out.per_sample_trace.assign(static_cast<std::size_t>(n), tr);
  out.per_sample_trace_sq.assign(static_cast<std::size_t>(n), tr_sq);
  out.cross_trace_sum = static_cast<double>(n) * (n - 1) * tr_sq;
  return out;
}

ClusterMoments grouped_spectrum_moments(
    std::span<const std::pair<const SymSpectrum*, int>> groups, int d) {
  ClusterMoments out;
  out.d = d;

  std::size_t max_len = 0;
  for (const auto& [spec, count] : groups)
    max_len = std::max(max_len, spec->eigenvalues.size());

  // cross = ||sum_i lambda_i||^2 - sum_i tr(L_i^2), with spectra dotted as
  // descending eigenvalue vectors (zero-padded to a common length).
  std::vector<double> summed(max_len, 0.0);
  double tr_sq_total = 0.0;
  for (const auto& [spec, count] : groups) {
    out.n += count;
    const double tr = spec->trace();
    const double tr_sq = spec->trace_sq();
    tr_sq_total += count * tr_sq;
    out.per_sample_trace.insert(out.per_sample_trace.end(),
                                static_cast<std::size_t>(count), tr);
    out.per_sample_trace_sq.insert(out.per_sample_trace_sq.end(),
                                   static_cast<std::size_t>(count), tr_sq);
    for (std::size_t r = 0; r < spec->eigenvalues.size(); ++r)
      summed[r] += count * spec->eigenvalues[r];
  }
  double norm_sq = 0.0;
  for (double v : summed) norm_sq += v * v;
  out.cross_trace_sum = std::max(0.0, norm_sq - tr_sq_total);
  return out;
}

MomentPair z_moments(const ClusterMoments& cluster, double delta_sq) {
  const double n = cluster.n;
  const double t1 = cluster.trace_sum();
  const double t2 = cluster.trace_sq_sum();
  MomentPair out;
  out.mean = delta_sq + t1 / n;
  out.variance = (2.0 / (n * n)) * (t2 + cluster.cross_trace_sum);
  return out;
}

MomentPair y_moments(const ClusterMoments& cluster, double delta_sq) {
  const double n = cluster.n;
  const double d = cluster.d;
  const double t1 = cluster.trace_sum();
  const double t2 = cluster.trace_sq_sum();
  MomentPair out;
  out.mean = delta_sq + (n - 1.0) / n * t1;
  out.variance = 2.0 * (n - 1.0) * (n - 1.0) / (n * n) * t2 +
                 (2.0 / (n * n)) * cluster.cross_trace_sum +
                 4.0 / (d * n) * delta_sq * t1;
  return out;
}

std::pair<double, double> delta_quadratic_coefficients(
    const ClusterMoments& cluster, double y_mj, double alpha) {
  const double n = cluster.n;
  const double d = cluster.d;
  const double t1 = cluster.trace_sum();
  const double t2 = cluster.trace_sq_sum();
  const double g = (n - 1.0) / n * t1;
  const double a2 = alpha * alpha;
  const double b = 2.0 * (g - y_mj) - a2 * (4.0 / (d * n)) * t1;
  const double spectral_var = 2.0 * (n - 1.0) * (n - 1.0) / (n * n) * t2 +
                              (2.0 / (n * n)) * cluster.cross_trace_sum;
  const double c = (g - y_mj) * (g - y_mj) - a2 * spectral_var;
  return {b, c};
}

DeltaBound delta_bounds(const ClusterMoments& cluster, double y_mj, double alpha,
                        double delta_max) {
  if (alpha <= 1.0)
    fail(errc::non_positive_alpha, "alpha must exceed 1 for a meaningful band");
  if (y_mj < 0.0) fail(errc::internal, "compactness cannot be negative");

  const auto [b, c] = delta_quadratic_coefficients(cluster, y_mj, alpha);
  DeltaBound out;
  out.y_bar = -0.5 * b;
  const double disc = out.y_bar * out.y_bar - c;
  if (disc < 0.0) {
    // The band |E[Y]-y| <= alpha sqrt(Var[Y]) has no real solution: the
    // observed compactness is inconsistent with the assumed spectra.
    out.discarded = true;
    out.lower = 0.0;
    out.upper = delta_max;
    return out;
  }
  out.k_term = std::sqrt(disc);
  const double upper = out.y_bar + out.k_term;
  const double lower = out.y_bar - out.k_term;
  if (upper < 0.0) {
    out.discarded = true;
    out.lower = 0.0;
    out.upper = delta_max;
    return out;
  }
  out.upper = upper;
  out.lower = std::max(0.0, lower);  // a squared norm cannot go below zero
  return out;
}

}  // namespace kmace
