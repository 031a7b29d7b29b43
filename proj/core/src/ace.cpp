#include "kmace/ace.hpp"

#include <algorithm>
#include <cmath>

#include "kmace/error.hpp"
#include "kmace/parallel.hpp"

namespace kmace {

ClusterSpectraSource cluster_spectra(const Dataset& data, const Partition& p) {
  ClusterSpectraSource out;
  out.spectra.resize(static_cast<std::size_t>(p.m));
  out.dims.assign(static_cast<std::size_t>(p.m), static_cast<int>(data.dim()));
  for (int j = 0; j < p.m; ++j) {
    const auto members = p.members_of(j);
    const Matrix block = data.samples.take_rows(members);
    out.spectra[static_cast<std::size_t>(j)] = sym_eigenvalues(covariance(block));
  }
  return out;
}

double delta_max_sentinel(const Dataset& data) {
  const Matrix cov = covariance(data.samples);
  double trace = 0.0;
  for (std::size_t f = 0; f < cov.rows(); ++f) trace += cov(f, f);
  return 1e6 * std::max(trace, 1e-300);
}

AceBounds assemble_ace_bounds(const std::vector<int>& m_assign,
                              const std::vector<int>& m_sizes,
                              const std::vector<double>& m_compactness,
                              const std::vector<int>& k_assign,
                              const ClusterSpectraSource& source,
                              double alpha, double beta, double delta_max) {
  if (alpha <= 1.0 || beta <= 1.0)
    fail(errc::non_positive_alpha, "alpha and beta must exceed 1");
  const std::size_t n_total = m_assign.size();
  const int m = static_cast<int>(m_sizes.size());

  // Group each m-cluster's members by their covariance-source cluster.
  std::vector<std::vector<int>> counts(
      m_sizes.size(), std::vector<int>(source.spectra.size(), 0));
  for (std::size_t i = 0; i < n_total; ++i)
    ++counts[static_cast<std::size_t>(m_assign[i])]
            [static_cast<std::size_t>(k_assign[i])];

  double e_up = 0.0;
  double e_lo = 0.0;
  double var = 0.0;
  bool excluded = false;
  std::vector<std::pair<const SymSpectrum*, int>> groups;
  for (int j = 0; j < m; ++j) {
    groups.clear();
    int dim = 1;
    for (std::size_t c = 0; c < source.spectra.size(); ++c) {
      const int q = counts[static_cast<std::size_t>(j)][c];
      if (q == 0) continue;
      groups.emplace_back(&source.spectra[c], q);
      dim = std::max(dim, source.dims[c]);
    }
    const ClusterMoments moments = grouped_spectrum_moments(groups, dim);
    const double y_mj = m_compactness[static_cast<std::size_t>(j)];
    const DeltaBound db = delta_bounds(moments, y_mj, alpha, delta_max);
    excluded |= db.discarded;

    const double t1_over_n = moments.trace_sum() / moments.n;
    e_up += db.upper + t1_over_n;
    e_lo += db.lower + t1_over_n;
    var += z_moments(moments, 0.0).variance;
  }

  const double n = static_cast<double>(n_total);
  AceBounds out;
  out.beta = beta;
  e_up /= n;
  e_lo /= n;
  out.variance = var / (n * n);
  out.mean = 0.5 * (e_up + e_lo);
  const double spread = beta * std::sqrt(std::max(0.0, out.variance));
  out.upper = e_up + spread;
  out.lower = e_lo - spread;
  out.excluded = excluded;
  if (excluded) out.upper = delta_max;
  return out;
}

AceBounds ace_bounds(const Dataset& data, const Partition& m_partition,
                     const Partition& k_source, double alpha, double beta) {
  if (m_partition.assign.size() != data.size() ||
      k_source.assign.size() != data.size())
    fail(errc::partition_dataset_mismatch,
         "partitions must cover the same dataset");
  const ClusterSpectraSource source = cluster_spectra(data, k_source);
  return assemble_ace_bounds(m_partition.assign, m_partition.sizes,
                             m_partition.compactness_per_cluster,
                             k_source.assign, source, alpha, beta,
                             delta_max_sentinel(data));
}

void select_from_surface(SelectionReport& report, double sentinel) {
  const std::size_t range = report.z_upper_surface.rows();
  report.m_hat_of_k.assign(range, report.m_min);
  report.discrepancy.assign(range, 0.0);

  std::vector<double> scores(range, 0.0);
  for (std::size_t ki = 0; ki < range; ++ki) {
    std::size_t best = 0;
    for (std::size_t mi = 1; mi < range; ++mi) {
      if (report.z_upper_surface(mi, ki) < report.z_upper_surface(best, ki))
        best = mi;
    }
    report.m_hat_of_k[ki] = report.m_min + static_cast<int>(best);
    const double z_min = report.z_upper_surface(best, ki);
    const double z_diag = report.z_upper_surface(ki, ki);
    if (z_min >= sentinel) {
      // Every m was discarded under this covariance source.
      report.discrepancy[ki] = sentinel;
      scores[ki] = sentinel;
    } else if (z_min <= 0.0) {
      report.discrepancy[ki] = 0.0;
      scores[ki] = (z_diag <= 0.0) ? 0.0 : sentinel;
    } else {
      report.discrepancy[ki] = (z_min - z_diag) / z_min;
      scores[ki] = std::abs(report.discrepancy[ki]);
    }
  }
  std::size_t k_best = 0;
  for (std::size_t ki = 1; ki < range; ++ki)
    if (scores[ki] < scores[k_best]) k_best = ki;
  report.k_star = report.m_min + static_cast<int>(k_best);
  report.m_hat = report.m_hat_of_k[k_best];
}

SelectionReport select_cnc(const Dataset& data, int m_min, int m_max,
                           double alpha, double beta, const RngSpec& rng,
                           const KMeansOptions& opts) {
  if (m_min < 1 || m_min > m_max ||
      static_cast<std::size_t>(m_max) > data.size())
    fail(errc::range_invalid, "need 1 <= m_min <= m_max <= N");

  const std::size_t range = static_cast<std::size_t>(m_max - m_min + 1);
  std::vector<Partition> partitions(range);
  parallel_for(range, [&](std::size_t idx) {
    const int m = m_min + static_cast<int>(idx);
    partitions[idx] =
        kmeans(data, m, rng.derive("m" + std::to_string(m)), opts);
  });

  std::vector<ClusterSpectraSource> sources(range);
  parallel_for(range, [&](std::size_t idx) {
    sources[idx] = cluster_spectra(data, partitions[idx]);
  });

  const double sentinel = delta_max_sentinel(data);
  SelectionReport report;
  report.m_min = m_min;
  report.m_max = m_max;
  report.rng = rng;
  report.alpha = alpha;
  report.beta = beta;
  report.delta_max = sentinel;
  report.z_upper_surface = Matrix(range, range, 0.0);
  parallel_for(range, [&](std::size_t ki) {
    for (std::size_t mi = 0; mi < range; ++mi) {
      const Partition& mp = partitions[mi];
      const AceBounds bounds = assemble_ace_bounds(
          mp.assign, mp.sizes, mp.compactness_per_cluster,
          partitions[ki].assign, sources[ki], alpha, beta, sentinel);
      report.z_upper_surface(mi, ki) = bounds.upper;
    }
  });

  select_from_surface(report, sentinel);
  report.chosen_partition =
      partitions[static_cast<std::size_t>(report.m_hat - m_min)];
  return report;
}

}  // namespace kmace
