#include "kmace/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kmace/error.hpp"
#include "kmace/parallel.hpp"

namespace kmace {

namespace {

constexpr std::size_t kMaxGramSize = 20000;
constexpr double kDeffThreshold = 1e-10;

double feature_sq_dist(const Matrix& k, std::size_t i, std::size_t j) {
  return k(i, i) + k(j, j) - 2.0 * k(i, j);
}

struct ClusterStats {
  Matrix member_sums;        // m x N: sum over cluster members l of K(i, l)
  std::vector<double> self;  // Q_j = sum_{i,l in C_j} K(i, l)
  std::vector<int> sizes;
};

ClusterStats compute_stats(const Matrix& k, const std::vector<int>& assign, int m) {
  const std::size_t n = k.rows();
  ClusterStats stats;
  stats.member_sums = Matrix(static_cast<std::size_t>(m), n, 0.0);
  stats.self.assign(static_cast<std::size_t>(m), 0.0);
  stats.sizes.assign(static_cast<std::size_t>(m), 0);
  for (std::size_t l = 0; l < n; ++l) {
    const int j = assign[l];
    ++stats.sizes[static_cast<std::size_t>(j)];
    const auto src = k.row(l);
    auto dst = stats.member_sums.row(static_cast<std::size_t>(j));
    for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
  }
  for (int j = 0; j < m; ++j) {
    const auto row = stats.member_sums.row(static_cast<std::size_t>(j));
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (assign[i] == j) q += row[i];
    stats.self[static_cast<std::size_t>(j)] = q;
  }
  return stats;
}

// ||phi(x_i) - c_phi_j||^2 via the kernel trick.
double feature_center_dist(const Matrix& k, const ClusterStats& stats,
                           std::size_t i, int j) {
  const double nj = stats.sizes[static_cast<std::size_t>(j)];
  return k(i, i) - 2.0 * stats.member_sums(static_cast<std::size_t>(j), i) / nj +
         stats.self[static_cast<std::size_t>(j)] / (nj * nj);
}

void repair_empty_feature_clusters(const Matrix& k, std::vector<int>& assign,
                                   int m) {
  std::vector<int> sizes(static_cast<std::size_t>(m), 0);
  for (int a : assign) ++sizes[static_cast<std::size_t>(a)];
  for (int j = 0; j < m; ++j) {
    if (sizes[static_cast<std::size_t>(j)] > 0) continue;
    ClusterStats stats = compute_stats(k, assign, m);
    double worst = -1.0;
    std::size_t victim = 0;
    for (std::size_t i = 0; i < k.rows(); ++i) {
      if (stats.sizes[static_cast<std::size_t>(assign[i])] <= 1) continue;
      const double d2 = feature_center_dist(k, stats, i, assign[i]);
      if (d2 > worst) {
        worst = d2;
        victim = i;
      }
    }
    --sizes[static_cast<std::size_t>(assign[victim])];
    assign[victim] = j;
    ++sizes[static_cast<std::size_t>(j)];
  }
}

Matrix input_space_centers(const Dataset& data, const std::vector<int>& assign,
                           int m, const std::vector<int>& sizes) {
  Matrix centers(static_cast<std::size_t>(m), data.dim(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.samples.row(i);
    auto c = centers.row(static_cast<std::size_t>(assign[i]));
    for (std::size_t f = 0; f < data.dim(); ++f) c[f] += x[f];
  }
  for (int j = 0; j < m; ++j) {
    const int nj = sizes[static_cast<std::size_t>(j)];
    if (nj == 0) continue;
    auto c = centers.row(static_cast<std::size_t>(j));
    for (std::size_t f = 0; f < data.dim(); ++f) c[f] /= nj;
  }
  return centers;
}

}  // namespace

GramMatrix gram(const Dataset& data, double sigma) {
  if (sigma <= 0.0) fail(errc::non_positive_sigma, "sigma must be positive");
  const std::size_t n = data.size();
  if (n > kMaxGramSize)
    fail(errc::gram_too_large,
         "dense Gram matrix capped at N=" + std::to_string(kMaxGramSize));
  GramMatrix out;
  out.sigma = sigma;
  out.values = Matrix(n, n, 0.0);
  const double inv = -1.0 / (2.0 * sigma * sigma);
  for (std::size_t i = 0; i < n; ++i) {
    out.values(i, i) = 1.0;
    const auto xi = data.samples.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::exp(inv * squared_distance(xi, data.samples.row(j)));
      out.values(i, j) = v;
      out.values(j, i) = v;
    }
  }
  return out;
}

GramMatrix linear_gram(const Dataset& data) {
  const std::size_t n = data.size();
  if (n > kMaxGramSize)
    fail(errc::gram_too_large,
         "dense Gram matrix capped at N=" + std::to_string(kMaxGramSize));
  GramMatrix out;
  out.sigma = 0.0;
  out.values = Matrix(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = data.samples.row(i);
    for (std::size_t j = i; j < n; ++j) {
      double dot = 0.0;
      const auto xj = data.samples.row(j);
      for (std::size_t f = 0; f < xi.size(); ++f) dot += xi[f] * xj[f];
      out.values(i, j) = dot;
      out.values(j, i) = dot;
    }
  }
  return out;
}

std::vector<int> initial_assignment(const GramMatrix& g, int m) {
  const Matrix& k = g.values;
  const std::size_t n = k.rows();
  if (m < 1 || static_cast<std::size_t>(m) > n)
    fail(errc::too_many_clusters, "m must satisfy 1 <= m <= N");
  std::vector<int> assign(n, 0);
  if (m == 1) return assign;

  // Two mutually farthest points in feature space seed the first clusters.
  std::vector<std::size_t> seeds;
  seeds.reserve(static_cast<std::size_t>(m));
  std::size_t best_i = 0;
  std::size_t best_j = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = feature_sq_dist(k, i, j);
      if (d2 > best) {
        best = d2;
        best_i = i;
        best_j = j;
      }
    }
  seeds.push_back(best_i);
  seeds.push_back(best_j);

  // Farthest-first: each new seed maximizes its minimum distance to the
  // existing seeds.
  std::vector<bool> is_seed(n, false);
  is_seed[best_i] = true;
  is_seed[best_j] = true;
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    min_dist[i] = std::min(feature_sq_dist(k, i, best_i),
                           feature_sq_dist(k, i, best_j));
  while (seeds.size() < static_cast<std::size_t>(m)) {
    std::size_t pick = n;
    double far = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_seed[i]) continue;
      if (min_dist[i] > far) {
        far = min_dist[i];
        pick = i;
      }
    }
    seeds.push_back(pick);
    is_seed[pick] = true;
    for (std::size_t i = 0; i < n; ++i)
      min_dist[i] = std::min(min_dist[i], feature_sq_dist(k, i, pick));
  }

  for (std::size_t i = 0; i < n; ++i) {
    int best_seed = 0;
    double best_d = feature_sq_dist(k, i, seeds[0]);
    for (int s = 1; s < m; ++s) {
      const double d2 = feature_sq_dist(k, i, seeds[static_cast<std::size_t>(s)]);
      if (d2 < best_d) {
        best_d = d2;
        best_seed = s;
      }
    }
    assign[i] = best_seed;
  }
  return assign;
}

Partition kernel_kmeans(const Dataset& data, const GramMatrix& g, int m,
                        const RngSpec& /*rng*/, int max_iter) {
  return kernel_kmeans_from_assignment(data, g, m, initial_assignment(g, m),
                                       max_iter);
}

Partition kernel_kmeans_from_assignment(const Dataset& data,
                                        const GramMatrix& g, int m,
                                        std::vector<int> initial_assign,
                                        int max_iter) {
  const Matrix& k = g.values;
  const std::size_t n = k.rows();
  if (n != data.size())
    fail(errc::partition_dataset_mismatch, "Gram matrix does not match dataset");
  if (m < 1 || static_cast<std::size_t>(m) > n)
    fail(errc::too_many_clusters, "m must satisfy 1 <= m <= N");
  if (initial_assign.size() != n)
    fail(errc::partition_dataset_mismatch, "initial assignment length mismatch");

  std::vector<int> assign = std::move(initial_assign);
  repair_empty_feature_clusters(k, assign, m);

  std::vector<int> next(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    const ClusterStats stats = compute_stats(k, assign, m);
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = feature_center_dist(k, stats, i, 0);
      for (int j = 1; j < m; ++j) {
        const double d2 = feature_center_dist(k, stats, i, j);
        if (d2 < best_d) {
          best_d = d2;
          best = j;
        }
      }
      next[i] = best;
    }
    repair_empty_feature_clusters(k, next, m);
    if (next == assign) break;
    assign = next;
  }

  Partition p;
  p.m = m;
  p.assign = std::move(assign);
  p.sizes.assign(static_cast<std::size_t>(m), 0);
  for (int a : p.assign) ++p.sizes[static_cast<std::size_t>(a)];
  p.centers = input_space_centers(data, p.assign, m, p.sizes);

  // Feature-space compactness: sum_j [ sum_{i in C_j} K_ii - Q_j / n_j ].
  const ClusterStats stats = compute_stats(k, p.assign, m);
  p.compactness_per_cluster.assign(static_cast<std::size_t>(m), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    p.compactness_per_cluster[static_cast<std::size_t>(p.assign[i])] += k(i, i);
  for (int j = 0; j < m; ++j) {
    auto& y = p.compactness_per_cluster[static_cast<std::size_t>(j)];
    y -= stats.self[static_cast<std::size_t>(j)] /
         stats.sizes[static_cast<std::size_t>(j)];
    y = std::max(0.0, y);
  }
  double total = 0.0;
  for (double y : p.compactness_per_cluster) total += y;
  p.compactness_total = total / static_cast<double>(n);
  return p;
}

std::vector<FeatureClusterMoments> feature_space_moments(const GramMatrix& g,
                                                         const Partition& p) {
  const Matrix& k = g.values;
  std::vector<FeatureClusterMoments> out(static_cast<std::size_t>(p.m));
  for (int j = 0; j < p.m; ++j) {
    auto& fm = out[static_cast<std::size_t>(j)];
    const auto members = p.members_of(j);
    const std::size_t nj = members.size();
    if (nj <= 1) {
      fm.spectrum = SymSpectrum{{}, 0};
      fm.d_eff = 1;
      fm.moments = shared_spectrum_moments(fm.spectrum, static_cast<int>(nj), 1);
      continue;
    }
    // Doubly centered Gram block scaled by 1/(n-1): its eigenvalues are the
    // feature-space scatter covariance spectrum (kernel-PCA identity).
    Matrix block(nj, nj);
    for (std::size_t a = 0; a < nj; ++a) {
      const auto row = k.row(static_cast<std::size_t>(members[a]));
      for (std::size_t b = 0; b < nj; ++b)
        block(a, b) = row[static_cast<std::size_t>(members[b])];
    }
    std::vector<double> row_mean(nj, 0.0);
    double total_mean = 0.0;
    for (std::size_t a = 0; a < nj; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < nj; ++b) acc += block(a, b);
      row_mean[a] = acc / static_cast<double>(nj);
      total_mean += acc;
    }
    total_mean /= static_cast<double>(nj) * static_cast<double>(nj);
    for (std::size_t a = 0; a < nj; ++a)
      for (std::size_t b = 0; b < nj; ++b)
        block(a, b) += total_mean - row_mean[a] - row_mean[b];

    auto values = symmetric_eigenvalues_ql(std::move(block));
    const double divisor = static_cast<double>(nj - 1);
    for (double& v : values) v /= divisor;
    fm.spectrum = make_spectrum(std::move(values));

    const double lead = fm.spectrum.eigenvalues.empty() ? 0.0
                                                        : fm.spectrum.eigenvalues[0];
    int d_eff = 0;
    for (double v : fm.spectrum.eigenvalues)
      if (v > kDeffThreshold * lead && v > 0.0) ++d_eff;
    fm.d_eff = std::max(1, d_eff);
    fm.moments =
        shared_spectrum_moments(fm.spectrum, static_cast<int>(nj), fm.d_eff);
  }
  return out;
}

double feature_space_total_scatter(const GramMatrix& g) {
  const Matrix& k = g.values;
  const std::size_t n = k.rows();
  if (n <= 1) return 0.0;
  double diag = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diag += k(i, i);
    const auto row = k.row(i);
    for (std::size_t j = 0; j < n; ++j) total += row[j];
  }
  const double centered_trace = diag - total / static_cast<double>(n);
  return std::max(0.0, centered_trace) / static_cast<double>(n - 1);
}

std::vector<double> default_sigma_grid(const Dataset& data, int points) {
  const std::size_t n = data.size();
  std::vector<double> dists;
  dists.reserve(n * (n - 1) / 2);
  double max_dist = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = data.samples.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::sqrt(squared_distance(xi, data.samples.row(j)));
      dists.push_back(d);
      max_dist = std::max(max_dist, d);
    }
  }
  if (dists.empty() || max_dist <= 0.0) return {1.0};
  std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
  const double median = dists[dists.size() / 2];
  const double lo = std::max(0.1 * median, 1e-12);
  const double hi = 2.0 * max_dist;
  if (points <= 1) return {hi};
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return grid;
}

KernelSelection kernel_select_cnc(const Dataset& data, int m_min, int m_max,
                                  std::vector<double> sigma_grid, double alpha,
                                  double beta, const RngSpec& rng,
                                  int max_iter) {
  if (m_min < 1 || m_min > m_max ||
      static_cast<std::size_t>(m_max) > data.size())
    fail(errc::range_invalid, "need 1 <= m_min <= m_max <= N");
  if (sigma_grid.empty())
    fail(errc::grid_too_small, "sigma grid must contain at least one width");
  for (std::size_t t = 0; t < sigma_grid.size(); ++t) {
    if (sigma_grid[t] <= 0.0)
      fail(errc::non_positive_sigma, "sigma grid entries must be positive");
    if (t > 0 && sigma_grid[t] <= sigma_grid[t - 1])
      fail(errc::grid_too_small, "sigma grid must be strictly ascending");
  }

  const std::size_t range = static_cast<std::size_t>(m_max - m_min + 1);
  const std::size_t n_sigma = sigma_grid.size();
  std::vector<SelectionReport> reports(n_sigma);
  std::vector<std::vector<Partition>> partitions(n_sigma);

  parallel_for(n_sigma, [&](std::size_t t) {
    const GramMatrix g = gram(data, sigma_grid[t]);
    auto& parts = partitions[t];
    parts.resize(range);
    std::vector<ClusterSpectraSource> sources(range);
    for (std::size_t idx = 0; idx < range; ++idx) {
      const int m = m_min + static_cast<int>(idx);
      parts[idx] = kernel_kmeans(data, g, m,
                                 rng.derive("sigma" + std::to_string(t)),
                                 max_iter);
      const auto fm = feature_space_moments(g, parts[idx]);
      auto& src = sources[idx];
      src.spectra.reserve(fm.size());
      src.dims.reserve(fm.size());
      for (const auto& cluster : fm) {
        src.spectra.push_back(cluster.spectrum);
        src.dims.push_back(cluster.d_eff);
      }
    }
    const double sentinel =
        1e6 * std::max(feature_space_total_scatter(g), 1e-300);
    SelectionReport& report = reports[t];
    report.m_min = m_min;
    report.m_max = m_max;
    report.rng = rng;
    report.alpha = alpha;
    report.beta = beta;
    report.delta_max = sentinel;
    report.sigma = sigma_grid[t];
    report.z_upper_surface = Matrix(range, range, 0.0);
    for (std::size_t ki = 0; ki < range; ++ki) {
      for (std::size_t mi = 0; mi < range; ++mi) {
        const Partition& mp = parts[mi];
        const AceBounds bounds = assemble_ace_bounds(
            mp.assign, mp.sizes, mp.compactness_per_cluster, parts[ki].assign,
            sources[ki], alpha, beta, sentinel);
        report.z_upper_surface(mi, ki) = bounds.upper;
      }
    }
    select_from_surface(report, sentinel);
  });

  KernelSelection out;
  auto& sweep = out.sweep;
  sweep.grid = std::move(sigma_grid);
  sweep.min_upper_z.resize(n_sigma);
  sweep.m_hat_per_sigma.resize(n_sigma);
  sweep.score.assign(n_sigma, 0.0);
  for (std::size_t t = 0; t < n_sigma; ++t) {
    const SelectionReport& r = reports[t];
    const std::size_t k_idx = static_cast<std::size_t>(r.k_star - r.m_min);
    const std::size_t m_idx = static_cast<std::size_t>(r.m_hat_of_k[k_idx] - r.m_min);
    sweep.min_upper_z[t] = r.z_upper_surface(m_idx, k_idx);
    sweep.m_hat_per_sigma[t] = r.m_hat;
  }

  // Peak of the min-ACE curve (first index attaining the maximum), then the
  // gradient-sum score on the descending side.
  std::size_t peak = 0;
  for (std::size_t t = 1; t < n_sigma; ++t)
    if (sweep.min_upper_z[t] > sweep.min_upper_z[peak]) peak = t;
  sweep.peak_index = static_cast<int>(peak);

  std::size_t chosen = n_sigma - 1;
  const std::size_t beyond = n_sigma - 1 - peak;
  if (n_sigma == 1) {
    chosen = 0;
  } else if (beyond < 3) {
    sweep.fallback = true;
    if (beyond >= 1) {
      chosen = peak + 1;
      for (std::size_t t = peak + 1; t < n_sigma; ++t)
        if (sweep.min_upper_z[t] < sweep.min_upper_z[chosen]) chosen = t;
    } else {
      chosen = peak;  // curve never drops; keep the last width
    }
  } else {
    for (std::size_t t = peak + 1; t + 1 < n_sigma; ++t)
      sweep.score[t] = std::abs(sweep.min_upper_z[t] - sweep.min_upper_z[t - 1]) +
                       std::abs(sweep.min_upper_z[t + 1] - sweep.min_upper_z[t]);
    chosen = peak + 1;
    for (std::size_t t = peak + 1; t + 1 < n_sigma; ++t)
      if (sweep.score[t] > sweep.score[chosen]) chosen = t;
  }
  sweep.sigma_hat_index = static_cast<int>(chosen);
  sweep.sigma_hat = sweep.grid[chosen];

  out.report = std::move(reports[chosen]);
  out.report.chosen_partition = std::move(
      partitions[chosen][static_cast<std::size_t>(out.report.m_hat - m_min)]);
  return out;
}

}  // namespace kmace
