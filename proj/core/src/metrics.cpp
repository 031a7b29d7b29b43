#include "kmace/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kmace/error.hpp"

namespace kmace {

namespace {

struct Contingency {
  std::vector<std::vector<long>> table;  // rows: truth, cols: predicted
  std::vector<long> row_sums;
  std::vector<long> col_sums;
  long n = 0;
};

Contingency build_contingency(std::span<const int> truth,
                              std::span<const int> predicted) {
  if (truth.size() != predicted.size())
    fail(errc::length_mismatch, "label arrays differ in length");
  if (truth.empty()) fail(errc::empty_data, "labels are empty");
  int rows = 0;
  int cols = 0;
  for (int t : truth) rows = std::max(rows, t + 1);
  for (int p : predicted) cols = std::max(cols, p + 1);
  Contingency c;
  c.n = static_cast<long>(truth.size());
  c.table.assign(static_cast<std::size_t>(rows),
                 std::vector<long>(static_cast<std::size_t>(cols), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || predicted[i] < 0)
      fail(errc::config_invalid, "labels must be non-negative");
    ++c.table[static_cast<std::size_t>(truth[i])]
             [static_cast<std::size_t>(predicted[i])];
  }
  c.row_sums.assign(c.table.size(), 0);
  c.col_sums.assign(static_cast<std::size_t>(cols), 0);
  for (std::size_t r = 0; r < c.table.size(); ++r)
    for (std::size_t q = 0; q < c.table[r].size(); ++q) {
      c.row_sums[r] += c.table[r][q];
      c.col_sums[q] += c.table[r][q];
    }
  return c;
}

double choose2(long v) { return 0.5 * static_cast<double>(v) * (v - 1); }

}  // namespace

double adjusted_rand_index(std::span<const int> truth,
                           std::span<const int> predicted) {
  const Contingency c = build_contingency(truth, predicted);
  double index = 0.0;
  for (const auto& row : c.table)
    for (long v : row) index += choose2(v);
  double sum_rows = 0.0;
  double sum_cols = 0.0;
  for (long v : c.row_sums) sum_rows += choose2(v);
  for (long v : c.col_sums) sum_cols += choose2(v);
  const double pairs = choose2(c.n);
  const double expected = pairs > 0.0 ? sum_rows * sum_cols / pairs : 0.0;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  const double denom = max_index - expected;
  if (denom == 0.0) return 1.0;  // both partitions trivial and identical
  return (index - expected) / denom;
}

double normalized_variation_information(std::span<const int> truth,
                                        std::span<const int> predicted) {
  const Contingency c = build_contingency(truth, predicted);
  const double n = static_cast<double>(c.n);
  auto entropy_term = [n](long v) {
    if (v <= 0) return 0.0;
    const double p = static_cast<double>(v) / n;
    return -p * std::log(p);
  };
  double h_truth = 0.0;
  double h_pred = 0.0;
  double h_joint = 0.0;
  for (long v : c.row_sums) h_truth += entropy_term(v);
  for (long v : c.col_sums) h_pred += entropy_term(v);
  for (const auto& row : c.table)
    for (long v : row) h_joint += entropy_term(v);
  const double vi = 2.0 * h_joint - h_truth - h_pred;
  if (vi <= 0.0 || h_joint <= 0.0) return 0.0;
  return vi / h_joint;
}

CncAccuracy cnc_accuracy(std::span<const int> m_hats, int true_m) {
  if (m_hats.empty()) fail(errc::empty_runs, "no runs to summarize");
  const double n = static_cast<double>(m_hats.size());
  CncAccuracy out;
  long hits = 0;
  for (int v : m_hats) {
    out.mean += v;
    if (v == true_m) ++hits;
  }
  out.mean /= n;
  if (m_hats.size() > 1) {
    double acc = 0.0;
    for (int v : m_hats) {
      const double diff = v - out.mean;
      acc += diff * diff;
    }
    out.stddev = std::sqrt(acc / (n - 1.0));
  }
  out.accuracy_pct = 100.0 * static_cast<double>(hits) / n;
  return out;
}

std::vector<ValidityIndices> baseline_indices(const Dataset& data,
                                              std::span<const Partition> partitions) {
  for (const auto& p : partitions) {
    if (p.m < 2)
      fail(errc::degenerate_cluster_number,
           "baseline indices require m >= 2 clusters");
    if (p.assign.size() != data.size())
      fail(errc::partition_dataset_mismatch, "partition does not match dataset");
  }
  const std::size_t n = data.size();
  const std::size_t d = data.dim();

  std::vector<double> grand_mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.samples.row(i);
    for (std::size_t f = 0; f < d; ++f) grand_mean[f] += x[f];
  }
  for (double& v : grand_mean) v /= static_cast<double>(n);

  std::vector<ValidityIndices> out;
  out.reserve(partitions.size());
  for (const auto& p : partitions) {
    const int m = p.m;
    ValidityIndices row;

    // Calinski-Harabasz: between/within dispersion ratio.
    double between = 0.0;
    double within = 0.0;
    for (int j = 0; j < m; ++j) {
      between += p.sizes[static_cast<std::size_t>(j)] *
                 squared_distance(p.centers.row(static_cast<std::size_t>(j)),
                                  grand_mean);
    }
    for (std::size_t i = 0; i < n; ++i)
      within += squared_distance(
          data.samples.row(i),
          p.centers.row(static_cast<std::size_t>(p.assign[i])));
    if (within > 0.0 && n > static_cast<std::size_t>(m)) {
      row.calinski_harabasz = (between / (m - 1)) /
                              (within / (static_cast<double>(n) - m));
    } else {
      row.calinski_harabasz = std::numeric_limits<double>::infinity();
    }

    // Davies-Bouldin with mean Euclidean member-to-center scatter.
    std::vector<double> scatter(static_cast<std::size_t>(m), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      scatter[static_cast<std::size_t>(p.assign[i])] += std::sqrt(squared_distance(
          data.samples.row(i), p.centers.row(static_cast<std::size_t>(p.assign[i]))));
    for (int j = 0; j < m; ++j)
      scatter[static_cast<std::size_t>(j)] /= p.sizes[static_cast<std::size_t>(j)];
    double db = 0.0;
    for (int j = 0; j < m; ++j) {
      double worst = 0.0;
      for (int l = 0; l < m; ++l) {
        if (l == j) continue;
        const double dist = std::sqrt(squared_distance(
            p.centers.row(static_cast<std::size_t>(j)),
            p.centers.row(static_cast<std::size_t>(l))));
        const double ratio =
            dist > 0.0 ? (scatter[static_cast<std::size_t>(j)] +
                          scatter[static_cast<std::size_t>(l)]) /
                             dist
                       : std::numeric_limits<double>::infinity();
        worst = std::max(worst, ratio);
      }
      db += worst;
    }
    row.davies_bouldin = db / m;

    // Mean silhouette; singleton clusters contribute 0.
    double sil = 0.0;
    std::vector<double> mean_dist(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(mean_dist.begin(), mean_dist.end(), 0.0);
      const auto xi = data.samples.row(i);
      for (std::size_t l = 0; l < n; ++l) {
        if (l == i) continue;
        mean_dist[static_cast<std::size_t>(p.assign[l])] +=
            std::sqrt(squared_distance(xi, data.samples.row(l)));
      }
      const int own = p.assign[i];
      const int own_size = p.sizes[static_cast<std::size_t>(own)];
      if (own_size <= 1) continue;  // silhouette of a singleton is 0
      const double a = mean_dist[static_cast<std::size_t>(own)] / (own_size - 1);
      double b = std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        if (j == own) continue;
        b = std::min(b, mean_dist[static_cast<std::size_t>(j)] /
                            p.sizes[static_cast<std::size_t>(j)]);
      }
      const double denom = std::max(a, b);
      if (denom > 0.0) sil += (b - a) / denom;
    }
    row.silhouette = sil / static_cast<double>(n);
    out.push_back(row);
  }
  return out;
}

}  // namespace kmace
