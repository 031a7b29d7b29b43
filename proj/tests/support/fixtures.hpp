#pragma once

#include <cmath>
#include <vector>

#include "kmace/dataset.hpp"
#include "kmace/rng.hpp"

namespace kmace::testing {

inline Dataset random_dataset(std::size_t n, std::size_t d, const RngSpec& spec,
                              double spread = 1.0) {
  Rng rng(spec);
  Matrix samples(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < d; ++f) samples(i, f) = spread * rng.normal();
  return validate_dataset(std::move(samples), std::nullopt, "random");
}

/// Two separated Gaussian blobs with ground truth, n points per blob.
inline Dataset two_blobs(std::size_t n_per, double separation, double sigma,
                         const RngSpec& spec) {
  Rng rng(spec);
  Matrix samples(2 * n_per, 2);
  std::vector<int> labels(2 * n_per);
  for (std::size_t i = 0; i < 2 * n_per; ++i) {
    const int cluster = i < n_per ? 0 : 1;
    samples(i, 0) = (cluster == 0 ? 0.0 : separation) + sigma * rng.normal();
    samples(i, 1) = sigma * rng.normal();
    labels[i] = cluster;
  }
  return validate_dataset(std::move(samples), std::move(labels), "two_blobs");
}

/// Two concentric rings: the classic dataset no single input-space partition
/// of K-means separates, while a suitable Gaussian kernel width does.
inline Dataset concentric_rings(std::size_t n_per, double r_inner, double r_outer,
                                double radial_noise, const RngSpec& spec) {
  Rng rng(spec);
  Matrix samples(2 * n_per, 2);
  std::vector<int> labels(2 * n_per);
  for (std::size_t i = 0; i < 2 * n_per; ++i) {
    const int ring = i < n_per ? 0 : 1;
    const double radius =
        (ring == 0 ? r_inner : r_outer) + radial_noise * rng.normal();
    const double theta = 2.0 * 3.14159265358979323846 * rng.uniform();
    samples(i, 0) = radius * std::cos(theta);
    samples(i, 1) = radius * std::sin(theta);
    labels[i] = ring;
  }
  return validate_dataset(std::move(samples), std::move(labels), "rings");
}

}  // namespace kmace::testing
