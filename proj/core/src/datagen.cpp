#include "kmace/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kmace/error.hpp"
#include "kmace/linalg.hpp"

namespace kmace {

namespace {

Matrix rotated_ellipse_cov(double std_major, double std_minor, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double a = std_major * std_major;
  const double b = std_minor * std_minor;
  Matrix cov(2, 2);
  cov(0, 0) = a * c * c + b * s * s;
  cov(1, 1) = a * s * s + b * c * c;
  cov(0, 1) = (a - b) * c * s;
  cov(1, 0) = cov(0, 1);
  return cov;
}

Matrix grid_centers_2d(const std::vector<double>& coords) {
  Matrix centers(coords.size() * coords.size(), 2);
  std::size_t r = 0;
  for (double y : coords)
    for (double x : coords) {
      centers(r, 0) = x;
      centers(r, 1) = y;
      ++r;
    }
  return centers;
}

MixtureSpec make_s1(const RngSpec& rng) {
  MixtureSpec spec;
  spec.name = "s1";
  spec.rng = rng;
  spec.centers = grid_centers_2d({0.0, 14.0, 28.0});
  spec.covariances.assign(9, Matrix::identity(2));
  spec.counts.assign(9, 100);
  return spec;
}

MixtureSpec make_s2(const RngSpec& rng) {
  MixtureSpec spec;
  spec.name = "s2";
  spec.rng = rng;
  spec.centers = Matrix{{0.0, 0.0}, {3.2, 0.0}, {16.0, 0.0}, {0.0, 16.0}, {16.0, 16.0}};
  const double stds[5] = {1.0, 0.8, 0.7, 1.2, 0.9};
  for (double s : stds) {
    Matrix cov = Matrix::identity(2);
    cov(0, 0) = s * s;
    cov(1, 1) = s * s;
    spec.covariances.push_back(cov);
  }
  spec.counts.assign(5, 100);
  return spec;
}

MixtureSpec make_s3(const RngSpec& rng) {
  MixtureSpec spec;
  spec.name = "s3";
  spec.rng = rng;
  spec.centers = grid_centers_2d({0.0, 7.0, 14.0});
  for (int j = 0; j < 9; ++j)
    spec.covariances.push_back(
        rotated_ellipse_cov(1.2, 0.5, j * 3.14159265358979323846 / 9.0));
  spec.counts.assign(9, 100);
  return spec;
}

MixtureSpec make_s4(const RngSpec& rng) {
  MixtureSpec spec;
  spec.name = "s4";
  spec.rng = rng;
  spec.centers = grid_centers_2d({0.0, 4.4, 8.8});
  for (int j = 0; j < 9; ++j)
    spec.covariances.push_back(rotated_ellipse_cov(
        1.25, 0.55, j * 3.14159265358979323846 / 9.0 + 0.17453292519943295));
  spec.counts.assign(9, 56);
  for (int j = 5; j < 9; ++j) spec.counts[static_cast<std::size_t>(j)] = 55;
  return spec;
}

// u1..u6: 9 random centers in a d=10 hypercube, scatter deviation < 0.3 per
// dimension. Odd variants use side 10, even variants shrink to 8.
MixtureSpec make_u(int variant, const RngSpec& rng) {
  constexpr int kDim = 10;
  constexpr int kClusters = 9;
  MixtureSpec spec;
  spec.name = "u" + std::to_string(variant);
  spec.rng = rng;
  const double side = (variant % 2 == 1) ? 10.0 : 8.0;

  Rng centers_rng(rng.derive("centers"));
  spec.centers = Matrix(kClusters, kDim);
  for (int j = 0; j < kClusters; ++j)
    for (int f = 0; f < kDim; ++f)
      spec.centers(static_cast<std::size_t>(j), static_cast<std::size_t>(f)) =
          side * centers_rng.uniform();

  Rng cov_rng(rng.derive("covariances"));
  for (int j = 0; j < kClusters; ++j) {
    Matrix cov(kDim, kDim, 0.0);
    if (variant <= 2) {
      for (int f = 0; f < kDim; ++f)
        cov(static_cast<std::size_t>(f), static_cast<std::size_t>(f)) = 0.25 * 0.25;
    } else if (variant <= 4) {
      const double s = 0.12 + 0.18 * cov_rng.uniform();
      for (int f = 0; f < kDim; ++f)
        cov(static_cast<std::size_t>(f), static_cast<std::size_t>(f)) = s * s;
    } else {
      for (int f = 0; f < kDim; ++f) {
        const double s = 0.12 + 0.18 * cov_rng.uniform();
        cov(static_cast<std::size_t>(f), static_cast<std::size_t>(f)) = s * s;
      }
      // Random Givens rotations correlate the axes without changing the
      // eigenvalues, so per-dimension deviations stay below 0.3.
      for (int r = 0; r < 24; ++r) {
        const int p = static_cast<int>(cov_rng.uniform_index(kDim));
        int q = static_cast<int>(cov_rng.uniform_index(kDim - 1));
        if (q >= p) ++q;
        const double theta = 2.0 * 3.14159265358979323846 * cov_rng.uniform();
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (int f = 0; f < kDim; ++f) {
          const double vp = cov(static_cast<std::size_t>(f), static_cast<std::size_t>(p));
          const double vq = cov(static_cast<std::size_t>(f), static_cast<std::size_t>(q));
          cov(static_cast<std::size_t>(f), static_cast<std::size_t>(p)) = c * vp - s * vq;
          cov(static_cast<std::size_t>(f), static_cast<std::size_t>(q)) = s * vp + c * vq;
        }
        for (int f = 0; f < kDim; ++f) {
          const double vp = cov(static_cast<std::size_t>(p), static_cast<std::size_t>(f));
          const double vq = cov(static_cast<std::size_t>(q), static_cast<std::size_t>(f));
          cov(static_cast<std::size_t>(p), static_cast<std::size_t>(f)) = c * vp - s * vq;
          cov(static_cast<std::size_t>(q), static_cast<std::size_t>(f)) = s * vp + c * vq;
        }
      }
    }
    spec.covariances.push_back(std::move(cov));
  }
  spec.counts.assign(kClusters, 100);
  return spec;
}

}  // namespace

double min_overlap_ratio(const MixtureSpec& spec) {
  const int m = spec.cluster_count();
  const std::size_t d = spec.centers.cols();
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> u(d);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double dist = 0.0;
      for (std::size_t f = 0; f < d; ++f) {
        u[f] = spec.centers(static_cast<std::size_t>(j), f) -
               spec.centers(static_cast<std::size_t>(i), f);
        dist += u[f] * u[f];
      }
      dist = std::sqrt(dist);
      if (dist == 0.0) return 0.0;
      for (double& v : u) v /= dist;
      double spread = 0.0;
      for (const auto* cov : {&spec.covariances[static_cast<std::size_t>(i)],
                              &spec.covariances[static_cast<std::size_t>(j)]}) {
        double quad = 0.0;
        for (std::size_t p = 0; p < d; ++p)
          for (std::size_t q = 0; q < d; ++q)
            quad += u[p] * (*cov)(p, q) * u[q];
        spread += std::sqrt(std::max(0.0, quad));
      }
      if (spread > 0.0) worst = std::min(worst, dist / spread);
    }
  }
  return worst;
}

Dataset sample_mixture(const MixtureSpec& spec) {
  const int m = spec.cluster_count();
  if (m == 0) fail(errc::config_invalid, "mixture needs at least one cluster");
  const std::size_t d = spec.centers.cols();
  if (spec.covariances.size() != static_cast<std::size_t>(m) ||
      spec.counts.size() != static_cast<std::size_t>(m))
    fail(errc::config_invalid, "mixture arrays disagree on cluster count");
  for (int c : spec.counts)
    if (c < 1) fail(errc::config_invalid, "every cluster needs at least one sample");

  std::vector<Matrix> factors;
  factors.reserve(static_cast<std::size_t>(m));
  for (const Matrix& cov : spec.covariances) {
    if (cov.rows() != d || cov.cols() != d)
      fail(errc::config_invalid, "covariance shape does not match centers");
    factors.push_back(cholesky_psd(cov));
  }

  const int total = spec.total_count();
  Matrix samples(static_cast<std::size_t>(total), d);
  std::vector<int> labels(static_cast<std::size_t>(total));
  Rng rng(spec.rng.derive("samples"));
  std::vector<double> z(d);
  std::size_t row = 0;
  for (int j = 0; j < m; ++j) {
    const Matrix& l = factors[static_cast<std::size_t>(j)];
    for (int i = 0; i < spec.counts[static_cast<std::size_t>(j)]; ++i) {
      for (std::size_t f = 0; f < d; ++f) z[f] = rng.normal();
      auto out = samples.row(row);
      for (std::size_t f = 0; f < d; ++f) {
        double v = spec.centers(static_cast<std::size_t>(j), f);
        for (std::size_t g = 0; g <= f; ++g) v += l(f, g) * z[g];
        out[f] = v;
      }
      labels[row] = j;
      ++row;
    }
  }
  return validate_dataset(std::move(samples), std::move(labels), spec.name);
}

MixtureSpec scenario(const std::string& name, const RngSpec& rng) {
  MixtureSpec spec;
  if (name == "s1") {
    spec = make_s1(rng);
    // Operationalized "no overlaps": centers at least 6 scatter deviations apart.
    double max_std = 0.0;
    for (const Matrix& cov : spec.covariances)
      for (std::size_t f = 0; f < cov.rows(); ++f)
        max_std = std::max(max_std, std::sqrt(cov(f, f)));
    for (std::size_t i = 0; i < spec.centers.rows(); ++i)
      for (std::size_t j = i + 1; j < spec.centers.rows(); ++j) {
        const double dist = std::sqrt(
            squared_distance(spec.centers.row(i), spec.centers.row(j)));
        if (dist <= 6.0 * max_std)
          fail(errc::internal, "s1 fixture violates its separation guarantee");
      }
  } else if (name == "s2") {
    spec = make_s2(rng);
  } else if (name == "s3") {
    spec = make_s3(rng);
  } else if (name == "s4") {
    spec = make_s4(rng);
  } else if (name == "u_family") {
    spec = make_u(1, rng);
  } else if (name.size() == 2 && name[0] == 'u' && name[1] >= '1' && name[1] <= '6') {
    spec = make_u(name[1] - '0', rng);
  } else {
    fail(errc::unknown_scenario, "unknown scenario '" + name + "'");
  }
  return spec;
}

}  // namespace kmace
