#include "kmace/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "kmace/error.hpp"

namespace kmace {

namespace {

constexpr double kJacobiTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kSpectrumClampTol = 1e-9;

double off_diagonal_norm(const Matrix& a) {
  double acc = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) acc += a(i, j) * a(i, j);
  return std::sqrt(acc);
}

void require_symmetric(const Matrix& a) {
  if (a.rows() != a.cols()) fail(errc::not_symmetric, "matrix is not square");
  const double scale = std::max(frobenius_norm(a), 1e-300);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-9 * std::max(1.0, scale))
        fail(errc::not_symmetric, "matrix is not symmetric to 1e-9 relative");
}

void jacobi_rotate(Matrix& a, Matrix* vectors, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);
  const std::size_t n = a.rows();

  const double app = a(p, p);
  const double aqq = a(q, q);
  a(p, p) = app - t * apq;
  a(q, q) = aqq + t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = akp - s * (akq + tau * akp);
    a(p, k) = a(k, p);
    a(k, q) = akq + s * (akp - tau * akq);
    a(q, k) = a(k, q);
  }
  if (vectors) {
    for (std::size_t k = 0; k < n; ++k) {
      const double vkp = (*vectors)(k, p);
      const double vkq = (*vectors)(k, q);
      (*vectors)(k, p) = vkp - s * (vkq + tau * vkp);
      (*vectors)(k, q) = vkq + s * (vkp - tau * vkq);
    }
  }
}

void jacobi(Matrix& a, Matrix* vectors) {
  const std::size_t n = a.rows();
  const double target = kJacobiTol * std::max(frobenius_norm(a), 1e-300);
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < target) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, vectors, p, q);
  }
}

double pythag(double a, double b) {
  const double absa = std::abs(a);
  const double absb = std::abs(b);
  if (absa > absb) {
    const double r = absb / absa;
    return absa * std::sqrt(1.0 + r * r);
  }
  if (absb == 0.0) return 0.0;
  const double r = absa / absb;
  return absb * std::sqrt(1.0 + r * r);
}

// Householder reduction of a symmetric matrix to tridiagonal form,
// eigenvalues-only variant. On exit d holds the diagonal and e the
// subdiagonal (e[0] = 0). a is destroyed.
void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
          e[j] = g / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = a(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (std::size_t k = 0; k <= j; ++k)
            a(j, k) -= f * e[k] + g * a(i, k);
        }
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
}

// Implicit-shift QL iteration on a tridiagonal matrix; d in/out diagonal
// (eigenvalues on exit), e subdiagonal (destroyed).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) + dd == dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          fail(errc::internal, "QL iteration failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = pythag(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = pythag(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

double frobenius_norm(const Matrix& a) {
  double acc = 0.0;
  for (double v : a.storage()) acc += v * v;
  return std::sqrt(acc);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(errc::internal, "matmul shape mismatch");
  Matrix out(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix covariance(const Matrix& cluster_samples) {
  const std::size_t n = cluster_samples.rows();
  const std::size_t d = cluster_samples.cols();
  if (n == 0) fail(errc::empty_data, "covariance of an empty cluster");
  Matrix cov(d, d, 0.0);
  if (n == 1) return cov;

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = cluster_samples.row(i);
    for (std::size_t f = 0; f < d; ++f) mean[f] += row[f];
  }
  for (double& v : mean) v /= static_cast<double>(n);

  std::vector<double> centered(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = cluster_samples.row(i);
    for (std::size_t f = 0; f < d; ++f) centered[f] = row[f] - mean[f];
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p; q < d; ++q) cov(p, q) += centered[p] * centered[q];
  }
  const double divisor = static_cast<double>(n - 1);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = p; q < d; ++q) {
      cov(p, q) /= divisor;
      cov(q, p) = cov(p, q);
    }
  return cov;
}

SymSpectrum make_spectrum(std::vector<double> eigenvalues) {
  double max_abs = 0.0;
  for (double v : eigenvalues) max_abs = std::max(max_abs, std::abs(v));
  [[maybe_unused]] const double tol = kSpectrumClampTol * max_abs;
  for (double& v : eigenvalues) {
    if (v < 0.0) {
#ifndef NDEBUG
      if (v < -tol)
        fail(errc::not_positive_semidefinite,
             "eigenvalue " + std::to_string(v) + " below round-off tolerance");
#endif
      v = 0.0;
    }
  }
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
  SymSpectrum out;
  out.dim = static_cast<int>(eigenvalues.size());
  out.eigenvalues = std::move(eigenvalues);
  return out;
}

SymSpectrum sym_eigenvalues(const Matrix& a) {
  require_symmetric(a);
  Matrix work = a;
  // Symmetrize exactly so rotations preserve symmetry bit for bit.
  for (std::size_t i = 0; i < work.rows(); ++i)
    for (std::size_t j = i + 1; j < work.cols(); ++j) {
      const double v = 0.5 * (work(i, j) + work(j, i));
      work(i, j) = v;
      work(j, i) = v;
    }
  jacobi(work, nullptr);
  std::vector<double> values(work.rows());
  for (std::size_t i = 0; i < work.rows(); ++i) values[i] = work(i, i);
  return make_spectrum(std::move(values));
}

void sym_eigen(const Matrix& a, std::vector<double>& values, Matrix& vectors) {
  require_symmetric(a);
  Matrix work = a;
  for (std::size_t i = 0; i < work.rows(); ++i)
    for (std::size_t j = i + 1; j < work.cols(); ++j) {
      const double v = 0.5 * (work(i, j) + work(j, i));
      work(i, j) = v;
      work(j, i) = v;
    }
  vectors = Matrix::identity(work.rows());
  jacobi(work, &vectors);
  values.resize(work.rows());
  for (std::size_t i = 0; i < work.rows(); ++i) values[i] = work(i, i);
}

std::vector<double> symmetric_eigenvalues_ql(Matrix a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) fail(errc::not_symmetric, "matrix is not square");
  if (n == 0) return {};
  if (n == 1) return {a(0, 0)};
  std::vector<double> d;
  std::vector<double> e;
  tridiagonalize(a, d, e);
  tridiagonal_ql(d, e);
  return d;
}

std::pair<Matrix, Matrix> centering_matrices(int n) {
  if (n < 1) fail(errc::internal, "centering matrices need n >= 1");
  const std::size_t un = static_cast<std::size_t>(n);
  const double inv = 1.0 / static_cast<double>(n);
  Matrix b(un, un, inv);
  Matrix a(un, un, -inv);
  for (std::size_t i = 0; i < un; ++i) a(i, i) = 1.0 - inv;
  return {std::move(a), std::move(b)};
}

Matrix pairwise_sq_dists(const Matrix& x) {
  if (!x.all_finite()) fail(errc::non_finite_value, "pairwise distances need finite input");
  const std::size_t n = x.rows();
  Matrix out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = x.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = squared_distance(xi, x.row(j));
      out(i, j) = d2;
      out(j, i) = d2;
    }
  }
  return out;
}

Matrix cholesky_psd(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) fail(errc::covariance_not_psd, "matrix is not square");
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  const double tol = 1e-12 * std::max(max_diag, 1.0);

  Matrix l(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (diag < -tol)
      fail(errc::covariance_not_psd, "negative pivot in Cholesky factorization");
    const double ljj = diag > tol ? std::sqrt(diag) : 0.0;
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = ljj > 0.0 ? v / ljj : 0.0;
    }
  }
  return l;
}

}  // namespace kmace
