#pragma once

#include <utility>
#include <vector>

#include "kmace/matrix.hpp"

namespace kmace {

/// Eigenvalue spectrum of a symmetric PSD matrix, descending order. Tiny
/// negative values from round-off are clamped to zero on construction.
struct SymSpectrum {
  std::vector<double> eigenvalues;  // descending
  int dim = 0;

  double trace() const noexcept {
    double t = 0.0;
    for (double v : eigenvalues) t += v;
    return t;
  }
  double trace_sq() const noexcept {
    double t = 0.0;
    for (double v : eigenvalues) t += v * v;
    return t;
  }
};

/// Unbiased sample covariance (divisor n-1) of cluster rows about their
/// mean; a single row yields the zero matrix.
Matrix covariance(const Matrix& cluster_samples);

/// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations.
/// Convergence: off-diagonal Frobenius norm < 1e-12 * ||A||_F, max 100
/// sweeps. Throws errc::not_symmetric when A is not symmetric to 1e-9
/// relative.
SymSpectrum sym_eigenvalues(const Matrix& a);

/// Jacobi with eigenvectors (columns of `vectors` pair with `values`,
/// unsorted). Used by reconstruction-style checks.
void sym_eigen(const Matrix& a, std::vector<double>& values, Matrix& vectors);

/// Eigenvalues of a symmetric matrix via Householder tridiagonalization and
/// implicit-shift QL, unsorted. O(n^3) with a small constant; used for the
/// kernel module's centered-Gram blocks where Jacobi is too slow.
std::vector<double> symmetric_eigenvalues_ql(Matrix a);

/// Clamp round-off negatives and sort descending into a SymSpectrum.
SymSpectrum make_spectrum(std::vector<double> eigenvalues);

/// Centering matrix A = I - B and averaging matrix B (every entry 1/n).
/// A*B = 0, A idempotent, rows of A sum to zero.
std::pair<Matrix, Matrix> centering_matrices(int n);

/// Symmetric matrix of squared Euclidean distances between rows of X.
Matrix pairwise_sq_dists(const Matrix& x);

/// Lower-triangular factor L with L*L^T = a, accepting PSD inputs (zero
/// pivot columns). Throws errc::covariance_not_psd on indefinite input.
Matrix cholesky_psd(const Matrix& a);

double frobenius_norm(const Matrix& a);
Matrix matmul(const Matrix& a, const Matrix& b);

}  // namespace kmace
