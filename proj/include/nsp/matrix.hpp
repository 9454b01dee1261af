#pragma once

#include <cstddef>
#include <vector>

#include "nsp/errors.hpp"

namespace nsp {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles with value semantics.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
  const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

bool all_finite(const Matrix& a);
bool all_finite(const Vector& x);

Matrix transpose(const Matrix& a);

// c = a * b
Matrix matmul(const Matrix& a, const Matrix& b);
// c = a * b^T  (rows of both operands are contiguous, preferred form)
Matrix matmul_abt(const Matrix& a, const Matrix& b);

// y = a * x
Vector matvec(const Matrix& a, const Vector& x);
// y = a^T * x
Vector matvec_t(const Matrix& a, const Vector& x);

double max_abs(const Matrix& a);
double max_abs(const Vector& x);
double norm2(const Vector& x);
double norm1(const Vector& x);
double frobenius(const Matrix& a);

// Largest relative asymmetry |a_ij - a_ji| / max(1, max|a|).
double asymmetry(const Matrix& a);

Matrix symmetrized(const Matrix& a);

struct SymEig {
  Vector values;   // ascending
  Matrix vectors;  // columns are eigenvectors, same order
};

/// Eigendecomposition of a symmetric matrix: Householder tridiagonalization
/// followed by implicit-shift QL sweeps. Deterministic; throws NonSymmetric
/// if the input exceeds the relative symmetry tolerance and NoConvergence if
/// the sweep cap is hit.
SymEig sym_eig(const Matrix& s, double sym_tol = 1e-10);

/// Spectral norm via sym_eig of the smaller Gram matrix.
double spectral_norm(const Matrix& a);

struct Svd {
  Vector singular_values;  // descending, length min(q,n) for a q x n input
  Matrix right_vectors;    // n x n orthogonal, columns ordered to match; the
                           // trailing columns span the nullspace complement
  std::size_t rank = 0;    // relative to the cutoff passed in
};

/// Singular values and a complete orthonormal set of right singular vectors
/// of a q x n matrix (q <= n), via one-sided Jacobi on the rows followed by
/// Householder completion of the row-space basis. rank counts singular
/// values above rank_tol * sigma_max.
Svd jacobi_svd(const Matrix& a, double rank_tol);

}  // namespace nsp
