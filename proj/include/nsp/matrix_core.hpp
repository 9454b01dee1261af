#pragma once

#include <cstddef>

#include "nsp/matrix.hpp"

namespace nsp {

/// A q x n coding/measurement matrix, q <= n.
struct CodingMatrix {
  Matrix a;
  double rank_tol;  // relative singular-value cutoff

  static CodingMatrix from(Matrix m, double rank_tol = 0.0);

  std::size_t q() const { return a.rows(); }
  std::size_t n() const { return a.cols(); }
};

/// Basis of the nullspace of a coding matrix, with cached statistics.
/// Factories: nullspace_basis() produces an orthonormal basis and enforces
/// the orthonormality invariants; nullspace_from_matrix() accepts any F
/// (bounds computed downstream are valid for the matrix as given).
struct NullspaceBasis {
  Matrix f;           // n x m
  Matrix gram;        // F F^T, n x n
  Vector row_norms;   // |F_i|_2
  double spec_norm;   // |F|_2
  bool orthonormal;   // true when produced by nullspace_basis()

  std::size_t n() const { return f.rows(); }
  std::size_t m() const { return f.cols(); }
  double sum_row_norms() const;
};

NullspaceBasis nullspace_basis(const CodingMatrix& a);
NullspaceBasis nullspace_from_matrix(const Matrix& f);

/// Sum of the k largest magnitudes.
double k_norm(const Vector& x, std::size_t k);

double num_card(const Vector& x);
double num_rank(const Matrix& x);

}  // namespace nsp
