#include "nsp/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsp/kernels.hpp"

namespace nsp {

CodingMatrix CodingMatrix::from(Matrix m, double rank_tol) {
  if (m.rows() == 0 || m.cols() == 0) throw Error(Errc::BadArg, "coding matrix is empty");
  if (m.rows() > m.cols())
    throw Error(Errc::BadArg, "coding matrix must have q <= n");
  if (!all_finite(m)) throw Error(Errc::NonFinite, "coding matrix has NaN/Inf entries");
  if (rank_tol < 0.0) throw Error(Errc::BadArg, "rank_tol must be nonnegative");
  if (rank_tol == 0.0)
    rank_tol = std::numeric_limits<double>::epsilon() *
               static_cast<double>(std::max(m.rows(), m.cols()));
  return CodingMatrix{std::move(m), rank_tol};
}

double NullspaceBasis::sum_row_norms() const {
  return kernels::sum(row_norms.data(), row_norms.size());
}

namespace {

NullspaceBasis finish_basis(Matrix f, bool orthonormal) {
  NullspaceBasis b;
  b.gram = matmul_abt(f, f);
  b.row_norms.resize(f.rows());
  for (std::size_t i = 0; i < f.rows(); ++i)
    b.row_norms[i] = std::sqrt(kernels::sum_sq(f.row_ptr(i), f.cols()));
  b.spec_norm = spectral_norm(f);
  b.f = std::move(f);
  b.orthonormal = orthonormal;
  return b;
}

}  // namespace

NullspaceBasis nullspace_basis(const CodingMatrix& cm) {
  const std::size_t n = cm.n();
  Svd svd = jacobi_svd(cm.a, cm.rank_tol);
  const std::size_t m = n - svd.rank;
  if (m == 0) throw Error(Errc::FullRank, "matrix has trivial nullspace");

  Matrix f(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) f(i, j) = svd.right_vectors(i, svd.rank + j);

  // Orthonormality and annihilation checks; both hold to machine precision
  // by construction, the tolerances below are the advertised contract.
  Matrix ftf = matmul(transpose(f), f);
  for (std::size_t i = 0; i < m; ++i) ftf(i, i) -= 1.0;
  if (max_abs(ftf) > 1e-10)
    throw Error(Errc::NoConvergence, "nullspace basis failed orthonormality check");
  Matrix af = matmul(cm.a, f);
  const double anorm = spectral_norm(cm.a);
  if (max_abs(af) > 1e-8 * std::max(anorm, 1e-300))
    throw Error(Errc::NoConvergence, "nullspace basis failed annihilation check");

  return finish_basis(std::move(f), true);
}

NullspaceBasis nullspace_from_matrix(const Matrix& f) {
  if (f.rows() == 0 || f.cols() == 0) throw Error(Errc::BadArg, "basis matrix is empty");
  if (!all_finite(f)) throw Error(Errc::NonFinite, "basis matrix has NaN/Inf entries");
  Matrix ftf = matmul(transpose(f), f);
  for (std::size_t i = 0; i < ftf.rows(); ++i) ftf(i, i) -= 1.0;
  return finish_basis(f, max_abs(ftf) <= 1e-10);
}

double k_norm(const Vector& x, std::size_t k) {
  if (k < 1 || k > x.size()) throw Error(Errc::BadK, "k_norm: k outside [1, n]");
  if (!all_finite(x)) throw Error(Errc::NonFinite, "k_norm: non-finite entries");
  Vector mags(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mags[i] = std::fabs(x[i]);
  std::nth_element(mags.begin(), mags.begin() + (k - 1), mags.end(), std::greater<double>());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += mags[i];
  return s;
}

double num_card(const Vector& x) {
  const double l1 = norm1(x);
  const double l2 = norm2(x);
  if (l2 == 0.0) throw Error(Errc::ZeroInput, "num_card: zero vector");
  return (l1 / l2) * (l1 / l2);
}

double num_rank(const Matrix& x) {
  const double fro = frobenius(x);
  if (fro == 0.0) throw Error(Errc::ZeroInput, "num_rank: zero matrix");
  const double spec = spectral_norm(x);
  return (fro / spec) * (fro / spec);
}

}  // namespace nsp
