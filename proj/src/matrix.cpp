#include "nsp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "nsp/kernels.hpp"

namespace nsp {

namespace {
using kernels::axpy;
using kernels::dot;
using kernels::rot;

double sign_like(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }
}  // namespace

bool all_finite(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) return false;
  return true;
}

bool all_finite(const Vector& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::BadArg, "matmul: dimension mismatch");
  return matmul_abt(a, transpose(b));
}

Matrix matmul_abt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw Error(Errc::BadArg, "matmul_abt: dimension mismatch");
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row_ptr(i);
    for (std::size_t j = 0; j < b.rows(); ++j) c(i, j) = dot(ai, b.row_ptr(j), a.cols());
  }
  return c;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw Error(Errc::BadArg, "matvec: dimension mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row_ptr(i), x.data(), a.cols());
  return y;
}

Vector matvec_t(const Matrix& a, const Vector& x) {
  if (a.rows() != x.size()) throw Error(Errc::BadArg, "matvec_t: dimension mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) axpy(x[i], a.row_ptr(i), y.data(), a.cols());
  return y;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i]));
  return m;
}

double max_abs(const Vector& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

double norm2(const Vector& x) { return std::sqrt(kernels::sum_sq(x.data(), x.size())); }
double norm1(const Vector& x) { return kernels::sum_abs(x.data(), x.size()); }

double frobenius(const Matrix& a) { return std::sqrt(kernels::sum_sq(a.data(), a.size())); }

double asymmetry(const Matrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      worst = std::max(worst, std::fabs(a(i, j) - a(j, i)));
  return worst / std::max(1.0, max_abs(a));
}

Matrix symmetrized(const Matrix& a) {
  Matrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form with
// accumulation of the orthogonal transform (stored in `a` on exit, columns).
void tridiagonalize(Matrix& a, Vector& d, Vector& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  if (n == 0) return;

  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i;  // elements 0..l-1 of row i are eliminated
    double h = 0.0;
    if (l > 1) {
      double scale = 0.0;
      for (std::size_t k = 0; k < l; ++k) scale += std::fabs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l - 1);
      } else {
        for (std::size_t k = 0; k < l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l - 1);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l - 1) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j < l; ++j) {
          a(j, i) = a(i, j) / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
          for (std::size_t k = j + 1; k < l; ++k) g += a(k, j) * a(i, k);
          e[j] = g / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j < l; ++j) {
          f = a(i, j);
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
        }
      }
    } else {
      e[i] = a(i, l - 1);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = i;
    if (d[i] != 0.0) {
      for (std::size_t j = 0; j < l; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < l; ++k) g += a(i, k) * a(k, j);
        for (std::size_t k = 0; k < l; ++k) a(k, j) -= g * a(k, i);
      }
    }
    d[i] = a(i, i);
    a(i, i) = 1.0;
    for (std::size_t j = 0; j < l; ++j) a(j, i) = a(i, j) = 0.0;
  }
}

// Implicit-shift QL on a tridiagonal matrix; zt holds eigenvector candidates
// as rows and is rotated alongside. Throws NoConvergence past the sweep cap.
void ql_implicit(Vector& d, Vector& e, Matrix& zt) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-300 || std::fabs(e[m]) <= 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 30) throw Error(Errc::NoConvergence, "sym_eig: QL sweep cap exceeded");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + sign_like(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          double f = s * e[ii];
          const double b = c * e[ii];
          r = std::hypot(f, g);
          e[ii + 1] = r;
          if (r == 0.0) {
            d[ii + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[ii + 1] - p;
          r = (d[ii] - g) * s + 2.0 * c * b;
          p = s * r;
          d[ii + 1] = g + p;
          g = c * r - b;
          rot(zt.row_ptr(ii), zt.row_ptr(ii + 1), c, -s, n);
          if (ii == l) break;
        }
        if (r == 0.0 && m - l > 1) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

SymEig sym_eig(const Matrix& s, double sym_tol) {
  if (s.rows() != s.cols()) throw Error(Errc::NonSymmetric, "sym_eig: matrix not square");
  if (!all_finite(s)) throw Error(Errc::NonFinite, "sym_eig: non-finite entries");
  if (asymmetry(s) > sym_tol) throw Error(Errc::NonSymmetric, "sym_eig: matrix not symmetric");

  Matrix a = symmetrized(s);
  const std::size_t n = a.rows();
  Vector d, e;
  tridiagonalize(a, d, e);
  Matrix zt = transpose(a);  // rows are eigenvector candidates
  ql_implicit(d, e, zt);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return d[i] < d[j] || (d[i] == d[j] && i < j);
  });

  SymEig out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = d[order[c]];
    const double* src = zt.row_ptr(order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = src[r];
  }
  return out;
}

double spectral_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  Matrix g = a.rows() <= a.cols() ? matmul_abt(a, a) : matmul_abt(transpose(a), transpose(a));
  SymEig eig = sym_eig(symmetrized(g), 1e-8);
  const double lmax = eig.values.empty() ? 0.0 : eig.values.back();
  return std::sqrt(std::max(0.0, lmax));
}

namespace {

// One-sided Jacobi: orthogonalize the rows of `w` in place by plane
// rotations. Deterministic sweep order, relative threshold.
void jacobi_orthogonalize_rows(Matrix& w) {
  const std::size_t q = w.rows();
  const std::size_t n = w.cols();
  const double tol = 1e-15;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < q; ++p) {
      for (std::size_t r = p + 1; r < q; ++r) {
        double* xp = w.row_ptr(p);
        double* xr = w.row_ptr(r);
        const double app = dot(xp, xp, n);
        const double arr = dot(xr, xr, n);
        const double apr = dot(xp, xr, n);
        if (app == 0.0 || arr == 0.0) continue;
        if (std::fabs(apr) <= tol * std::sqrt(app * arr)) continue;
        const double rho = (app - arr) / (2.0 * apr);
        const double t = sign_like(1.0, rho) / (std::fabs(rho) + std::hypot(rho, 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rot(xp, xr, c, s, n);
        rotated = true;
      }
    }
    if (!rotated) return;
  }
  throw Error(Errc::NoConvergence, "jacobi_svd: sweep cap exceeded");
}

// Householder QR of the n x r matrix whose columns are the given rows of v;
// returns the full n x n orthogonal factor.
Matrix householder_complete(const Matrix& v_rows, std::size_t r, std::size_t n) {
  // reflectors[j] is the Householder vector acting on components j..n-1
  std::vector<Vector> reflectors;
  Matrix m(n, r);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = v_rows(j, i);

  for (std::size_t j = 0; j < r; ++j) {
    double nrm = 0.0;
    for (std::size_t i = j; i < n; ++i) nrm += m(i, j) * m(i, j);
    nrm = std::sqrt(nrm);
    Vector h(n, 0.0);
    if (nrm > 0.0) {
      const double alpha = m(j, j) >= 0.0 ? -nrm : nrm;
      for (std::size_t i = j; i < n; ++i) h[i] = m(i, j);
      h[j] -= alpha;
      double hn = 0.0;
      for (std::size_t i = j; i < n; ++i) hn += h[i] * h[i];
      if (hn > 0.0) {
        const double inv = std::sqrt(2.0 / hn);
        for (std::size_t i = j; i < n; ++i) h[i] *= inv;  // now |h| = sqrt(2)
        for (std::size_t col = j; col < r; ++col) {
          double proj = 0.0;
          for (std::size_t i = j; i < n; ++i) proj += h[i] * m(i, col);
          for (std::size_t i = j; i < n; ++i) m(i, col) -= proj * h[i];
        }
      }
    }
    reflectors.push_back(std::move(h));
  }

  Matrix qt(n, n);  // rows of qt are columns of Q
  for (std::size_t c = 0; c < n; ++c) {
    Vector col(n, 0.0);
    col[c] = 1.0;
    for (std::size_t j = r; j-- > 0;) {
      const Vector& h = reflectors[j];
      double proj = 0.0;
      for (std::size_t i = j; i < n; ++i) proj += h[i] * col[i];
      for (std::size_t i = j; i < n; ++i) col[i] -= proj * h[i];
    }
    for (std::size_t i = 0; i < n; ++i) qt(c, i) = col[i];
  }
  return transpose(qt);
}

}  // namespace

Svd jacobi_svd(const Matrix& a, double rank_tol) {
  if (!all_finite(a)) throw Error(Errc::NonFinite, "jacobi_svd: non-finite entries");
  const std::size_t q = a.rows();
  const std::size_t n = a.cols();
  if (q > n) throw Error(Errc::BadArg, "jacobi_svd: expects rows <= cols");

  Matrix w = a;  // rows get orthogonalized
  jacobi_orthogonalize_rows(w);

  Vector norms(q);
  for (std::size_t i = 0; i < q; ++i)
    norms[i] = std::sqrt(kernels::sum_sq(w.row_ptr(i), n));
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return norms[i] > norms[j] || (norms[i] == norms[j] && i < j);
  });

  Svd out;
  out.singular_values.resize(q);
  for (std::size_t i = 0; i < q; ++i) out.singular_values[i] = norms[order[i]];
  const double smax = out.singular_values.empty() ? 0.0 : out.singular_values[0];
  const double cutoff = rank_tol * smax;
  std::size_t rank = 0;
  while (rank < q && out.singular_values[rank] > cutoff && out.singular_values[rank] > 0.0) ++rank;
  out.rank = rank;

  Matrix v_rows(rank, n);  // normalized right singular vectors (row space)
  for (std::size_t i = 0; i < rank; ++i) {
    const double* src = w.row_ptr(order[i]);
    const double inv = 1.0 / out.singular_values[i];
    for (std::size_t j = 0; j < n; ++j) v_rows(i, j) = src[j] * inv;
  }
  out.right_vectors = householder_complete(v_rows, rank, n);
  return out;
}

}  // namespace nsp
