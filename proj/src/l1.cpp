#include "nsp/l1.hpp"

#include <algorithm>
#include <cmath>

#include "nsp/kernels.hpp"
#include "nsp/matrix_core.hpp"

namespace nsp {

namespace {

// Plain Cholesky; failure signals a rank-deficient Gram.
class Chol {
 public:
  explicit Chol(Matrix g) : l_(std::move(g)), n_(l_.rows()) { ok_ = factor(); }

  bool ok() const { return ok_; }

  Vector solve(Vector x) const {
    for (std::size_t i = 0; i < n_; ++i)
      x[i] = (x[i] - kernels::dot(l_.row_ptr(i), x.data(), i)) / l_(i, i);
    for (std::size_t i = n_; i-- > 0;) {
      double s = x[i];
      for (std::size_t j = i + 1; j < n_; ++j) s -= l_(j, i) * x[j];
      x[i] = s / l_(i, i);
    }
    return x;
  }

 private:
  bool factor() {
    for (std::size_t j = 0; j < n_; ++j) {
      double diag = l_(j, j) - kernels::sum_sq(l_.row_ptr(j), j);
      if (!(diag > 1e-300)) return false;
      diag = std::sqrt(diag);
      l_(j, j) = diag;
      for (std::size_t i = j + 1; i < n_; ++i)
        l_(i, j) = (l_(i, j) - kernels::dot(l_.row_ptr(i), l_.row_ptr(j), j)) / diag;
      for (std::size_t i = 0; i < j; ++i) l_(i, j) = 0.0;
    }
    return true;
  }

  Matrix l_;
  std::size_t n_;
  bool ok_ = false;
};

struct PolishOutcome {
  bool accepted = false;
  Vector x;
  double objective = 0.0;
  double gap = 0.0;
};

// Least squares on the identified support plus an exact dual certificate:
// solve A_S' y = sign(x_S) in the least-norm sense and accept only when y is
// strictly dual feasible and the support solution reproduces b.
PolishOutcome try_polish(const Matrix& a, const Vector& b, const Vector& z, double bnorm) {
  PolishOutcome out;
  const std::size_t q = a.rows();
  const std::size_t n = a.cols();
  double zmax = max_abs(z);
  if (zmax == 0.0) zmax = 1.0;
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i)
    if (std::fabs(z[i]) > 1e-10 * zmax) support.push_back(i);
  if (support.empty() || support.size() > q) return out;

  const std::size_t s = support.size();
  Matrix bs_t(s, q);  // rows are the selected columns of A
  for (std::size_t c = 0; c < s; ++c)
    for (std::size_t r = 0; r < q; ++r) bs_t(c, r) = a(r, support[c]);
  Chol gram(matmul_abt(bs_t, bs_t));
  if (!gram.ok()) return out;

  Vector btb(s);
  for (std::size_t c = 0; c < s; ++c) btb[c] = kernels::dot(bs_t.row_ptr(c), b.data(), q);
  Vector xs = gram.solve(btb);

  Vector x(n, 0.0);
  for (std::size_t c = 0; c < s; ++c) x[support[c]] = xs[c];
  Vector ax = matvec(a, x);
  double res = 0.0;
  for (std::size_t r = 0; r < q; ++r) res += (ax[r] - b[r]) * (ax[r] - b[r]);
  res = std::sqrt(res);
  if (res > 1e-10 * std::max(1.0, bnorm)) return out;

  Vector sgn(s);
  for (std::size_t c = 0; c < s; ++c) sgn[c] = xs[c] >= 0.0 ? 1.0 : -1.0;
  Vector w = gram.solve(sgn);
  Vector y = matvec_t(bs_t, w);  // y = A_S w, length q
  Vector aty = matvec_t(a, y);
  if (max_abs(aty) > 1.0 + 1e-9) return out;

  const double obj = norm1(x);
  const double dual_val = kernels::dot(b.data(), y.data(), q) / std::max(1.0, max_abs(aty));
  out.accepted = true;
  out.x = std::move(x);
  out.objective = obj;
  out.gap = std::max(0.0, obj - dual_val);
  return out;
}

}  // namespace

BpResult basis_pursuit(const Matrix& a, const Vector& b, const BpOptions& opt) {
  const std::size_t q = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != q) throw Error(Errc::BadArg, "basis_pursuit: dimension mismatch");
  if (!all_finite(a) || !all_finite(b))
    throw Error(Errc::NonFinite, "basis_pursuit: non-finite input");
  if (!(opt.tol > 0.0)) throw Error(Errc::BadArg, "basis_pursuit: tol must be positive");

  Chol aat(matmul_abt(a, a));
  if (!aat.ok()) throw Error(Errc::Infeasible, "basis_pursuit: A is not full row rank");
  const double bnorm = norm2(b);

  auto project = [&](const Vector& v) {
    Vector av = matvec(a, v);
    for (std::size_t r = 0; r < q; ++r) av[r] -= b[r];
    Vector w = aat.solve(av);
    Vector x = v;
    for (std::size_t r = 0; r < q; ++r) kernels::axpy(-w[r], a.row_ptr(r), x.data(), n);
    return x;
  };

  double rho = opt.rho;
  Vector x = project(Vector(n, 0.0));  // least-norm feasible start
  Vector z = x, u(n, 0.0), zprev(n);

  BpResult out;
  auto finish = [&](const Vector& xv, double gap, int it, bool converged, bool polished) {
    out.x = xv;
    out.objective = norm1(xv);
    Vector ax = matvec(a, xv);
    double res = 0.0;
    for (std::size_t r = 0; r < q; ++r) res += (ax[r] - b[r]) * (ax[r] - b[r]);
    out.residual = std::sqrt(res);
    out.duality_gap = gap;
    out.iterations = it;
    out.converged = converged;
    out.polished = polished;
    return out;
  };

  for (int it = 1; it <= opt.iter_cap; ++it) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = z[i] - u[i];
    x = project(v);
    zprev = z;
    const double thr = 1.0 / rho;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = x[i] + u[i];
      z[i] = t > thr ? t - thr : (t < -thr ? t + thr : 0.0);
      u[i] += x[i] - z[i];
    }

    if (it % 25 == 0 || it == opt.iter_cap) {
      double pr = 0.0, dr = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        pr += (x[i] - z[i]) * (x[i] - z[i]);
        dr += (z[i] - zprev[i]) * (z[i] - zprev[i]);
      }
      const double scale = std::max(1.0, norm2(x));
      pr = std::sqrt(pr);
      dr = rho * std::sqrt(dr);

      // dual estimate from the projection multiplier of the x-update
      Vector av = matvec(a, v);
      for (std::size_t r = 0; r < q; ++r) av[r] -= b[r];
      Vector w = aat.solve(av);
      Vector y(q);
      for (std::size_t r = 0; r < q; ++r) y[r] = -rho * w[r];
      Vector aty = matvec_t(a, y);
      const double feas = std::max(1.0, max_abs(aty));
      const double dual_val = kernels::dot(b.data(), y.data(), q) / feas;
      const double gap = std::max(0.0, norm1(x) - dual_val);

      if (gap <= opt.tol * std::max(1.0, norm1(x)) && pr <= opt.tol * scale)
        return finish(x, gap, it, true, false);

      if (opt.polish && it % 200 == 0 && pr <= 1e-5 * scale) {
        PolishOutcome pol = try_polish(a, b, z, bnorm);
        if (pol.accepted && pol.objective <= norm1(x) + 1e-9 * std::max(1.0, norm1(x)) &&
            pol.gap <= opt.tol * std::max(1.0, pol.objective))
          return finish(pol.x, pol.gap, it, true, true);
      }
      if (it % 100 == 0) {
        if (pr > 10.0 * dr && rho < 1e8) {
          rho *= 2.0;
          kernels::scal(0.5, u.data(), n);
        } else if (dr > 10.0 * pr && rho > 1e-8) {
          rho *= 0.5;
          kernels::scal(2.0, u.data(), n);
        }
      }
    }
  }

  // cap reached: report the best available point honestly
  PolishOutcome pol = try_polish(a, b, z, bnorm);
  if (pol.accepted && pol.objective <= norm1(x) + 1e-9 * std::max(1.0, norm1(x)))
    return finish(pol.x, pol.gap, opt.iter_cap,
                  pol.gap <= opt.tol * std::max(1.0, pol.objective), true);
  return finish(x, -1.0, opt.iter_cap, false, false);
}

RecoveryTrial recovery_trial(const Matrix& a, const Vector& e, std::size_t k,
                             std::optional<double> success_tol, const BpOptions& opt) {
  if (e.size() != a.cols()) throw Error(Errc::BadArg, "recovery_trial: dimension mismatch");
  if (k < 1 || k > e.size()) throw Error(Errc::BadK, "recovery_trial: k outside [1, n]");
  Vector b = matvec(a, e);
  BpResult bp = basis_pursuit(a, b, opt);

  RecoveryTrial trial;
  trial.e = e;
  trial.x_lp = bp.x;
  trial.eta.resize(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) trial.eta[i] = bp.x[i] - e[i];
  trial.success_tol = success_tol ? *success_tol : 1e-4 * std::max(1.0, max_abs(e));
  trial.success = max_abs(trial.eta) <= trial.success_tol;
  trial.eta_l1 = norm1(trial.eta);
  trial.decoder_converged = bp.converged;
  {
    Vector aeta = matvec(a, trial.eta);
    trial.a_eta_norm = norm2(aeta);
  }
  if (max_abs(trial.eta) == 0.0) {
    trial.nsp_ratio_defined = false;
  } else {
    trial.nsp_ratio_defined = true;
    trial.nsp_ratio = k_norm(trial.eta, k) / trial.eta_l1;
  }
  return trial;
}

double best_k_term_error(const Vector& e, std::size_t k) {
  if (k < 1 || k > e.size()) throw Error(Errc::BadK, "best_k_term_error: k outside [1, n]");
  return std::max(0.0, norm1(e) - k_norm(e, k));
}

Prop21Check check_prop21(const RecoveryTrial& trial, std::size_t k, double alpha) {
  Prop21Check chk;
  chk.lhs = trial.eta_l1;
  if (!trial.nsp_ratio_defined) {
    chk.applicable = true;  // eta = 0 satisfies the bound with any constant
    chk.rhs = 1e-8;
    chk.holds = true;
    return chk;
  }
  if (!(alpha < 0.5) || trial.nsp_ratio > alpha) {
    chk.applicable = false;
    chk.holds = true;
    return chk;
  }
  chk.applicable = true;
  chk.rhs = 2.0 / (1.0 - 2.0 * alpha) * best_k_term_error(trial.e, k) + 1e-8;
  chk.holds = chk.lhs <= chk.rhs;
  return chk;
}

}  // namespace nsp
