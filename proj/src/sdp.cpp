#include "nsp/sdp.hpp"

#include <algorithm>
#include <cmath>

#include "nsp/kernels.hpp"

namespace nsp {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr std::size_t kMaxPsdDim = 512;
constexpr std::size_t kMaxRows = 4096;
}  // namespace

std::size_t svec_len(std::size_t d) { return d * (d + 1) / 2; }

Vector svec(const Matrix& s) {
  const std::size_t d = s.rows();
  Vector v(svec_len(d));
  std::size_t idx = 0;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i <= j; ++i)
      v[idx++] = (i == j) ? s(i, j) : kSqrt2 * 0.5 * (s(i, j) + s(j, i));
  return v;
}

Matrix unsvec(const Vector& v, std::size_t d) {
  Matrix s(d, d);
  std::size_t idx = 0;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      const double x = v[idx++];
      if (i == j) {
        s(i, j) = x;
      } else {
        s(i, j) = s(j, i) = x / kSqrt2;
      }
    }
  return s;
}

Matrix psd_project(const Matrix& s) {
  SymEig eig = sym_eig(symmetrized(s), 1e-6);
  const std::size_t d = s.rows();
  Matrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    const double lam = eig.values[k];
    if (lam <= 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) {
      const double vi = lam * eig.vectors(i, k);
      for (std::size_t j = i; j < d; ++j) out(i, j) += vi * eig.vectors(j, k);
    }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) out(j, i) = out(i, j);
  return out;
}

namespace {

struct Row {
  Vector a_svec;
  double b = 0.0;
  bool ineq = false;
};

constexpr std::size_t kNoSlack = static_cast<std::size_t>(-1);

struct ConicForm {
  std::vector<Row> rows;  // declared constraints first, then box rows
  std::size_t n_declared = 0;
  std::size_t d = 0;
  std::size_t nvec = 0;
  std::size_t n_slack = 0;
  std::vector<std::size_t> slack_of_row;
};

ConicForm build_conic(const SdpProblem& p) {
  const std::size_t d = p.dim();
  if (d == 0) throw Error(Errc::BadArg, "sdp: empty objective");
  if (d > kMaxPsdDim) throw Error(Errc::TooLarge, "sdp: PSD block exceeds dense solver cap");
  ConicForm f;
  f.d = d;
  f.nvec = svec_len(d);
  for (const auto& c : p.constraints) {
    if (c.a.rows() != d || c.a.cols() != d)
      throw Error(Errc::BadArg, "sdp: constraint dimension mismatch");
    if (asymmetry(c.a) > 1e-12) throw Error(Errc::BadArg, "sdp: constraint matrix not symmetric");
    f.rows.push_back(Row{svec(c.a), c.b, c.is_inequality});
  }
  f.n_declared = f.rows.size();
  if (p.box01) {
    // X_ij <= 1 rows for i <= j, then X_ij >= 0 rows written as -X_ij <= 0
    for (int sign = 0; sign < 2; ++sign)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i <= j; ++i) {
          Matrix e(d, d);
          const double w = sign == 0 ? 1.0 : -1.0;
          if (i == j) {
            e(i, i) = w;
          } else {
            e(i, j) = e(j, i) = 0.5 * w;
          }
          f.rows.push_back(Row{svec(e), sign == 0 ? 1.0 : 0.0, true});
        }
  }
  if (f.rows.size() > kMaxRows) throw Error(Errc::TooLarge, "sdp: too many constraint rows");
  f.slack_of_row.assign(f.rows.size(), kNoSlack);
  for (std::size_t r = 0; r < f.rows.size(); ++r)
    if (f.rows[r].ineq) f.slack_of_row[r] = f.n_slack++;
  return f;
}

// Dense Cholesky with a ridge retry for numerically redundant row sets.
class Cholesky {
 public:
  explicit Cholesky(Matrix g) : base_(std::move(g)), n_(base_.rows()) {
    double trace = 0.0;
    for (std::size_t i = 0; i < n_; ++i) trace += base_(i, i);
    double ridge = 0.0;
    const double ridge0 = 1e-12 * std::max(trace / std::max<std::size_t>(n_, 1), 1.0);
    while (!factor(ridge)) {
      ridge = ridge == 0.0 ? ridge0 : ridge * 100.0;
      if (ridge > 1e3 * ridge0 * 1e12)
        throw Error(Errc::Infeasible, "sdp: constraint Gram factorization failed");
    }
  }

  void solve_in_place(Vector& x) const {
    for (std::size_t i = 0; i < n_; ++i)
      x[i] = (x[i] - kernels::dot(l_.row_ptr(i), x.data(), i)) / l_(i, i);
    for (std::size_t i = n_; i-- > 0;) {
      double s = x[i];
      for (std::size_t j = i + 1; j < n_; ++j) s -= l_(j, i) * x[j];
      x[i] = s / l_(i, i);
    }
  }

 private:
  bool factor(double ridge) {
    l_ = base_;
    for (std::size_t i = 0; i < n_; ++i) l_(i, i) += ridge;
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

  Matrix base_;
  Matrix l_;
  std::size_t n_;
};

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opt) {
  if (!(opt.tol > 0.0)) throw Error(Errc::BadArg, "sdp: tol must be positive");
  ConicForm f = build_conic(p);
  const std::size_t R = f.rows.size();
  const std::size_t N = f.nvec + f.n_slack;

  const double c_scale = std::max(1.0, frobenius(p.c));
  Vector c(N, 0.0);
  {
    Vector cs = svec(p.c);
    for (std::size_t i = 0; i < f.nvec; ++i) c[i] = -cs[i] / c_scale;
  }
  Vector row_scale(R), b(R);
  Matrix amat(R, N);
  for (std::size_t r = 0; r < R; ++r) {
    double nrm2 = kernels::sum_sq(f.rows[r].a_svec.data(), f.nvec);
    if (f.slack_of_row[r] != kNoSlack) nrm2 += 1.0;
    row_scale[r] = std::sqrt(std::max(nrm2, 1e-300));
    for (std::size_t i = 0; i < f.nvec; ++i) amat(r, i) = f.rows[r].a_svec[i] / row_scale[r];
    if (f.slack_of_row[r] != kNoSlack) amat(r, f.nvec + f.slack_of_row[r]) = 1.0 / row_scale[r];
    b[r] = f.rows[r].b / row_scale[r];
  }
  Cholesky chol(matmul_abt(amat, amat));

  const double alpha = opt.over_relaxation;
  double rho = opt.rho;
  Vector z(N, 0.0), u(N, 0.0), x(N, 0.0), y(R, 0.0);
  const double bnorm = norm2(b);

  SdpSolution sol;
  sol.status = SdpStatus::IterCap;

  Vector v(N), rhs(R), zprev(N);
  int it;
  for (it = 1; it <= opt.iter_cap; ++it) {
    // x-update: project z - u - c/rho onto {Ax = b}
    for (std::size_t i = 0; i < N; ++i) v[i] = z[i] - u[i] - c[i] / rho;
    for (std::size_t r = 0; r < R; ++r) rhs[r] = kernels::dot(amat.row_ptr(r), v.data(), N) - b[r];
    chol.solve_in_place(rhs);
    y = rhs;
    x = v;
    for (std::size_t r = 0; r < R; ++r) kernels::axpy(-y[r], amat.row_ptr(r), x.data(), N);

    zprev = z;
    for (std::size_t i = 0; i < N; ++i) v[i] = alpha * x[i] + (1.0 - alpha) * z[i] + u[i];
    {
      Vector head(v.begin(), v.begin() + f.nvec);
      Vector hs = svec(psd_project(unsvec(head, f.d)));
      std::copy(hs.begin(), hs.end(), z.begin());
      for (std::size_t i = f.nvec; i < N; ++i) z[i] = std::max(0.0, v[i]);
    }
    for (std::size_t i = 0; i < N; ++i) u[i] += alpha * x[i] + (1.0 - alpha) * zprev[i] - z[i];

    if (it % 25 == 0 || it == opt.iter_cap) {
      double pr = 0.0, dr = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        pr += (x[i] - z[i]) * (x[i] - z[i]);
        dr += (z[i] - zprev[i]) * (z[i] - zprev[i]);
      }
      const double xn = std::max({norm2(x), norm2(z), 1.0});
      pr = std::sqrt(pr) / xn;
      dr = rho * std::sqrt(dr) / std::max(1.0, rho * norm2(u));
      const double pobj = -kernels::dot(c.data(), x.data(), N);
      double dobj = 0.0;
      for (std::size_t r = 0; r < R; ++r) dobj += b[r] * y[r] * rho;
      const double gap = std::fabs(pobj - dobj) / (1.0 + std::fabs(pobj) + std::fabs(dobj));

      sol.primal_residual = pr;
      sol.dual_residual = dr;
      sol.rel_gap = gap;
      if (pr <= opt.tol && dr <= opt.tol && gap <= opt.tol) {
        sol.status = SdpStatus::Converged;
        break;
      }
      if (!std::isfinite(pr) || norm2(x) > 1e12 * std::max(1.0, bnorm)) {
        sol.status = SdpStatus::Infeasible;
        break;
      }
      if (it % 100 == 0) {
        if (pr > 10.0 * dr && rho < 1e6) {
          rho *= 2.0;
          kernels::scal(0.5, u.data(), N);
        } else if (dr > 10.0 * pr && rho > 1e-6) {
          rho *= 0.5;
          kernels::scal(2.0, u.data(), N);
        }
      }
    }
  }
  sol.iterations = std::min(it, opt.iter_cap);

  // Cone-feasible primal; duals unscaled back to the declared rows.
  Vector zz(z.begin(), z.begin() + f.nvec);
  sol.x = unsvec(zz, f.d);
  {
    Vector cx = svec(p.c);
    sol.objective = kernels::dot(cx.data(), zz.data(), f.nvec);
  }
  sol.dual.assign(R, 0.0);
  double dobj = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    sol.dual[r] = c_scale * rho * y[r] / row_scale[r];
    dobj += f.rows[r].b * sol.dual[r];
  }
  sol.dual_objective = dobj;
  return sol;
}

double dual_repair_identity(const SdpProblem& p, const Vector& dual_estimate) {
  if (p.identity_direction.empty())
    throw Error(Errc::NoIdentityDirection, "dual repair: no identity direction declared");
  ConicForm f = build_conic(p);
  const std::size_t R = f.rows.size();
  const std::size_t d = f.d;

  {
    Matrix sum(d, d);
    for (const auto& [idx, w] : p.identity_direction) {
      if (idx >= p.constraints.size())
        throw Error(Errc::NoIdentityDirection, "dual repair: direction index out of range");
      if (p.constraints[idx].is_inequality && w < 0.0)
        throw Error(Errc::NoIdentityDirection,
                    "dual repair: inequality weight in direction must be nonnegative");
      const Matrix& a = p.constraints[idx].a;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) sum(i, j) += w * a(i, j);
    }
    for (std::size_t i = 0; i < d; ++i) sum(i, i) -= 1.0;
    if (max_abs(sum) > 1e-9)
      throw Error(Errc::NoIdentityDirection, "dual repair: direction does not sum to identity");
  }

  Vector nu(R, 0.0);
  for (std::size_t r = 0; r < std::min(R, dual_estimate.size()); ++r) nu[r] = dual_estimate[r];
  for (std::size_t r = 0; r < R; ++r)
    if (f.rows[r].ineq) nu[r] = std::max(0.0, nu[r]);

  // Dual slack Lambda = sum_r nu_r A_r - C must be PSD; shift along the
  // identity direction by the most negative eigenvalue.
  Vector lam(f.nvec, 0.0);
  for (std::size_t r = 0; r < R; ++r)
    kernels::axpy(nu[r], f.rows[r].a_svec.data(), lam.data(), f.nvec);
  {
    Vector cs = svec(p.c);
    kernels::axpy(-1.0, cs.data(), lam.data(), f.nvec);
  }
  SymEig eig = sym_eig(unsvec(lam, d), 1e-6);
  const double mu = std::max(0.0, -eig.values.front());
  for (const auto& [idx, w] : p.identity_direction) nu[idx] += mu * w;

  double bound = 0.0;
  for (std::size_t r = 0; r < R; ++r) bound += f.rows[r].b * nu[r];
  return bound;
}

}  // namespace nsp
