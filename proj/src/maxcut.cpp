#include "nsp/maxcut.hpp"

#include <algorithm>
#include <cmath>

#include "nsp/kernels.hpp"
#include "nsp/rng.hpp"

namespace nsp {

SdpProblem maxcut_problem(const Matrix& gram) {
  if (gram.rows() != gram.cols()) throw Error(Errc::BadArg, "maxcut: gram must be square");
  if (asymmetry(gram) > 1e-10) throw Error(Errc::NonSymmetric, "maxcut: gram must be symmetric");
  const std::size_t n = gram.rows();
  SdpProblem p;
  p.c = symmetrized(gram);
  p.constraints.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Matrix e(n, n);
    e(i, i) = 1.0;
    p.constraints.push_back(SdpConstraint{std::move(e), 1.0, false});
    p.identity_direction.emplace_back(i, 1.0);
  }
  return p;
}

double l_exact_bruteforce(const Matrix& gram) {
  const std::size_t n = gram.rows();
  if (n > 20) throw Error(Errc::TooLarge, "l_exact_bruteforce: n > 20");
  if (n == 0) throw Error(Errc::BadArg, "l_exact_bruteforce: empty gram");

  // Gray-code walk over sign vectors with v[0] fixed to +1.
  Vector v(n, 1.0);
  Vector w = matvec(gram, v);
  double val = kernels::dot(v.data(), w.data(), n);
  double best = val;
  const std::uint64_t steps = n > 1 ? (1ull << (n - 1)) : 1;
  for (std::uint64_t g = 1; g < steps; ++g) {
    // flip position: lowest set bit of g, offset past the fixed coordinate
    std::size_t i = 1;
    {
      std::uint64_t t = g;
      while ((t & 1ull) == 0ull) {
        t >>= 1;
        ++i;
      }
    }
    val += -4.0 * v[i] * w[i] + 4.0 * gram(i, i);
    const double delta = -2.0 * v[i];
    for (std::size_t j = 0; j < n; ++j) w[j] += delta * gram(j, i);
    v[i] = -v[i];
    best = std::max(best, val);
  }
  return best;
}

MaxcutSdp maxcut_sdp(const Matrix& gram, const SdpOptions& opt) {
  SdpProblem p = maxcut_problem(gram);
  SdpSolution sol = solve_sdp(p, opt);
  if (sol.status == SdpStatus::Infeasible)
    throw Error(Errc::Infeasible, "maxcut: solver reported infeasibility");
  const double repaired = dual_repair_identity(p, sol.dual);
  const double analytic = dual_repair_identity(p, {});
  MaxcutSdp out;
  out.upper_repaired = std::min(repaired, analytic);
  out.solver_value = sol.objective;
  out.x = std::move(sol.x);
  out.status = sol.status;
  out.iterations = sol.iterations;
  return out;
}

std::pair<double, double> maxcut_upper(const Matrix& gram, const SdpOptions& opt) {
  MaxcutSdp s = maxcut_sdp(gram, opt);
  SymEig eig = sym_eig(symmetrized(gram), 1e-8);
  const double quick = static_cast<double>(gram.rows()) * std::max(0.0, eig.values.back());
  return {s.upper_repaired, quick};
}

GwRound gw_round_lower(const Matrix& gram, const Matrix& x, int samples, std::uint64_t seed) {
  const std::size_t n = gram.rows();
  if (x.rows() != n || x.cols() != n) throw Error(Errc::BadArg, "gw_round: dimension mismatch");
  if (samples < 1) throw Error(Errc::BadArg, "gw_round: samples must be >= 1");
  for (std::size_t i = 0; i < n; ++i)
    if (std::fabs(x(i, i) - 1.0) > 1e-6)
      throw Error(Errc::BadX, "gw_round: diagonal of X deviates from 1 beyond 1e-6");

  Matrix c = psd_project(x);
  Vector dinv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (c(i, i) <= 1e-12) throw Error(Errc::BadX, "gw_round: clipped X has vanishing diagonal");
    dinv[i] = 1.0 / std::sqrt(c(i, i));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) *= dinv[i] * dinv[j];

  // factor C = S S' for correlated sampling
  SymEig eig = sym_eig(symmetrized(c), 1e-6);
  Matrix fac(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = std::sqrt(std::max(0.0, eig.values[j]));
    for (std::size_t i = 0; i < n; ++i) fac(i, j) = s * eig.vectors(i, j);
  }

  GwRound out;
  out.best_v.assign(n, 1.0);
  out.value = -1.0;
  Vector g(n), v(n);
  for (int s = 0; s < samples; ++s) {
    Xoshiro256pp rng = Xoshiro256pp::substream(seed, static_cast<std::uint64_t>(s));
    for (std::size_t i = 0; i < n; ++i) g[i] = rng.next_normal();
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = kernels::dot(fac.row_ptr(i), g.data(), n);
      v[i] = zi >= 0.0 ? 1.0 : -1.0;  // sign(0) maps to +1
    }
    double val = 0.0;
    for (std::size_t i = 0; i < n; ++i) val += v[i] * kernels::dot(gram.row_ptr(i), v.data(), n);
    if (val > out.value) {
      out.value = val;
      out.best_v = v;
    }
  }
  return out;
}

LBoundReport l_bounds(const Matrix& gram, int samples, std::uint64_t seed, bool want_exact,
                      const SdpOptions& opt) {
  LBoundReport rep;
  MaxcutSdp s = maxcut_sdp(gram, opt);
  SymEig eig = sym_eig(symmetrized(gram), 1e-8);
  rep.upper_sdp = s.upper_repaired;
  rep.upper_quick = static_cast<double>(gram.rows()) * std::max(0.0, eig.values.back());
  rep.sdp_objective = s.solver_value;
  rep.solver_status = s.status;
  rep.solver_iterations = s.iterations;
  // Rescale the solver primal to an exact unit diagonal; the rounding value
  // is a valid lower bound for any PSD correlation input.
  Matrix xr = s.x;
  {
    const std::size_t n = xr.rows();
    Vector dinv(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (xr(i, i) <= 1e-8) throw Error(Errc::BadX, "l_bounds: degenerate solver primal");
      dinv[i] = 1.0 / std::sqrt(xr(i, i));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) xr(i, j) *= dinv[i] * dinv[j];
    for (std::size_t i = 0; i < n; ++i) xr(i, i) = 1.0;
  }
  GwRound round = gw_round_lower(gram, xr, samples, seed);
  rep.lower = round.value;
  rep.best_v = std::move(round.best_v);
  if (want_exact) rep.exact = l_exact_bruteforce(gram);
  return rep;
}

}  // namespace nsp
