#include "nsp/kdense.hpp"

#include <algorithm>
#include <cmath>

#include "nsp/kernels.hpp"
#include "nsp/rng.hpp"

namespace nsp {

KDenseInstance build_instance(const Matrix& gram, std::size_t k) {
  const std::size_t n = gram.rows();
  if (gram.cols() != n || n == 0) throw Error(Errc::BadArg, "kdense: gram must be square");
  if (asymmetry(gram) > 1e-10) throw Error(Errc::NonSymmetric, "kdense: gram must be symmetric");
  if (k < 1 || k > n) throw Error(Errc::BadK, "kdense: k outside [1, n]");
  Matrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double g = 0.5 * (gram(i, j) + gram(j, i));
      m(i, j) = g;
      m(i + n, j + n) = g;
      m(i + n, j) = -g;
      m(i, j + n) = -g;
    }
  return KDenseInstance{std::move(m), n, k};
}

KDenseInstance build_instance(const NullspaceBasis& basis, std::size_t k) {
  return build_instance(basis.gram, k);
}

double sigma_exact_bruteforce(const Matrix& gram, std::size_t k) {
  const std::size_t n = gram.rows();
  if (n > 14) throw Error(Errc::TooLarge, "sigma_exact_bruteforce: n > 14");
  if (k < 1 || k > n) throw Error(Errc::BadK, "sigma_exact_bruteforce: k outside [1, n]");

  double best = 0.0;
  std::size_t idx[14];
  double sign[14];
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int count = __builtin_popcount(mask);
    if (count > static_cast<int>(k)) continue;
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx[c++] = i;
    const std::uint32_t patterns = count > 1 ? (1u << (count - 1)) : 1u;
    for (std::uint32_t p = 0; p < patterns; ++p) {
      sign[0] = 1.0;
      for (int t = 1; t < count; ++t) sign[t] = (p >> (t - 1)) & 1u ? -1.0 : 1.0;
      double val = 0.0;
      for (int a = 0; a < count; ++a) {
        val += gram(idx[a], idx[a]);
        for (int b = a + 1; b < count; ++b) val += 2.0 * sign[a] * sign[b] * gram(idx[a], idx[b]);
      }
      best = std::max(best, val);
    }
  }
  return best;
}

namespace {

// Lifted variable Z = [[X, d],[d', 1]] with d = diag(X); the trailing index
// is the corner. Adds the coupling rows, the corner row, and a redundant
// Tr X <= k row that provides the identity direction together with the
// corner.
struct LiftedBase {
  SdpProblem p;
  std::size_t corner_row = 0;
  std::size_t trace_row = 0;
};

LiftedBase lifted_base(const KDenseInstance& inst) {
  const std::size_t s = inst.m.rows();
  const std::size_t d = s + 1;
  LiftedBase out;
  out.p.c = Matrix(d, d);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) out.p.c(i, j) = inst.m(i, j);

  for (std::size_t i = 0; i < s; ++i) {
    Matrix a(d, d);
    a(i, i) = 1.0;
    a(i, s) = a(s, i) = -0.5;
    out.p.constraints.push_back(SdpConstraint{std::move(a), 0.0, false});
  }
  {
    Matrix a(d, d);
    a(s, s) = 1.0;
    out.corner_row = out.p.constraints.size();
    out.p.constraints.push_back(SdpConstraint{std::move(a), 1.0, false});
  }
  {
    Matrix a(d, d);
    for (std::size_t i = 0; i < s; ++i) a(i, i) = 1.0;
    out.trace_row = out.p.constraints.size();
    out.p.constraints.push_back(
        SdpConstraint{std::move(a), static_cast<double>(inst.k), true});
  }
  out.p.identity_direction = {{out.corner_row, 1.0}, {out.trace_row, 1.0}};
  return out;
}

Matrix ones_block(std::size_t s, std::size_t d) {
  Matrix a(d, d);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) a(i, j) = 1.0;
  return a;
}

RelaxValue run_certified(const SdpProblem& p, const SdpOptions& opt, std::size_t block) {
  SdpSolution sol = solve_sdp(p, opt);
  if (sol.status == SdpStatus::Infeasible)
    throw Error(Errc::Infeasible, "kdense: relaxation reported infeasible");
  const double repaired = dual_repair_identity(p, sol.dual);
  const double analytic = dual_repair_identity(p, {});
  RelaxValue out;
  out.value = std::min(repaired, analytic);
  out.solver_value = sol.objective;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.x = Matrix(block, block);
  for (std::size_t i = 0; i < block; ++i)
    for (std::size_t j = 0; j < block; ++j) out.x(i, j) = sol.x(i, j);
  return out;
}

}  // namespace

RelaxValue sqk2_upper(const KDenseInstance& inst, bool with_addc, int max_added,
                      const SdpOptions& opt) {
  const std::size_t s = inst.m.rows();
  const std::size_t d = s + 1;
  LiftedBase base = lifted_base(inst);
  base.p.constraints.push_back(SdpConstraint{
      ones_block(s, d), static_cast<double>(inst.k) * static_cast<double>(inst.k), true});

  RelaxValue plain = run_certified(base.p, opt, s);
  if (!with_addc) return plain;

  // Most violated row cuts at the plain solution, both families.
  struct Cut {
    double violation;
    int family;
    std::size_t i;
  };
  const double kk = static_cast<double>(inst.k);
  std::vector<Cut> cuts;
  for (std::size_t i = 0; i < s; ++i) {
    double row_sum = 0.0, diag_sum = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      row_sum += plain.x(i, j);
      diag_sum += plain.x(j, j);
    }
    const double v1 = row_sum - kk * plain.x(i, i);
    const double v2 = (diag_sum - row_sum) - kk * (1.0 - plain.x(i, i));
    if (v1 > 1e-9) cuts.push_back(Cut{v1, 1, i});
    if (v2 > 1e-9) cuts.push_back(Cut{v2, 2, i});
  }
  std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) {
    if (a.violation != b.violation) return a.violation > b.violation;
    if (a.family != b.family) return a.family < b.family;
    return a.i < b.i;
  });
  const std::size_t want = static_cast<std::size_t>(std::max(10, max_added));
  if (cuts.size() > want) cuts.resize(want);
  if (cuts.empty()) return plain;

  SdpProblem tightened = base.p;
  for (const Cut& c : cuts) {
    Matrix a(d, d);
    if (c.family == 1) {
      // sum_j X_ij <= k X_ii
      for (std::size_t j = 0; j < s; ++j) {
        a(c.i, j) += 0.5;
        a(j, c.i) += 0.5;
      }
      a(c.i, c.i) -= kk;
      tightened.constraints.push_back(SdpConstraint{std::move(a), 0.0, true});
    } else {
      // sum_j (X_jj - X_ij) <= k (1 - X_ii)
      for (std::size_t j = 0; j < s; ++j) {
        a(j, j) += 1.0;
        a(c.i, j) -= 0.5;
        a(j, c.i) -= 0.5;
      }
      a(c.i, c.i) += kk;
      tightened.constraints.push_back(SdpConstraint{std::move(a), kk, true});
    }
  }
  RelaxValue cut_value = run_certified(tightened, opt, s);
  if (plain.value < cut_value.value) return plain;
  return cut_value;
}

RelaxValue sqk3_upper(const KDenseInstance& inst, const SdpOptions& opt) {
  if (inst.k < 2) throw Error(Errc::BadK, "sqk3: requires k >= 2");
  const std::size_t s = inst.m.rows();
  const std::size_t d = s + 1;
  LiftedBase base = lifted_base(inst);
  Matrix a = ones_block(s, d);
  for (std::size_t i = 0; i < s; ++i) a(i, i) = 0.0;
  base.p.constraints.push_back(SdpConstraint{
      std::move(a), static_cast<double>(inst.k) * static_cast<double>(inst.k - 1), true});
  return run_certified(base.p, opt, s);
}

RelaxValue feige_upper(const KDenseInstance& inst, const SdpOptions& opt) {
  const std::size_t s = inst.m.rows();
  const std::size_t d = s + 1;
  const Matrix& m = inst.m;
  Vector m_row_sums(s, 0.0);
  double m_total = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    m_row_sums[i] = kernels::sum(m.row_ptr(i), s);
    m_total += m_row_sums[i];
  }

  RelaxValue best;
  bool have = false;
  for (std::size_t j = 1; j <= inst.k; ++j) {
    SdpProblem p;
    p.c = Matrix(d, d);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t l = 0; l < s; ++l) p.c(i, l) = 0.25 * m(i, l);
    for (std::size_t i = 0; i < s; ++i) p.c(i, s) = p.c(s, i) = 0.25 * m_row_sums[i];
    p.c(s, s) = 0.25 * m_total;

    for (std::size_t i = 0; i < d; ++i) {
      Matrix a(d, d);
      a(i, i) = 1.0;
      p.constraints.push_back(SdpConstraint{std::move(a), 1.0, false});
      p.identity_direction.emplace_back(i, 1.0);
    }
    const double target = 2.0 * static_cast<double>(j) - static_cast<double>(s);
    for (std::size_t i = 0; i < s; ++i) {
      // (Y 1)_i = target * y_i
      Matrix a(d, d);
      for (std::size_t l = 0; l < s; ++l) {
        a(i, l) += 0.5;
        a(l, i) += 0.5;
      }
      a(i, s) -= 0.5 * target;
      a(s, i) -= 0.5 * target;
      p.constraints.push_back(SdpConstraint{std::move(a), 0.0, false});
    }

    RelaxValue v = run_certified(p, opt, s);
    if (!have || v.value > best.value) {
      best = std::move(v);
      have = true;
    }
  }
  return best;
}

RelaxValue sdpk_upper(const KDenseInstance& inst, const SdpOptions& opt) {
  const std::size_t s = inst.m.rows();
  SdpProblem p;
  p.c = inst.m;
  Matrix a = Matrix::identity(s);
  p.constraints.push_back(SdpConstraint{std::move(a), static_cast<double>(inst.k), false});
  p.identity_direction = {{0, 1.0}};
  p.box01 = true;
  return run_certified(p, opt, s);
}

namespace {

GreedyPrune greedy_prune_impl(const Matrix& m, std::vector<std::size_t> kept, std::size_t k) {
  Vector row_sums(kept.size());
  for (std::size_t a = 0; a < kept.size(); ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < kept.size(); ++b) s += m(kept[a], kept[b]);
    row_sums[a] = s;
  }
  double weight = 0.0;
  for (std::size_t a = 0; a < kept.size(); ++a) weight += row_sums[a];

  while (kept.size() > k) {
    // removal loss of vertex a is 2 * row_sum_a - m_aa; keep the max weight
    std::size_t drop = 0;
    double best_loss = 0.0;
    for (std::size_t a = 0; a < kept.size(); ++a) {
      const double loss = 2.0 * row_sums[a] - m(kept[a], kept[a]);
      if (a == 0 || loss < best_loss) {
        best_loss = loss;
        drop = a;
      }
    }
    weight -= best_loss;
    const std::size_t dropped_idx = kept[drop];
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(drop));
    row_sums.erase(row_sums.begin() + static_cast<std::ptrdiff_t>(drop));
    for (std::size_t a = 0; a < kept.size(); ++a) row_sums[a] -= m(kept[a], dropped_idx);
  }
  return GreedyPrune{std::move(kept), weight};
}

}  // namespace

GreedyPrune greedy_prune(const Matrix& m, const std::vector<std::size_t>& index_set,
                         std::size_t k) {
  if (k < 2) throw Error(Errc::BadK, "greedy_prune: requires k >= 2");
  if (index_set.size() < k) throw Error(Errc::BadK, "greedy_prune: |I| < k");
  for (std::size_t i : index_set)
    if (i >= m.rows()) throw Error(Errc::BadArg, "greedy_prune: index out of range");
  return greedy_prune_impl(m, index_set, k);
}

HybridRound hybrid_round_lower(const KDenseInstance& inst, const Matrix& x, int samples,
                               std::uint64_t seed) {
  const std::size_t s = inst.m.rows();
  if (x.rows() != s || x.cols() != s)
    throw Error(Errc::BadArg, "hybrid_round: X dimension mismatch");
  if (samples < 1) throw Error(Errc::BadArg, "hybrid_round: samples must be >= 1");

  std::vector<std::size_t> live;
  Vector diag(s);
  for (std::size_t i = 0; i < s; ++i) {
    diag[i] = std::clamp(x(i, i), 0.0, 1.0);
    if (diag[i] > 1e-12) live.push_back(i);
  }
  if (live.empty()) throw Error(Errc::DegenerateX, "hybrid_round: X diagonal vanishes");
  const std::size_t nl = live.size();

  double sq_sum = 0.0;
  for (std::size_t i : live) sq_sum += std::sqrt(diag[i]);
  Vector q(nl);
  for (std::size_t a = 0; a < nl; ++a)
    q[a] = std::clamp(static_cast<double>(inst.k) * std::sqrt(diag[live[a]]) / sq_sum, 0.0, 1.0);

  Matrix corr(nl, nl);
  for (std::size_t a = 0; a < nl; ++a)
    for (std::size_t b = 0; b < nl; ++b)
      corr(a, b) = x(live[a], live[b]) / std::sqrt(diag[live[a]] * diag[live[b]]);
  SymEig eig = sym_eig(symmetrized(corr), 1e-6);
  Matrix fac(nl, nl);
  for (std::size_t j = 0; j < nl; ++j) {
    const double sv = std::sqrt(std::max(0.0, eig.values[j]));
    for (std::size_t i = 0; i < nl; ++i) fac(i, j) = sv * eig.vectors(i, j);
  }

  HybridRound out;
  out.w0.assign(s, 0.0);
  out.value = -1.0;
  Vector g(nl);
  std::vector<std::size_t> selected;
  for (int smp = 0; smp < samples; ++smp) {
    Xoshiro256pp rng = Xoshiro256pp::substream(seed, static_cast<std::uint64_t>(smp));
    for (std::size_t a = 0; a < nl; ++a) g[a] = rng.next_normal();
    selected.clear();
    for (std::size_t a = 0; a < nl; ++a) {
      const double z = kernels::dot(fac.row_ptr(a), g.data(), nl);
      const bool coin = rng.next_uniform() < q[a];
      if (z >= 0.0 && coin) selected.push_back(live[a]);
    }
    double val;
    std::vector<std::size_t> final_set;
    if (selected.size() > inst.k) {
      GreedyPrune pruned = greedy_prune_impl(inst.m, selected, inst.k);
      val = pruned.weight;
      final_set = std::move(pruned.subset);
    } else {
      val = 0.0;
      for (std::size_t a : selected)
        for (std::size_t b : selected) val += inst.m(a, b);
      final_set = selected;
    }
    if (val > out.value) {
      out.value = val;
      std::fill(out.w0.begin(), out.w0.end(), 0.0);
      for (std::size_t i : final_set) out.w0[i] = 1.0;
    }
  }
  out.value = std::max(out.value, 0.0);
  return out;
}

double approx_ratio_mu(double n, double k) {
  if (!(n > 0.0) || !(k > 0.0)) throw Error(Errc::BadArg, "approx_ratio_mu: need n, k > 0");
  if (k < std::cbrt(n)) throw Error(Errc::OutOfRegime, "approx_ratio_mu: k < n^(1/3)");
  const double denom = 1.0 - (2.0 * 3.14159265358979323846 * n * n / (k * k)) *
                                 std::exp(-std::pow(n, 1.0 / 9.0) / 3.0);
  if (!(denom > 0.0))
    throw Error(Errc::OutOfRegime, "approx_ratio_mu: denominator not positive at this scale");
  return (1.0 - 2.0 / std::cbrt(k)) / denom;
}

SigmaBoundReport sigma_bounds(const Matrix& gram, std::size_t k, const SigmaMethods& methods,
                              int samples, std::uint64_t seed,
                              std::optional<double> l2_upper_hint, const SdpOptions& opt) {
  const std::size_t n = gram.rows();
  if (k < 1 || k > n) throw Error(Errc::BadK, "sigma_bounds: k outside [1, n]");

  SigmaBoundReport rep;
  rep.n = n;
  rep.k = k;

  SymEig eig = sym_eig(symmetrized(gram), 1e-8);
  const double lmax = std::max(0.0, eig.values.back());
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, gram(i, i));

  double l2_upper = static_cast<double>(n) * lmax;
  if (l2_upper_hint) l2_upper = std::min(l2_upper, *l2_upper_hint);
  rep.quick = std::min(static_cast<double>(k) * lmax, l2_upper);

  if (k == 1) {
    rep.exact = max_diag;
  } else if (methods.exact) {
    rep.exact = sigma_exact_bruteforce(gram, k);
  }

  const bool need_instance =
      methods.sqk2 || methods.sqk2_plus || methods.sqk3 || methods.feige || methods.sdpk ||
      methods.rounding;
  std::optional<KDenseInstance> inst;
  if (need_instance) inst = build_instance(gram, k);

  auto note = [&rep](const char* name, const RelaxValue& v) {
    rep.diagnostics.push_back(MethodDiag{name, v.value, v.solver_value, v.status, v.iterations});
  };

  if (methods.sqk2) {
    RelaxValue v = sqk2_upper(*inst, false, 10, opt);
    rep.sqk2 = v.value;
    note("sqk2", v);
  }
  if (methods.sqk2_plus) {
    RelaxValue v = sqk2_upper(*inst, true, 10, opt);
    rep.sqk2_plus = v.value;
    note("sqk2+", v);
  }
  if (methods.sqk3 && k >= 2) {
    RelaxValue v = sqk3_upper(*inst, opt);
    rep.sqk3 = v.value;
    note("sqk3", v);
  }
  if (methods.feige) {
    RelaxValue v = feige_upper(*inst, opt);
    rep.feige = v.value;
    note("feige", v);
  }
  std::optional<Matrix> sdpk_x;
  if (methods.sdpk || methods.rounding) {
    RelaxValue v = sdpk_upper(*inst, opt);
    if (methods.sdpk) rep.sdpk = v.value;
    note("sdpk", v);
    sdpk_x = std::move(v.x);
  }
  if (methods.rounding) {
    HybridRound hr = hybrid_round_lower(*inst, *sdpk_x, samples, seed);
    rep.rounding_lower = hr.value;
  }

  double upper = rep.quick;
  for (const auto& u : {rep.sqk2, rep.sqk2_plus, rep.sqk3, rep.feige, rep.sdpk})
    if (u) upper = std::min(upper, *u);
  if (rep.exact) upper = std::min(upper, *rep.exact);
  rep.chosen_upper = upper;

  double lower = std::max(0.0, max_diag);  // sigma_1 <= sigma_k
  if (rep.rounding_lower) lower = std::max(lower, *rep.rounding_lower);
  if (rep.exact) lower = std::max(lower, *rep.exact);
  rep.chosen_lower = lower;
  return rep;
}

}  // namespace nsp
