#include "nsp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "nsp/kernels.hpp"
#include "nsp/matrix_core.hpp"
#include "nsp/rng.hpp"

namespace nsp {

namespace {

constexpr long long kChunk = 1024;  // fixed chunk size keeps reductions
                                    // independent of the thread count

void draw(Xoshiro256pp& rng, McModel model, double delta, Vector& y) {
  switch (model) {
    case McModel::Gaussian:
      for (double& v : y) v = rng.next_normal();
      break;
    case McModel::BoundedUniform:
      for (double& v : y) v = delta * rng.next_symmetric();
      break;
    case McModel::Rademacher:
      for (double& v : y) v = (rng.next_u64() & 1ull) ? delta : -delta;
      break;
  }
}

// Evaluates both norms for every sample into flat arrays, chunk-parallel.
void sample_norms(const Matrix& f, std::size_t k, const McConfig& cfg, Vector& k1_vals,
                  Vector& l1_vals) {
  if (cfg.samples < 1) throw Error(Errc::BadArg, "sampling: need samples >= 1");
  if (k < 1 || k > f.rows()) throw Error(Errc::BadK, "sampling: k outside [1, n]");
  const std::size_t n = f.rows();
  const std::size_t m = f.cols();
  const long long total = cfg.samples;
  k1_vals.resize(static_cast<std::size_t>(total));
  l1_vals.resize(static_cast<std::size_t>(total));

  const long long chunks = (total + kChunk - 1) / kChunk;
  auto run_chunk = [&](long long ci) {
    Vector y(m), fy(n), mags(n);
    const long long begin = ci * kChunk;
    const long long end = std::min(total, begin + kChunk);
    for (long long s = begin; s < end; ++s) {
      Xoshiro256pp rng = Xoshiro256pp::substream(cfg.seed, static_cast<std::uint64_t>(s));
      draw(rng, cfg.model, cfg.delta, y);
      for (std::size_t i = 0; i < n; ++i) fy[i] = kernels::dot(f.row_ptr(i), y.data(), m);
      l1_vals[static_cast<std::size_t>(s)] = kernels::sum_abs(fy.data(), n);
      for (std::size_t i = 0; i < n; ++i) mags[i] = std::fabs(fy[i]);
      std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k - 1),
                       mags.end(), std::greater<double>());
      k1_vals[static_cast<std::size_t>(s)] = kernels::sum(mags.data(), k);
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1 || chunks == 1) {
    for (long long ci = 0; ci < chunks; ++ci) run_chunk(ci);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (long long ci = t; ci < chunks; ci += threads) run_chunk(ci);
      });
    for (auto& th : pool) th.join();
  }
}

McStats stats_of(const Vector& vals) {
  McStats s;
  s.samples = static_cast<long long>(vals.size());
  const double n = static_cast<double>(vals.size());
  const double sum = kernels::sum(vals.data(), vals.size());
  s.mean = sum / n;
  if (vals.size() > 1) {
    double ss = 0.0;
    for (double v : vals) ss += (v - s.mean) * (v - s.mean);
    s.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

}  // namespace

NormStats empirical_norm_stats(const Matrix& f, std::size_t k, const McConfig& cfg) {
  Vector k1_vals, l1_vals;
  sample_norms(f, k, cfg, k1_vals, l1_vals);
  return NormStats{stats_of(k1_vals), stats_of(l1_vals)};
}

TailReport verify_concentration(const Matrix& f, std::size_t k, const McConfig& cfg,
                                const std::vector<double>& x_grid, TailSide side, double scale,
                                std::optional<double> exact_mean) {
  if (!(scale > 0.0)) throw Error(Errc::BadArg, "verify_concentration: scale must be positive");
  Vector k1_vals, l1_vals;
  sample_norms(f, k, cfg, k1_vals, l1_vals);
  const Vector& vals = side == TailSide::UpperK1 ? k1_vals : l1_vals;

  TailReport rep;
  rep.side = side;
  rep.scale = scale;
  rep.samples = cfg.samples;
  rep.mean_is_exact = exact_mean.has_value();
  rep.mean_used = exact_mean ? *exact_mean : stats_of(vals).mean;

  const double n = static_cast<double>(vals.size());
  for (double x : x_grid) {
    if (x < 0.0) throw Error(Errc::BadArg, "verify_concentration: negative grid point");
    long long hits = 0;
    if (side == TailSide::UpperK1) {
      for (double v : vals) hits += v >= rep.mean_used + x;
    } else {
      for (double v : vals) hits += v <= rep.mean_used - x;
    }
    TailPoint pt;
    pt.x = x;
    pt.frequency = static_cast<double>(hits) / n;
    const double t = x / scale;
    pt.bound_exp = std::exp(-0.5 * t * t);
    pt.bound_cdf = std::erfc(t / std::sqrt(2.0));
    pt.binom_std_error = std::sqrt(pt.frequency * (1.0 - pt.frequency) / n);
    pt.violation = pt.frequency > pt.bound_exp + 3.0 * pt.binom_std_error;
    rep.points.push_back(pt);
  }
  return rep;
}

double chi_mean(std::size_t m) {
  if (m < 1) throw Error(Errc::BadArg, "chi_mean: m must be >= 1");
  const double md = static_cast<double>(m);
  return std::exp(0.5 * std::log(2.0 / md) + std::lgamma(0.5 * (md + 1.0)) -
                  std::lgamma(0.5 * md));
}

ChiSupBound chi_sup_bound(double log_card_t, std::size_t m) {
  if (log_card_t < 0.0) throw Error(Errc::BadArg, "chi_sup_bound: log|T| must be nonnegative");
  if (m < 1) throw Error(Errc::BadArg, "chi_sup_bound: m must be >= 1");
  const double md = static_cast<double>(m);
  const double head = std::sqrt(2.0 * log_card_t);
  const double gamma_term =
      std::exp(0.5 * std::log(2.0) + std::lgamma(0.5 * (md + 1.0)) - std::lgamma(0.5 * md));
  return ChiSupBound{head + gamma_term, head + std::sqrt(md)};
}

std::pair<double, double> appendix_tails(std::size_t n, std::size_t m, std::size_t k, double x) {
  if (n < 1 || m < 1 || k < 1 || x < 0.0)
    throw Error(Errc::BadArg, "appendix_tails: positive arguments required");
  const double md = static_cast<double>(m);
  const double rows = std::exp(-md * x * x / (2.0 * static_cast<double>(n)));
  const double sig = std::exp(-md * x * x / (2.0 * static_cast<double>(k)));
  return {rows, sig};
}

EnsembleReport gaussian_ensemble_report(std::size_t n, std::size_t m, std::size_t k, int trials,
                                        std::uint64_t seed) {
  if (n < 1 || m < 1 || trials < 1) throw Error(Errc::BadArg, "ensemble: bad dimensions");
  if (k < 1 || k > n) throw Error(Errc::BadK, "ensemble: k outside [1, n]");
  EnsembleReport rep;
  rep.n = n;
  rep.m = m;
  rep.k = k;
  rep.trials = trials;
  rep.seed = seed;
  rep.predicted_row_norm_mean = chi_mean(m);

  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  for (int t = 0; t < trials; ++t) {
    Xoshiro256pp rng = Xoshiro256pp::substream(seed, static_cast<std::uint64_t>(t));
    Matrix f(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) f(i, j) = inv_sqrt_m * rng.next_normal();

    EnsembleTrial trial;
    for (std::size_t i = 0; i < n; ++i)
      trial.sum_row_norms += std::sqrt(kernels::sum_sq(f.row_ptr(i), m));
    const double spec = spectral_norm(f);
    const double lmax = spec * spec;
    const double l2_quick = static_cast<double>(n) * lmax;
    trial.l_upper = std::sqrt(l2_quick);
    trial.sigma_upper = std::sqrt(std::min(static_cast<double>(k) * lmax, l2_quick));
    rep.per_trial.push_back(trial);

    rep.mean_sum_row_norms += trial.sum_row_norms;
    rep.mean_l_upper += trial.l_upper;
    rep.mean_sigma_upper += trial.sigma_upper;
  }
  rep.mean_sum_row_norms /= trials;
  rep.mean_l_upper /= trials;
  rep.mean_sigma_upper /= trials;
  return rep;
}

}  // namespace nsp
