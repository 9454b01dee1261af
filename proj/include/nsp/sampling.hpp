#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nsp/matrix.hpp"

namespace nsp {

enum class McModel { Gaussian, BoundedUniform, Rademacher };

struct McConfig {
  long long samples = 100000;
  std::uint64_t seed = 0;
  McModel model = McModel::Gaussian;
  double delta = 1.0;  // bounded-model half width
  int threads = 1;
};

struct McStats {
  double mean = 0.0;
  double std_error = 0.0;
  long long samples = 0;
};

struct NormStats {
  McStats k1;  // |Fy|_{k,1}
  McStats l1;  // |Fy|_1
};

/// Sample means and standard errors of |Fy|_{k,1} and |Fy|_1 under the
/// configured model. Bit-for-bit reproducible for a fixed (seed, samples),
/// independent of the thread count.
NormStats empirical_norm_stats(const Matrix& f, std::size_t k, const McConfig& cfg);

enum class TailSide { UpperK1, LowerL1 };

struct TailPoint {
  double x = 0.0;
  double frequency = 0.0;
  double bound_exp = 0.0;   // exp(-x^2 / 2 scale^2)
  double bound_cdf = 0.0;   // 2 (1 - Phi(x / scale)), the sharper variant
  double binom_std_error = 0.0;
  bool violation = false;   // frequency > bound_exp + 3 stderr
};

struct TailReport {
  TailSide side = TailSide::UpperK1;
  double scale = 0.0;
  double mean_used = 0.0;
  bool mean_is_exact = false;
  long long samples = 0;
  std::vector<TailPoint> points;
};

/// Empirical tail frequencies against the concentration bounds at the given
/// deviations. scale is sigma_k (upper tail of |Fy|_{k,1}) or L (lower tail
/// of |Fy|_1); pass exact_mean when the expectation is known in closed form,
/// otherwise the sample mean of this run is used.
TailReport verify_concentration(const Matrix& f, std::size_t k, const McConfig& cfg,
                                const std::vector<double>& x_grid, TailSide side, double scale,
                                std::optional<double> exact_mean = std::nullopt);

/// E chi_m / sqrt(m): mean of a row norm for i.i.d. N(0, 1/m) entries.
double chi_mean(std::size_t m);

struct ChiSupBound {
  double gamma_form;   // sqrt(2 log|T|) + sqrt(2) Gamma((m+1)/2) / Gamma(m/2)
  double sqrt_m_form;  // sqrt(2 log|T|) + sqrt(m)
};
ChiSupBound chi_sup_bound(double log_card_t, std::size_t m);

/// (exp(-m x^2 / 2n), exp(-m x^2 / 2k)): the row-norm-sum and sigma_k
/// concentration tails for the Gaussian ensemble.
std::pair<double, double> appendix_tails(std::size_t n, std::size_t m, std::size_t k, double x);

struct EnsembleTrial {
  double sum_row_norms = 0.0;
  double l_upper = 0.0;      // sqrt(n) |F|_2
  double sigma_upper = 0.0;  // sqrt(min(k lmax, n lmax))
};

struct EnsembleReport {
  std::size_t n = 0, m = 0, k = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<EnsembleTrial> per_trial;
  double mean_sum_row_norms = 0.0;
  double mean_l_upper = 0.0;
  double mean_sigma_upper = 0.0;
  double predicted_row_norm_mean = 0.0;  // chi_mean(m)
};

/// Statistics of random F with i.i.d. N(0, 1/m) entries: per-trial row-norm
/// sums and quick bounds, against the chi-mean prediction.
EnsembleReport gaussian_ensemble_report(std::size_t n, std::size_t m, std::size_t k, int trials,
                                        std::uint64_t seed);

}  // namespace nsp
