#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "nsp/matrix.hpp"

namespace nsp {

/// The three printed forms of the expectation log factor; Lemma21 is the
/// canonical default, Prop61 is what the tightness condition uses verbatim.
enum class LogVariant { Lemma21, Section4, Prop61 };

enum class NoiseModel { Gaussian, Bounded };

struct RecoveryParams {
  std::size_t n = 0;
  std::size_t k = 0;
  double alpha_k = 0.49;
  std::optional<double> beta;  // absent: solve for beta*
  LogVariant variant = LogVariant::Lemma21;
  NoiseModel model = NoiseModel::Gaussian;
  double delta = 1.0;  // bounded model half-width
  double c = 1.0;      // bounded model absolute constant
};

struct RecoveryCertificate {
  double lhs = 0.0;
  double rhs = 0.0;
  double beta_star = 0.0;
  double beta_used = 0.0;
  double probability = 0.0;
  bool certified = false;
  // inputs echoed for reproducibility
  double sigma_hat = 0.0;
  double l_hat = 0.0;
  double expectation_lhs = 0.0;  // bound on E|Fy|_{k,1} (or supplied estimate)
  double expectation_rhs = 0.0;  // E|Fy|_1 (exact form or supplied estimate)
  RecoveryParams params;
};

/// sqrt(2k(1+log(2n/k))) and friends.
double log_factor(std::size_t n, std::size_t k, LogVariant variant);

/// (tight, relaxed) bounds on E|Fy|_{k,1} / sigma_k: the binomial form via
/// log-gamma and its closed-form relaxation. tight <= relaxed always.
std::pair<double, double> expected_k1_bound(double sigma_k, std::size_t n, std::size_t k);

/// sqrt(2/pi) * sum of row norms.
double expected_l1(const Vector& row_norms);

/// Upper-tail values at deviation x for scale s: (exp(-x^2/2s^2),
/// 2(1 - Phi(x/s))); the second is the sharper one.
std::pair<double, double> tail_bounds(double x, double scale);

RecoveryCertificate certify_gaussian(double sigma_hat, double l_hat, double sum_row_norms,
                                     const RecoveryParams& params);

/// Bounded model with supplied expectation estimates.
RecoveryCertificate certify_bounded(double e_k1_hat, double e_l1_hat, double sigma_hat,
                                    double l_hat, const RecoveryParams& params);

/// sigma * sqrt(pi * log|V|), log-count supplied to avoid overflow.
double majorization_bound(double sigma, double log_card_v);

/// Sample count for estimating the norms to precision eps at confidence
/// 1 - beta, clamped to at least 1.
long long hoeffding_samples(double d_bound, double epsilon, double beta);

/// 2 / (1 - 2 alpha_k); BadAlpha at or beyond one half.
double error_amplification(double alpha_k);

struct RipImplied {
  double sigma_upper;
  double row_norm_lower;
  double l_upper;
};
RipImplied rip_implied(double delta_k, double delta_1, std::size_t k, std::size_t n);

/// Finite-n certification inequality with the relaxation value in place of
/// sigma_k^2, written exactly in the Prop61 log form.
bool tightness_condition(double sdpk_value, double sum_row_norms, double l_hat,
                         double alpha_kstar, double beta, std::size_t n, std::size_t k);

}  // namespace nsp
