#include "nsp/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "nsp/kernels.hpp"

namespace nsp {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

double gaussian_probability(double beta) {
  return clamp01(1.0 - 2.0 * std::exp(-0.5 * beta * beta));
}

double bounded_probability(double beta, double c, double delta) {
  return clamp01(1.0 - 2.0 * c * std::exp(-beta * beta / (c * delta * delta)));
}

// Shared certificate algebra: lhs(beta) = E_lhs + beta sigma,
// rhs(beta) = (E_rhs - beta L) alpha, beta* the crossing point. The
// probability is evaluated at the requested beta when the certificate holds
// there, at max(beta*, 0) otherwise, and is zero whenever beta* < 0.
RecoveryCertificate evaluate(double e_lhs, double sigma_hat, double e_rhs, double l_hat,
                             const RecoveryParams& params) {
  RecoveryCertificate cert;
  cert.params = params;
  cert.sigma_hat = sigma_hat;
  cert.l_hat = l_hat;
  cert.expectation_lhs = e_lhs;
  cert.expectation_rhs = e_rhs;

  const double alpha = params.alpha_k;
  cert.beta_star = (alpha * e_rhs - e_lhs) / (sigma_hat + alpha * l_hat);

  const double beta = params.beta ? *params.beta : std::max(cert.beta_star, 0.0);
  cert.beta_used = beta;
  cert.lhs = e_lhs + beta * sigma_hat;
  cert.rhs = (e_rhs - beta * l_hat) * alpha;
  cert.certified = cert.lhs <= cert.rhs;

  const double beta_eff = cert.certified ? beta : std::max(cert.beta_star, 0.0);
  cert.probability = params.model == NoiseModel::Gaussian
                         ? gaussian_probability(beta_eff)
                         : bounded_probability(beta_eff, params.c, params.delta);
  if (cert.beta_star < 0.0) cert.probability = 0.0;
  return cert;
}

}  // namespace

double log_factor(std::size_t n, std::size_t k, LogVariant variant) {
  if (k < 1 || k > n) throw Error(Errc::BadK, "log_factor: k outside [1, n]");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  double inner = 0.0;
  switch (variant) {
    case LogVariant::Lemma21: inner = 1.0 + std::log(2.0 * nd / kd); break;
    case LogVariant::Section4: inner = std::log(1.0 + 2.0 * nd / kd); break;
    case LogVariant::Prop61: inner = std::log(2.0 * nd / kd); break;
  }
  return std::sqrt(std::max(0.0, 2.0 * kd * inner));
}

std::pair<double, double> expected_k1_bound(double sigma_k, std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw Error(Errc::BadK, "expected_k1_bound: k outside [1, n]");
  if (sigma_k < 0.0) throw Error(Errc::BadArg, "expected_k1_bound: sigma must be nonnegative");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  const double log_count = kd * std::log(2.0) + std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
                           std::lgamma(nd - kd + 1.0);
  const double tight = sigma_k * std::sqrt(2.0 * log_count);
  const double relaxed = sigma_k * log_factor(n, k, LogVariant::Lemma21);
  return {tight, relaxed};
}

double expected_l1(const Vector& row_norms) {
  return std::sqrt(2.0 / kPi) * kernels::sum(row_norms.data(), row_norms.size());
}

std::pair<double, double> tail_bounds(double x, double scale) {
  if (x < 0.0 || !(scale > 0.0)) throw Error(Errc::BadArg, "tail_bounds: need x >= 0, scale > 0");
  const double t = x / scale;
  const double exp_form = std::exp(-0.5 * t * t);
  const double cdf_form = std::erfc(t / std::sqrt(2.0));
  return {exp_form, cdf_form};
}

RecoveryCertificate certify_gaussian(double sigma_hat, double l_hat, double sum_row_norms,
                                     const RecoveryParams& params) {
  if (sigma_hat < 0.0 || l_hat < 0.0)
    throw Error(Errc::BadArg, "certify: bounds must be nonnegative");
  RecoveryParams p = params;
  p.model = NoiseModel::Gaussian;
  const double e_lhs = sigma_hat * log_factor(p.n, p.k, p.variant);
  const double e_rhs = std::sqrt(2.0 / kPi) * sum_row_norms;
  return evaluate(e_lhs, sigma_hat, e_rhs, l_hat, p);
}

RecoveryCertificate certify_bounded(double e_k1_hat, double e_l1_hat, double sigma_hat,
                                    double l_hat, const RecoveryParams& params) {
  if (sigma_hat < 0.0 || l_hat < 0.0)
    throw Error(Errc::BadArg, "certify: bounds must be nonnegative");
  if (!(params.delta > 0.0) || !(params.c > 0.0))
    throw Error(Errc::BadArg, "certify_bounded: delta and c must be positive");
  RecoveryParams p = params;
  p.model = NoiseModel::Bounded;
  return evaluate(e_k1_hat, sigma_hat, e_l1_hat, l_hat, p);
}

double majorization_bound(double sigma, double log_card_v) {
  if (sigma < 0.0 || log_card_v < 0.0)
    throw Error(Errc::BadArg, "majorization_bound: nonnegative arguments required");
  return sigma * std::sqrt(kPi * log_card_v);
}

long long hoeffding_samples(double d_bound, double epsilon, double beta) {
  if (!(d_bound > 0.0) || !(epsilon > 0.0) || !(beta > 0.0))
    throw Error(Errc::BadArg, "hoeffding_samples: need D, eps, beta > 0");
  const double raw = d_bound * d_bound * std::log(2.0 / beta) / (2.0 * epsilon * epsilon);
  if (!(raw > 0.0)) return 1;
  return std::max(1ll, static_cast<long long>(std::ceil(raw)));
}

double error_amplification(double alpha_k) {
  if (!(alpha_k >= 0.0) || alpha_k >= 0.5)
    throw Error(Errc::BadAlpha, "error_amplification: requires 0 <= alpha < 1/2");
  return 2.0 / (1.0 - 2.0 * alpha_k);
}

RipImplied rip_implied(double delta_k, double delta_1, std::size_t k, std::size_t n) {
  if (!(delta_k > 0.0) || delta_k > 1.0 || !(delta_1 > 0.0) || delta_1 > 1.0)
    throw Error(Errc::BadArg, "rip_implied: constants must be in (0, 1]");
  if (k < 1 || k > n) throw Error(Errc::BadK, "rip_implied: k outside [1, n]");
  RipImplied out;
  out.sigma_upper = std::sqrt(static_cast<double>(k) * (1.0 + delta_k));
  out.row_norm_lower = std::sqrt(1.0 - delta_1);
  out.l_upper = static_cast<double>(n) / static_cast<double>(k) * out.sigma_upper;
  return out;
}

bool tightness_condition(double sdpk_value, double sum_row_norms, double l_hat,
                         double alpha_kstar, double beta, std::size_t n, std::size_t k) {
  if (!(sdpk_value >= 0.0)) throw Error(Errc::BadArg, "tightness_condition: negative relaxation");
  const double lhs = (log_factor(n, k, LogVariant::Prop61) + beta) * std::sqrt(sdpk_value);
  const double rhs = (std::sqrt(2.0 / kPi) * sum_row_norms - beta * l_hat) * alpha_kstar;
  return lhs <= rhs;
}

}  // namespace nsp
