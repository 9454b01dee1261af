#pragma once

#include <cstddef>
#include <optional>

#include "nsp/matrix.hpp"

namespace nsp {

struct BpOptions {
  double tol = 1e-8;      // duality-gap and residual target
  int iter_cap = 100000;
  double rho = 1.0;
  bool polish = true;     // support least-squares with an exact dual certificate
};

struct BpResult {
  Vector x;
  double objective = 0.0;     // |x|_1
  double residual = 0.0;      // |Ax - b|_2
  double duality_gap = 0.0;   // against a scaled dual-feasible point
  int iterations = 0;
  bool converged = false;
  bool polished = false;
};

/// Basis pursuit min |x|_1 s.t. Ax = b by operator splitting with the
/// affine projection backed by a cached factorization of AA'. Requires A
/// full row rank and b in its range. When the soft-threshold iterate
/// identifies a support whose least-squares solution admits an exact dual
/// certificate, that vertex is returned (polish).
BpResult basis_pursuit(const Matrix& a, const Vector& b, const BpOptions& opt = BpOptions{});

struct RecoveryTrial {
  Vector e;
  Vector x_lp;
  Vector eta;             // x_lp - e
  bool success = false;   // |eta|_inf <= success_tol
  double success_tol = 0.0;
  double nsp_ratio = 0.0;
  bool nsp_ratio_defined = false;  // false when eta == 0
  double eta_l1 = 0.0;
  double a_eta_norm = 0.0;  // |A eta|_2, nullspace membership diagnostic
  bool decoder_converged = false;
};

RecoveryTrial recovery_trial(const Matrix& a, const Vector& e, std::size_t k,
                             std::optional<double> success_tol = std::nullopt,
                             const BpOptions& opt = BpOptions{});

/// |e|_1 minus the k largest magnitudes.
double best_k_term_error(const Vector& e, std::size_t k);

struct Prop21Check {
  bool applicable = false;  // nsp_ratio defined and <= alpha < 1/2
  bool holds = false;       // vacuously true when not applicable
  double lhs = 0.0;         // |eta|_1
  double rhs = 0.0;         // 2/(1-2 alpha) * best_k_term_error + 1e-8
};

Prop21Check check_prop21(const RecoveryTrial& trial, std::size_t k, double alpha);

}  // namespace nsp
