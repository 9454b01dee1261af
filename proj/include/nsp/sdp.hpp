#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "nsp/matrix.hpp"

namespace nsp {

// Symmetric vectorization with sqrt(2) off-diagonal scaling, so that
// svec(A) . svec(B) = Tr(AB) and the PSD cone is self-dual.
std::size_t svec_len(std::size_t d);
Vector svec(const Matrix& s);
Matrix unsvec(const Vector& v, std::size_t d);

/// Projection onto the PSD cone by eigenvalue clipping.
Matrix psd_project(const Matrix& s);

struct SdpConstraint {
  Matrix a;                   // d x d symmetric
  double b = 0.0;
  bool is_inequality = false; // Tr(a X) <= b; equality otherwise
};

/// maximize Tr(C X) over X >= 0 subject to linear constraints and an
/// optional elementwise box 0 <= X_ij <= 1. `identity_direction` lists
/// (constraint index, weight) pairs whose weighted constraint matrices sum
/// to the identity; it is what makes certified dual repair possible.
struct SdpProblem {
  Matrix c;
  std::vector<SdpConstraint> constraints;
  bool box01 = false;
  std::vector<std::pair<std::size_t, double>> identity_direction;

  std::size_t dim() const { return c.rows(); }
};

enum class SdpStatus { Converged, IterCap, Infeasible };

struct SdpSolution {
  Matrix x;
  double objective = 0.0;       // Tr(C X) at the returned primal
  double dual_objective = 0.0;  // unrepaired weak-duality value
  Vector dual;                  // one multiplier per constraint, declared order,
                                // followed by internal box-row multipliers
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rel_gap = 0.0;
  int iterations = 0;
  SdpStatus status = SdpStatus::IterCap;
};

struct SdpOptions {
  double tol = 1e-6;
  int iter_cap = 50000;
  double over_relaxation = 1.5;
  double rho = 1.0;
};

/// Operator-splitting (ADMM) solve on the conic embedding: affine rows with
/// slack variables, PSD projection by eigenvalue clipping. Deterministic for
/// fixed inputs and options.
SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opt = SdpOptions{});

/// Certified upper bound on the optimum of `p` from an arbitrary dual
/// estimate: inequality multipliers are clamped nonnegative, the remaining
/// dual slack is made exactly PSD by shifting along the declared identity
/// direction, and the repaired dual objective is returned (weak duality).
/// A short estimate is padded with zeros; pass {} for the analytic point.
double dual_repair_identity(const SdpProblem& p, const Vector& dual_estimate);

}  // namespace nsp
