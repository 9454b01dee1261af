#pragma once

#include <cstdint>
#include <optional>

#include "nsp/sdp.hpp"

namespace nsp {

/// Two-sided bounds on L^2 = max over sign vectors v of v' G v, for a PSD
/// Gram matrix G.
struct LBoundReport {
  double lower = 0.0;        // best rounded sign vector value
  double upper_sdp = 0.0;    // dual-repaired relaxation bound
  double upper_quick = 0.0;  // n * lambda_max(G)
  double sdp_objective = 0.0;  // raw solver primal value (diagnostic)
  std::optional<double> exact;
  Vector best_v;
  SdpStatus solver_status = SdpStatus::IterCap;
  int solver_iterations = 0;
};

/// The relaxation: maximize Tr(G X), diag(X) = 1, X >= 0, with the diagonal
/// rows as the identity direction for dual repair.
SdpProblem maxcut_problem(const Matrix& gram);

/// Exact maximum by enumeration of sign vectors (n <= 20; uses v ~ -v).
double l_exact_bruteforce(const Matrix& gram);

struct MaxcutSdp {
  double upper_repaired;  // certified
  double solver_value;
  Matrix x;
  SdpStatus status;
  int iterations;
};
MaxcutSdp maxcut_sdp(const Matrix& gram, const SdpOptions& opt = SdpOptions{});

/// (upper_sdp, upper_quick); both certified upper bounds on L^2.
std::pair<double, double> maxcut_upper(const Matrix& gram, const SdpOptions& opt = SdpOptions{});

struct GwRound {
  double value = 0.0;
  Vector best_v;
};

/// Sign rounding of Gaussian samples z ~ N(0, X). X is clipped to the PSD
/// cone and renormalized to unit diagonal; deviations beyond 1e-6 are BadX.
/// Deterministic in (seed); per-sample substreams make the result
/// nondecreasing in the sample count.
GwRound gw_round_lower(const Matrix& gram, const Matrix& x, int samples, std::uint64_t seed);

/// Full report: SDP + quick uppers, rounding lower, optional brute force.
LBoundReport l_bounds(const Matrix& gram, int samples, std::uint64_t seed, bool want_exact,
                      const SdpOptions& opt = SdpOptions{});

}  // namespace nsp
