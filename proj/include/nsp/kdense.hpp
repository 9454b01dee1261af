#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsp/matrix_core.hpp"
#include "nsp/sdp.hpp"

namespace nsp {

/// k-Dense-Subgraph instance for sigma_k^2: the 2n x 2n weight matrix
/// M = [[1,-1],[-1,1]] (x) G built from the Gram matrix G = F F'.
struct KDenseInstance {
  Matrix m;       // 2n x 2n, PSD
  std::size_t n;  // underlying dimension
  std::size_t k;  // cardinality budget, 1 <= k <= n
};

KDenseInstance build_instance(const Matrix& gram, std::size_t k);
KDenseInstance build_instance(const NullspaceBasis& basis, std::size_t k);

/// Exact sigma_k^2 by enumeration over v in {-1,0,1}^n with at most k
/// nonzeros (n <= 14).
double sigma_exact_bruteforce(const Matrix& gram, std::size_t k);

struct RelaxValue {
  double value = 0.0;        // certified (dual-repaired) upper bound
  double solver_value = 0.0; // raw primal objective
  SdpStatus status = SdpStatus::IterCap;
  int iterations = 0;
  Matrix x;                  // primal block in the instance dimension
};

/// Quadratic-knapsack style relaxations. Each solves one dense SDP and
/// certifies the reported value by dual repair; a redundant Tr X <= k row
/// supplies the identity direction.
RelaxValue sqk2_upper(const KDenseInstance& inst, bool with_addc = false, int max_added = 10,
                      const SdpOptions& opt = SdpOptions{});
RelaxValue sqk3_upper(const KDenseInstance& inst, const SdpOptions& opt = SdpOptions{});

/// Moment-matrix relaxation of the {-1,1} formulation. The exact-cardinality
/// program is solved for every j in [1, k] and the maximum is returned, which
/// keeps the value an upper bound on sigma_k^2.
RelaxValue feige_upper(const KDenseInstance& inst, const SdpOptions& opt = SdpOptions{});

/// maximize Tr(M X), Tr X = k, 0 <= X_ij <= 1, X >= 0.
RelaxValue sdpk_upper(const KDenseInstance& inst, const SdpOptions& opt = SdpOptions{});

struct GreedyPrune {
  std::vector<std::size_t> subset;  // exactly k indices of I
  double weight;                    // 1_S' M 1_S for the kept subset
};

/// Backward greedy: repeatedly drop the vertex whose removal loses the least
/// induced weight (ties to the lowest index) until k remain.
GreedyPrune greedy_prune(const Matrix& m, const std::vector<std::size_t>& index_set,
                         std::size_t k);

struct HybridRound {
  double value = 0.0;
  std::vector<double> w0;  // 0/1 vector in the instance dimension, Card <= k
};

/// Hybrid randomized rounding of an SDP_k primal: Gaussian sign sampling on
/// the correlation of X combined with sparse Bernoulli selection, greedy
/// pruning of oversize samples. Value is a lower bound on sigma_k^2.
HybridRound hybrid_round_lower(const KDenseInstance& inst, const Matrix& x, int samples,
                               std::uint64_t seed);

/// Approximation-ratio factor mu(n, k); OutOfRegime when k < n^(1/3) or the
/// denominator is not positive.
double approx_ratio_mu(double n, double k);

struct SigmaMethods {
  bool quick = true;
  bool sqk2 = false;
  bool sqk2_plus = false;
  bool sqk3 = false;
  bool feige = false;
  bool sdpk = false;
  bool exact = false;     // brute force (n <= 14 only, k = 1 always exact)
  bool rounding = false;  // hybrid rounding lower bound (solves SDP_k)
};

struct MethodDiag {
  std::string method;
  double certified = 0.0;
  double solver_value = 0.0;
  SdpStatus status = SdpStatus::Converged;
  int iterations = 0;
};

struct SigmaBoundReport {
  std::size_t n = 0, k = 0;
  std::optional<double> sqk2, sqk2_plus, sqk3, feige, sdpk;
  double quick = 0.0;
  std::optional<double> exact;
  std::optional<double> rounding_lower;
  double chosen_upper = 0.0;
  double chosen_lower = 0.0;
  std::vector<MethodDiag> diagnostics;
};

/// Aggregate the requested bounds on sigma_k^2 for a Gram matrix.
/// l2_upper_hint, when given, must be a valid upper bound on L^2 and sharpens
/// the quick bound (sigma_k <= sigma_n = L).
SigmaBoundReport sigma_bounds(const Matrix& gram, std::size_t k, const SigmaMethods& methods,
                              int samples = 1000, std::uint64_t seed = 0,
                              std::optional<double> l2_upper_hint = std::nullopt,
                              const SdpOptions& opt = SdpOptions{});

}  // namespace nsp
