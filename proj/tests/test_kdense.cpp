#include <cmath>

#include "doctest.h"
#include "nsp/kdense.hpp"
#include "nsp/maxcut.hpp"
#include "nsp/rng.hpp"

using nsp::KDenseInstance;
using nsp::Matrix;
using nsp::Vector;

namespace {

Matrix random_psd(nsp::Xoshiro256pp& g, std::size_t n, std::size_t rank) {
  Matrix f(n, rank);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < rank; ++j) f(i, j) = g.next_normal();
  return nsp::matmul_abt(f, f);
}

Matrix ones_matrix(std::size_t n) { return Matrix(n, n, 1.0); }

// Independent oracle for sigma_k^2: enumerate supports and sign patterns
// directly (no shared code with the library brute force).
double sigma_oracle(const Matrix& gram, std::size_t k) {
  const std::size_t n = gram.rows();
  double best = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > k) continue;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    for (std::uint32_t p = 0; p < (1u << idx.size()); ++p) {
      double val = 0.0;
      for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) {
          const double sa = (p >> a) & 1u ? -1.0 : 1.0;
          const double sb = (p >> b) & 1u ? -1.0 : 1.0;
          val += sa * sb * gram(idx[a], idx[b]);
        }
      best = std::max(best, val);
    }
  }
  return best;
}

// Exhaustive optimum of the k-subset weight over a small index set.
double subset_oracle(const Matrix& m, std::size_t k) {
  const std::size_t n = m.rows();
  double best = -1e300;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    double val = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if ((mask & (1u << a)) && (mask & (1u << b))) val += m(a, b);
    best = std::max(best, val);
  }
  return best;
}

}  // namespace

TEST_SUITE("kdense") {

TEST_CASE("instance construction") {
  Matrix one(1, 1);
  one(0, 0) = 1.0;
  auto inst = nsp::build_instance(one, 1);
  CHECK(inst.m(0, 0) == 1.0);
  CHECK(inst.m(0, 1) == -1.0);
  CHECK(inst.m(1, 0) == -1.0);
  CHECK(inst.m(1, 1) == 1.0);

  auto inst2 = nsp::build_instance(Matrix::identity(2), 2);
  REQUIRE(inst2.m.rows() == 4);
  CHECK(inst2.m(0, 2) == -1.0);
  CHECK(inst2.m(1, 3) == -1.0);
  CHECK(inst2.m(0, 3) == 0.0);

  // trace doubles and the Kronecker structure stays PSD
  nsp::Xoshiro256pp g(3);
  Matrix gram = random_psd(g, 5, 3);
  auto inst3 = nsp::build_instance(gram, 2);
  double tr_g = 0.0, tr_m = 0.0;
  for (std::size_t i = 0; i < 5; ++i) tr_g += gram(i, i);
  for (std::size_t i = 0; i < 10; ++i) tr_m += inst3.m(i, i);
  CHECK(tr_m == doctest::Approx(2.0 * tr_g));
  auto eig = nsp::sym_eig(inst3.m);
  CHECK(eig.values.front() >= -1e-9 * std::max(1.0, eig.values.back()));

  CHECK_THROWS_AS((void)nsp::build_instance(gram, 0), nsp::Error);
  CHECK_THROWS_AS((void)nsp::build_instance(gram, 6), nsp::Error);
}

TEST_CASE("sigma brute force on reference grams") {
  CHECK(nsp::sigma_exact_bruteforce(Matrix::identity(4), 2) == doctest::Approx(2.0));
  CHECK(nsp::sigma_exact_bruteforce(ones_matrix(2), 1) == doctest::Approx(1.0));
  CHECK(nsp::sigma_exact_bruteforce(ones_matrix(2), 2) == doctest::Approx(4.0));
  CHECK(nsp::sigma_exact_bruteforce(Matrix::identity(6), 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)nsp::sigma_exact_bruteforce(Matrix::identity(15), 1), nsp::Error);
}

TEST_CASE("sigma brute force matches the independent oracle") {
  nsp::Xoshiro256pp g(8);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix gram = random_psd(g, 6, 3);
    for (std::size_t k = 1; k <= 4; ++k)
      CHECK(nsp::sigma_exact_bruteforce(gram, k) ==
            doctest::Approx(sigma_oracle(gram, k)).epsilon(1e-10));
  }
}

TEST_CASE("monotonicity in k and the endpoints") {
  nsp::Xoshiro256pp g(21);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 5 + (trial % 3);
    Matrix gram = random_psd(g, n, (n + 1) / 2);
    double prev = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double cur = nsp::sigma_exact_bruteforce(gram, k);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, gram(i, i));
    CHECK(nsp::sigma_exact_bruteforce(gram, 1) == doctest::Approx(max_diag).epsilon(1e-9));
    CHECK(nsp::sigma_exact_bruteforce(gram, n) ==
          doctest::Approx(nsp::l_exact_bruteforce(gram)).epsilon(1e-9));
  }
}

TEST_CASE("relaxations on the 2x2 identity weight") {
  KDenseInstance k1{Matrix::identity(2), 1, 1};
  KDenseInstance k2{Matrix::identity(2), 1, 2};

  CHECK(nsp::sqk2_upper(k2).value == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(nsp::sqk3_upper(k2).value == doctest::Approx(2.0).epsilon(1e-3));
  CHECK_THROWS_AS((void)nsp::sqk3_upper(k1), nsp::Error);
  CHECK(nsp::feige_upper(k1).value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(nsp::feige_upper(k2).value == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(nsp::sdpk_upper(k1).value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(nsp::sdpk_upper(k2).value == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("certified uppers dominate the exact value") {
  nsp::Xoshiro256pp g(42);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix gram = random_psd(g, 4, 2);
    const std::size_t k = 1 + trial % 3;
    const double exact = nsp::sigma_exact_bruteforce(gram, k);
    auto inst = nsp::build_instance(gram, k);
    const double slack = 1e-6 * std::max(1.0, exact);

    const double sqk2 = nsp::sqk2_upper(inst).value;
    CHECK(sqk2 >= exact - slack);
    const double sqk2p = nsp::sqk2_upper(inst, true, 10).value;
    CHECK(sqk2p >= exact - slack);
    CHECK(sqk2p <= sqk2 + 1e-5 * std::max(1.0, sqk2));
    if (k >= 2) {
      const double sqk3 = nsp::sqk3_upper(inst).value;
      CHECK(sqk3 >= exact - slack);
      CHECK(sqk3 <= sqk2 + 1e-5 * std::max(1.0, sqk2));
    }
    CHECK(nsp::feige_upper(inst).value >= exact - slack);
    CHECK(nsp::sdpk_upper(inst).value >= exact - slack);
  }
}

TEST_CASE("greedy pruning") {
  // all-ones 4x4: any pair keeps weight 4, floor is 16/6
  auto pick = nsp::greedy_prune(ones_matrix(4), {0, 1, 2, 3}, 2);
  CHECK(pick.weight == doctest::Approx(4.0));
  CHECK(pick.subset.size() == 2);
  CHECK(pick.weight >= 16.0 * (2.0 / 12.0));

  CHECK_THROWS_AS((void)nsp::greedy_prune(ones_matrix(4), {0, 1}, 3), nsp::Error);
  CHECK_THROWS_AS((void)nsp::greedy_prune(ones_matrix(4), {0, 1, 2}, 1), nsp::Error);

  nsp::Xoshiro256pp g(12);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m = random_psd(g, 8, 4);
    std::vector<std::size_t> all{0, 1, 2, 3, 4, 5, 6, 7};
    const std::size_t k = 2 + trial % 4;
    auto res = nsp::greedy_prune(m, all, k);
    CHECK(res.subset.size() == k);
    // guarantee against the full-set weight
    double w_full = 0.0;
    for (std::size_t a = 0; a < 8; ++a)
      for (std::size_t b = 0; b < 8; ++b) w_full += m(a, b);
    const double floor =
        w_full * static_cast<double>(k * (k - 1)) / static_cast<double>(8 * 7);
    CHECK(res.weight >= floor - 1e-9);
    CHECK(res.weight <= subset_oracle(m, k) + 1e-9);
  }
}

TEST_CASE("hybrid rounding basics") {
  // diagonal weight: every sample value is the selected cardinality
  const std::size_t n = 6, k = 3;
  Matrix m = Matrix::identity(n);
  Matrix x(n, n);
  for (std::size_t i = 0; i < n; ++i) x(i, i) = static_cast<double>(k) / n;
  KDenseInstance inst{m, n / 2, k};
  auto hr = nsp::hybrid_round_lower(inst, x, 4000, 5);
  CHECK(hr.value == doctest::Approx(static_cast<double>(k)));
  double card = 0.0;
  for (double w : hr.w0) {
    CHECK((w == 0.0 || w == 1.0));
    card += w;
  }
  CHECK(card <= k);

  CHECK_THROWS_AS((void)nsp::hybrid_round_lower(inst, Matrix(n, n), 10, 1), nsp::Error);
}

TEST_CASE("hybrid rounding is sandwiched and pruned") {
  nsp::Xoshiro256pp g(33);
  int ratio_hits = 0;
  const int runs = 100;
  for (int trial = 0; trial < runs; ++trial) {
    Matrix gram = random_psd(g, 3, 2);
    const std::size_t k = 3;
    auto inst = nsp::build_instance(gram, k);
    const double exact = nsp::sigma_exact_bruteforce(gram, k);
    auto sdpk = nsp::sdpk_upper(inst);
    auto hr = nsp::hybrid_round_lower(inst, sdpk.x, 2000, 100 + trial);
    CHECK(hr.value <= exact * (1.0 + 1e-9) + 1e-12);
    double card = 0.0;
    for (double w : hr.w0) card += w;
    CHECK(card <= k);
    if (hr.value >= 0.25 * sdpk.value) ++ratio_hits;
  }
  CHECK(ratio_hits >= 90);
}

TEST_CASE("approximation ratio factor") {
  CHECK(nsp::approx_ratio_mu(100.0, 1e10) == doctest::Approx(1.0).epsilon(1e-3));
  // improves towards 1 as k grows
  const double a = nsp::approx_ratio_mu(100.0, 1e6);
  const double b = nsp::approx_ratio_mu(100.0, 1e9);
  CHECK(std::fabs(b - 1.0) < std::fabs(a - 1.0));
  CHECK_THROWS_AS((void)nsp::approx_ratio_mu(8.0, 2.0), nsp::Error);
  CHECK_THROWS_AS((void)nsp::approx_ratio_mu(1e6, 1e4), nsp::Error);
}

TEST_CASE("sigma_bounds aggregation") {
  nsp::Xoshiro256pp g(55);
  Matrix f(8, 4);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 4; ++j) f(i, j) = g.next_normal();
  Matrix gram = nsp::matmul_abt(f, f);

  nsp::SigmaMethods methods;
  methods.sqk2 = methods.sqk3 = methods.feige = methods.sdpk = methods.exact = true;
  methods.rounding = true;
  auto rep = nsp::sigma_bounds(gram, 3, methods, 800, 9);
  REQUIRE(rep.exact.has_value());
  CHECK(rep.chosen_lower <= rep.chosen_upper * (1.0 + 1e-6));
  CHECK(*rep.exact >= rep.chosen_lower - 1e-9);
  CHECK(*rep.exact <= rep.chosen_upper * (1.0 + 1e-6));

  // k = 1 is exact via the diagonal
  auto rep1 = nsp::sigma_bounds(gram, 1, nsp::SigmaMethods{});
  double max_diag = 0.0;
  for (std::size_t i = 0; i < 8; ++i) max_diag = std::max(max_diag, gram(i, i));
  CHECK(rep1.exact.has_value());
  CHECK(*rep1.exact == doctest::Approx(max_diag));

  // k = n matches the maxcut endpoint
  auto [l_sdp, l_quick] = nsp::maxcut_upper(gram);
  auto repn = nsp::sigma_bounds(gram, 8, nsp::SigmaMethods{}, 0, 0, l_sdp);
  CHECK(repn.chosen_upper <= l_sdp * (1.0 + 1e-9));
}

TEST_CASE("identity gram aggregation") {
  auto rep = nsp::sigma_bounds(Matrix::identity(4), 1, nsp::SigmaMethods{});
  REQUIRE(rep.exact.has_value());
  CHECK(*rep.exact == doctest::Approx(1.0));
  CHECK(rep.chosen_upper >= 1.0 - 1e-12);
  CHECK(rep.quick >= 1.0 - 1e-12);
}

}  // TEST_SUITE
