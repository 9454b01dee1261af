#include <cmath>

#include "doctest.h"
#include "nsp/maxcut.hpp"
#include "nsp/rng.hpp"

using nsp::Matrix;

namespace {

constexpr double kTwoOverPi = 0.63661977236758134308;

Matrix random_psd(nsp::Xoshiro256pp& g, std::size_t n, std::size_t rank) {
  Matrix f(n, rank);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < rank; ++j) f(i, j) = g.next_normal();
  return nsp::matmul_abt(f, f);
}

Matrix ones_matrix(std::size_t n) { return Matrix(n, n, 1.0); }

}  // namespace

TEST_SUITE("maxcut") {

TEST_CASE("brute force on tiny grams") {
  CHECK(nsp::l_exact_bruteforce(Matrix::identity(2)) == doctest::Approx(2.0));
  CHECK(nsp::l_exact_bruteforce(ones_matrix(2)) == doctest::Approx(4.0));
  Matrix flip(2, 2);
  flip(0, 0) = flip(1, 1) = 1.0;
  flip(0, 1) = flip(1, 0) = -1.0;
  CHECK(nsp::l_exact_bruteforce(flip) == doctest::Approx(4.0));
  CHECK_THROWS_AS((void)nsp::l_exact_bruteforce(Matrix::identity(21)), nsp::Error);
}

TEST_CASE("brute force agrees with direct enumeration") {
  nsp::Xoshiro256pp g(11);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix gram = random_psd(g, 7, 4);
    double slow = 0.0;
    for (int bits = 0; bits < (1 << 7); ++bits) {
      nsp::Vector v(7);
      for (int i = 0; i < 7; ++i) v[i] = (bits >> i) & 1 ? 1.0 : -1.0;
      double val = 0.0;
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) val += v[i] * gram(i, j) * v[j];
      slow = std::max(slow, val);
    }
    CHECK(nsp::l_exact_bruteforce(gram) == doctest::Approx(slow).epsilon(1e-10));
  }
}

TEST_CASE("upper bounds on reference grams") {
  auto [sdp_i, quick_i] = nsp::maxcut_upper(Matrix::identity(2));
  CHECK(sdp_i == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(quick_i == doctest::Approx(2.0));

  auto [sdp_j, quick_j] = nsp::maxcut_upper(ones_matrix(2));
  CHECK(sdp_j == doctest::Approx(4.0).epsilon(1e-5));
  CHECK(quick_j == doctest::Approx(4.0));
}

TEST_CASE("pi/2 sandwich against brute force") {
  nsp::Xoshiro256pp g(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(g.next_uniform() * 13);  // up to 16
    Matrix gram = random_psd(g, n, (n + 1) / 2);
    auto [upper_sdp, upper_quick] = nsp::maxcut_upper(gram);
    const double exact = nsp::l_exact_bruteforce(gram);
    CHECK(kTwoOverPi * upper_sdp <= exact * (1.0 + 1e-9) + 1e-12);
    CHECK(exact <= upper_sdp * (1.0 + 1e-6));
    CHECK(upper_sdp <= upper_quick * (1.0 + 1e-6) + 1e-9);
  }
}

TEST_CASE("rounding on degenerate grams") {
  // identity gram: every sign vector achieves the optimum
  auto r = nsp::gw_round_lower(Matrix::identity(2), Matrix::identity(2), 5, 123);
  CHECK(r.value == doctest::Approx(2.0));

  // rank-one gram with aligned X: rounding recovers the aligned cut
  auto r2 = nsp::gw_round_lower(ones_matrix(2), ones_matrix(2), 5, 123);
  CHECK(r2.value == doctest::Approx(4.0));
}

TEST_CASE("rounding rejects X far from unit diagonal") {
  Matrix bad = Matrix::identity(2);
  bad(0, 0) = 1.01;
  CHECK_THROWS_AS((void)nsp::gw_round_lower(Matrix::identity(2), bad, 5, 1), nsp::Error);
}

TEST_CASE("rounding lower bound and the pi/2 guarantee") {
  nsp::Xoshiro256pp g(47);
  int hits = 0;
  const int runs = 100;
  for (int trial = 0; trial < runs; ++trial) {
    Matrix gram = random_psd(g, 10, 5);
    auto rep = nsp::l_bounds(gram, 1000, 1000 + trial, true);
    CHECK(rep.lower <= *rep.exact * (1.0 + 1e-9));
    CHECK(rep.lower <= std::min(rep.upper_sdp, rep.upper_quick) + 1e-6 * rep.upper_sdp);
    if (rep.lower >= kTwoOverPi * rep.upper_sdp) ++hits;

    // best_v reproduces the reported value
    double val = 0.0;
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j) val += rep.best_v[i] * gram(i, j) * rep.best_v[j];
    CHECK(val == doctest::Approx(rep.lower).epsilon(1e-10));
  }
  CHECK(hits >= 95);
}

TEST_CASE("rounding value is nondecreasing in the sample count") {
  nsp::Xoshiro256pp g(7);
  Matrix gram = random_psd(g, 8, 4);
  auto s = nsp::maxcut_sdp(gram);
  double prev = -1.0;
  for (int samples : {1, 5, 20, 100}) {
    auto r = nsp::gw_round_lower(gram, s.x, samples, 99);
    CHECK(r.value >= prev);
    prev = r.value;
  }
}

}  // TEST_SUITE
