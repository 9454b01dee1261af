#include <cmath>

#include "doctest.h"
#include "nsp/io.hpp"
#include "nsp/matrix.hpp"
#include "nsp/rng.hpp"

using nsp::Matrix;
using nsp::Vector;

namespace {

Matrix random_matrix(nsp::Xoshiro256pp& g, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = g.next_normal();
  return m;
}

Matrix random_symmetric(nsp::Xoshiro256pp& g, std::size_t n) {
  Matrix m = random_matrix(g, n, n);
  return nsp::symmetrized(m);
}

}  // namespace

TEST_SUITE("matrix") {

TEST_CASE("matmul against hand example") {
  Matrix a(2, 3);
  a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
  a(1, 0) = 4; a(1, 1) = 5; a(1, 2) = 6;
  Matrix b(3, 2);
  b(0, 0) = 7; b(0, 1) = 8;
  b(1, 0) = 9; b(1, 1) = 10;
  b(2, 0) = 11; b(2, 1) = 12;
  Matrix c = nsp::matmul(a, b);
  CHECK(c(0, 0) == doctest::Approx(58));
  CHECK(c(0, 1) == doctest::Approx(64));
  CHECK(c(1, 0) == doctest::Approx(139));
  CHECK(c(1, 1) == doctest::Approx(154));
}

TEST_CASE("sym_eig small examples") {
  Matrix d(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  auto e = nsp::sym_eig(d);
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(2.0));

  Matrix f(2, 2);
  f(0, 1) = f(1, 0) = 1.0;
  e = nsp::sym_eig(f);
  CHECK(e.values[0] == doctest::Approx(-1.0));
  CHECK(e.values[1] == doctest::Approx(1.0));

  Matrix z(3, 3);
  e = nsp::sym_eig(z);
  for (double v : e.values) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("sym_eig rejects asymmetric input") {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 0.5;
  CHECK_THROWS_AS((void)nsp::sym_eig(m), nsp::Error);
}

TEST_CASE("sym_eig reconstruction on random matrices") {
  nsp::Xoshiro256pp g(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(g.next_uniform() * 49);
    Matrix s = random_symmetric(g, n);
    auto eig = nsp::sym_eig(s);
    const double snorm = std::max(std::fabs(eig.values.front()), std::fabs(eig.values.back()));

    // |S V - V diag(lambda)|_max <= 1e-8 |S|_2
    Matrix sv = nsp::matmul(s, eig.vectors);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst, std::fabs(sv(i, j) - eig.vectors(i, j) * eig.values[j]));
    CHECK(worst <= 1e-8 * std::max(snorm, 1e-12));

    Matrix vtv = nsp::matmul(nsp::transpose(eig.vectors), eig.vectors);
    for (std::size_t i = 0; i < n; ++i) vtv(i, i) -= 1.0;
    CHECK(nsp::max_abs(vtv) <= 1e-10);

    bool ascending = true;
    for (std::size_t i = 1; i < n; ++i) ascending = ascending && eig.values[i - 1] <= eig.values[i];
    CHECK(ascending);
  }
}

TEST_CASE("jacobi_svd matches sym_eig singular values") {
  nsp::Xoshiro256pp g(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t q = 2 + static_cast<std::size_t>(g.next_uniform() * 6);
    const std::size_t n = q + static_cast<std::size_t>(g.next_uniform() * 6);
    Matrix a = random_matrix(g, q, n);
    auto svd = nsp::jacobi_svd(a, 1e-12);
    REQUIRE(svd.rank == q);

    auto gram_eig = nsp::sym_eig(nsp::symmetrized(nsp::matmul_abt(a, a)));
    for (std::size_t i = 0; i < q; ++i) {
      const double from_eig = std::sqrt(std::max(0.0, gram_eig.values[q - 1 - i]));
      CHECK(svd.singular_values[i] == doctest::Approx(from_eig).epsilon(1e-9));
    }

    Matrix vtv = nsp::matmul(nsp::transpose(svd.right_vectors), svd.right_vectors);
    for (std::size_t i = 0; i < n; ++i) vtv(i, i) -= 1.0;
    CHECK(nsp::max_abs(vtv) <= 1e-12);
  }
}

TEST_CASE("spectral norm of an orthonormal-column matrix is 1") {
  Matrix id = Matrix::identity(4);
  CHECK(nsp::spectral_norm(id) == doctest::Approx(1.0));
}

TEST_CASE("csv round trip and parsing") {
  Matrix m(2, 3);
  m(0, 0) = 1.0 / 3.0;
  m(0, 1) = -2.5e-17;
  m(0, 2) = 3.0;
  m(1, 0) = 0.0;
  m(1, 1) = 1e100;
  m(1, 2) = -7.0;
  Matrix back = nsp::parse_matrix_csv(nsp::format_matrix_csv(m));
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(back(i, j) == m(i, j));

  Matrix ws = nsp::parse_matrix_csv("# comment\n1 2\n3,4\n");
  CHECK(ws(1, 0) == 3.0);
  CHECK_THROWS_AS((void)nsp::parse_matrix_csv("1 2\n3\n"), nsp::Error);
  CHECK_THROWS_AS((void)nsp::parse_matrix_csv("1 x\n"), nsp::Error);
  CHECK_THROWS_AS((void)nsp::parse_matrix_csv("# nothing\n"), nsp::Error);
}

}  // TEST_SUITE
