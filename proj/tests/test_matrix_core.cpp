#include <cmath>

#include "doctest.h"
#include "nsp/matrix_core.hpp"
#include "nsp/rng.hpp"

using nsp::CodingMatrix;
using nsp::Matrix;
using nsp::Vector;

TEST_SUITE("matrix_core") {

TEST_CASE("nullspace of a 1x2 row") {
  Matrix a(1, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 1.0;
  auto basis = nsp::nullspace_basis(CodingMatrix::from(a));
  REQUIRE(basis.m() == 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::fabs(basis.f(0, 0)) == doctest::Approx(inv_sqrt2));
  CHECK(std::fabs(basis.f(1, 0)) == doctest::Approx(inv_sqrt2));
  CHECK(basis.f(0, 0) * basis.f(1, 0) < 0.0);
  CHECK(basis.gram(0, 0) == doctest::Approx(0.5));
  CHECK(basis.spec_norm == doctest::Approx(1.0));
}

TEST_CASE("coordinate nullspace") {
  Matrix a(2, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  auto basis = nsp::nullspace_basis(CodingMatrix::from(a));
  REQUIRE(basis.m() == 1);
  CHECK(std::fabs(basis.f(2, 0)) == doctest::Approx(1.0));
  CHECK(std::fabs(basis.f(0, 0)) < 1e-12);
  CHECK(std::fabs(basis.f(1, 0)) < 1e-12);
}

TEST_CASE("full-rank square matrix has no nullspace") {
  CHECK_THROWS_WITH_AS((void)nsp::nullspace_basis(CodingMatrix::from(Matrix::identity(2))),
                       "matrix has trivial nullspace", nsp::Error);
}

TEST_CASE("non-finite input rejected") {
  Matrix a(1, 2);
  a(0, 0) = std::nan("");
  CHECK_THROWS_AS((void)CodingMatrix::from(a), nsp::Error);
}

TEST_CASE("random matrices: annihilation and dimension") {
  nsp::Xoshiro256pp g(99);
  for (int seed = 0; seed < 50; ++seed) {
    Matrix a(3, 6);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 6; ++j) a(i, j) = g.next_normal();
    auto basis = nsp::nullspace_basis(CodingMatrix::from(a));
    CHECK(basis.m() == 3);
    const double anorm = nsp::spectral_norm(a);
    CHECK(nsp::max_abs(nsp::matmul(a, basis.f)) <= 1e-8 * anorm);

    // cached statistics agree with definitions
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(basis.row_norms[i] * basis.row_norms[i] ==
            doctest::Approx(basis.gram(i, i)).epsilon(1e-10));
    auto eig = nsp::sym_eig(nsp::symmetrized(nsp::matmul(nsp::transpose(basis.f), basis.f)));
    CHECK(basis.spec_norm == doctest::Approx(std::sqrt(eig.values.back())).epsilon(1e-8));
  }
}

TEST_CASE("rank-deficient rows are detected") {
  Matrix a(2, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    a(0, j) = static_cast<double>(j + 1);
    a(1, j) = 2.0 * static_cast<double>(j + 1);
  }
  auto basis = nsp::nullspace_basis(CodingMatrix::from(a));
  CHECK(basis.m() == 3);
}

TEST_CASE("k_norm examples and properties") {
  CHECK(nsp::k_norm({3.0, -1.0, 2.0}, 2) == doctest::Approx(5.0));
  CHECK(nsp::k_norm({0.0, 0.0}, 1) == doctest::Approx(0.0));
  CHECK(nsp::k_norm({3.0, -1.0, 2.0}, 3) == doctest::Approx(6.0));
  CHECK_THROWS_AS((void)nsp::k_norm({1.0}, 0), nsp::Error);
  CHECK_THROWS_AS((void)nsp::k_norm({1.0}, 2), nsp::Error);

  nsp::Xoshiro256pp g(3);
  for (int trial = 0; trial < 50; ++trial) {
    Vector x(8);
    double mx = 0.0;
    for (auto& v : x) {
      v = g.next_symmetric() * 5.0;
      mx = std::max(mx, std::fabs(v));
    }
    for (std::size_t k = 1; k < x.size(); ++k) {
      const double a = nsp::k_norm(x, k);
      const double b = nsp::k_norm(x, k + 1);
      CHECK(a <= b + 1e-12);
      CHECK(b <= a + mx + 1e-12);
    }
  }
}

TEST_CASE("numerical cardinality and rank") {
  CHECK(nsp::num_card({1.0, 1.0, 0.0}) == doctest::Approx(2.0));
  CHECK(nsp::num_card(Vector(7, 1.0)) == doctest::Approx(7.0));
  CHECK(nsp::num_rank(Matrix::identity(3)) == doctest::Approx(3.0));
  CHECK_THROWS_AS((void)nsp::num_card(Vector(3, 0.0)), nsp::Error);
  CHECK_THROWS_AS((void)nsp::num_rank(Matrix(2, 2)), nsp::Error);
}

}  // TEST_SUITE
