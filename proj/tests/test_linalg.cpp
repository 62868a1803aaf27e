#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ricfb/linalg.hpp"
#include "ricfb/rational.hpp"
#include "ricfb/seeded_rng.hpp"

using namespace ricfb;

namespace {

SeededRng g_rng(2024);
std::uint64_t g_ctr = 0;

ComplexMatrix random_matrix(int rows, int cols) {
  ComplexMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = g_rng.cgauss(g_ctr++);
  return m;
}

ComplexMatrix random_rank(int rows, int cols, int rank) {
  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  for (int k = 0; k < rank; ++k)
    m += random_matrix(rows, 1) * random_matrix(cols, 1).transpose();
  return m;
}

/// Test-only oracle: exact rank of a rational matrix by fraction-free
/// Gaussian elimination. Independent of the SVD path under test.
int exact_rank(std::vector<std::vector<Rational>> m) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (!m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = rank + 1; r < rows; ++r) {
      if (m[r][col].is_zero()) continue;
      Rational f = m[r][col] / m[rank][col];
      for (int c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("rank_tol on the stated examples") {
  CHECK(rank_tol(ComplexMatrix::Identity(3, 3)) == 3);
  ComplexMatrix outer = random_matrix(4, 1) * random_matrix(4, 1).transpose();
  CHECK(rank_tol(outer) == 1);
  CHECK(rank_tol(ComplexMatrix::Zero(3, 5)) == 0);
  CHECK(rank_tol(ComplexMatrix(0, 4)) == 0);
}

TEST_CASE("rank of a two-path sum matches the exact rational oracle") {
  // Rational-entry factor vectors, same construction as the channel model.
  std::vector<Rational> a1 = {{1, 2}, {3, 1}, {-2, 3}, {1, 1}};
  std::vector<Rational> b1 = {{2, 1}, {-1, 4}, {1, 3}, {5, 2}};
  std::vector<Rational> a2 = {{-3, 4}, {1, 5}, {2, 1}, {-1, 2}};
  std::vector<Rational> b2 = {{1, 6}, {2, 3}, {-4, 1}, {1, 7}};
  std::vector<std::vector<Rational>> h(4, std::vector<Rational>(4, Rational(0)));
  ComplexMatrix hc = ComplexMatrix::Zero(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      h[r][c] = a1[r] * b1[c] + a2[r] * b2[c];
      hc(r, c) = h[r][c].to_double();
    }
  CHECK(exact_rank(h) == 2);
  CHECK(rank_tol(hc) == 2);
}

TEST_CASE("nullspace_basis dimensions and residuals") {
  Tolerance tol;
  ComplexMatrix z = ComplexMatrix::Zero(3, 4);
  ComplexMatrix nz = nullspace_basis(z, tol);
  CHECK(nz.cols() == 4);
  CHECK((nz.adjoint() * nz - ComplexMatrix::Identity(4, 4)).norm() <
        tol.residual);

  ComplexMatrix h = random_rank(4, 4, 1);  // N x M with D = 1, M = 4
  ComplexMatrix nh = nullspace_basis(h, tol);
  CHECK(nh.cols() == 3);
  CHECK((h * nh).norm() < tol.residual);

  CHECK(nullspace_basis(ComplexMatrix::Identity(2, 2), tol).cols() == 0);
}

TEST_CASE("joint_nullspace") {
  Tolerance tol;
  ComplexMatrix h1 = random_rank(5, 5, 2);
  ComplexMatrix h2 = random_rank(5, 5, 2);
  ComplexMatrix joint = joint_nullspace({h1, h2}, tol);
  CHECK(joint.cols() == 1);  // M - 2*D_c
  CHECK((h1 * joint).norm() < tol.residual);
  CHECK((h2 * joint).norm() < tol.residual);

  CHECK(joint_nullspace({h1, ComplexMatrix::Identity(5, 5)}, tol).cols() == 0);

  ComplexMatrix single = joint_nullspace({h1}, tol);
  ComplexMatrix direct = nullspace_basis(h1, tol);
  CHECK(single.cols() == direct.cols());
  CHECK(span_contains(single, direct, tol));
  CHECK(span_contains(direct, single, tol));

  CHECK_THROWS_AS(joint_nullspace({}, tol), std::invalid_argument);
}

TEST_CASE("span_contains") {
  Tolerance tol;
  ComplexMatrix w = random_matrix(6, 3);
  ComplexMatrix u = w * random_matrix(3, 2);
  CHECK(span_contains(u, w, tol));

  ComplexMatrix outside = random_matrix(6, 4);
  CHECK_FALSE(span_contains(outside, w, tol));
  // oracle route: membership iff stacking does not raise the rank
  CHECK(rank_tol(hstack({outside, w}), tol) > rank_tol(w, tol));
  CHECK(rank_tol(hstack({u, w}), tol) == rank_tol(w, tol));

  CHECK(span_contains(ComplexMatrix::Zero(6, 2), w, tol));
}

TEST_CASE("least_squares") {
  Tolerance tol;
  ComplexVector y = random_matrix(4, 1);
  auto r1 = least_squares(ComplexMatrix::Identity(4, 4), y);
  CHECK((r1.solution - y).norm() < tol.residual);
  CHECK(r1.residual < tol.residual);

  ComplexMatrix a = random_matrix(5, 3);
  ComplexVector x0 = random_matrix(3, 1);
  auto r2 = least_squares(a, a * x0);
  CHECK((r2.solution - x0).norm() < tol.residual);
  CHECK(r2.residual < tol.residual);

  // component in the left nullspace stays as residual
  ComplexMatrix left = nullspace_basis(ComplexMatrix(a.adjoint()), tol);
  REQUIRE(left.cols() == 2);
  auto r3 = least_squares(a, a * x0 + left.col(0));
  CHECK(r3.residual > 0.5);  // the added component has unit norm
}

TEST_CASE("property: rank plus nullity equals column count") {
  Tolerance tol;
  for (int trial = 0; trial < 40; ++trial) {
    int rows = 1 + static_cast<int>(g_rng.uniform(g_ctr++) * 6);
    int cols = 1 + static_cast<int>(g_rng.uniform(g_ctr++) * 6);
    int rank = static_cast<int>(g_rng.uniform(g_ctr++) * (std::min(rows, cols) + 1));
    ComplexMatrix m = random_rank(rows, cols, rank);
    int r = rank_tol(m, tol);
    ComplexMatrix ns = nullspace_basis(m, tol);
    CHECK(r == rank);
    CHECK(r + ns.cols() == cols);
    if (ns.cols() > 0) {
      CHECK((m * ns).norm() < tol.residual * std::max(1.0, m.norm()));
      CHECK((ns.adjoint() * ns -
             ComplexMatrix::Identity(ns.cols(), ns.cols()))
                .norm() < tol.residual);
    }
  }
}

TEST_CASE("property: span_contains agrees with the rank route") {
  Tolerance tol;
  for (int trial = 0; trial < 40; ++trial) {
    int rows = 2 + static_cast<int>(g_rng.uniform(g_ctr++) * 5);
    ComplexMatrix w = random_rank(rows, 3, std::min(rows, 2));
    bool inside = g_rng.uniform(g_ctr++) < 0.5;
    ComplexMatrix u =
        inside ? ComplexMatrix(w * random_matrix(3, 2)) : random_matrix(rows, 2);
    bool via_rank =
        rank_tol(hstack({u, w}), tol) == rank_tol(w, tol);
    CHECK(span_contains(u, w, tol) == via_rank);
  }
}
