#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ricfb/polytope.hpp"
#include "ricfb/seeded_rng.hpp"

using namespace ricfb;

namespace {

bool satisfies(const Polyhedron& poly, const std::vector<Rational>& point) {
  for (const auto& row : poly.rows) {
    Rational lhs(0);
    for (std::size_t j = 0; j < point.size(); ++j)
      lhs += row.coeffs[j] * point[j];
    if (lhs > row.bound) return false;
  }
  return true;
}

Polyhedron tiny(std::vector<std::string> vars) {
  Polyhedron p;
  p.variables = std::move(vars);
  return p;
}

}  // namespace

TEST_CASE("trivial LP: max x subject to x <= 3") {
  Polyhedron p = tiny({"x"});
  p.add_row({Rational(1)}, Rational(3));
  p.add_nonnegativity_rows();
  p.objective = {Rational(1)};
  LpResult r = maximize(p);
  CHECK(r.value == Rational(3));
  CHECK(r.witness[0] == Rational(3));
}

TEST_CASE("two-user system at the 2x2 rank-1 point") {
  TwoUserParams params{2, 2, 2, 2, 1, 1, 1, 1};
  Polyhedron poly = two_user_constraints(params);
  CHECK(poly.variables.size() == 5);
  CHECK(poly.rows.size() == 9 + 5);  // conditions plus nonnegativity
  CHECK(satisfies(poly, {Rational(1), Rational(0), Rational(1), Rational(0),
                         Rational(1)}));
  CHECK(satisfies(poly, {Rational(0), Rational(0), Rational(0), Rational(0),
                         Rational(0)}));  // origin always feasible
  LpResult r = maximize(poly);
  CHECK(r.value == Rational(3));
  CHECK(satisfies(poly, r.witness));
}

TEST_CASE("row (10) structure at M1 = N2 with D21 = 0") {
  TwoUserParams params{3, 2, 2, 3, 1, 1, 0, 2};
  Polyhedron poly = two_user_constraints(params);
  // row index 7 is condition (10): d1_2 + df + d2_1 + d2_2 <= N2
  const auto& row = poly.rows[7];
  CHECK(row.coeffs == std::vector<Rational>{Rational(0), Rational(1),
                                            Rational(1), Rational(1),
                                            Rational(1)});
  CHECK(row.bound == Rational(3));
}

TEST_CASE("three-user system feasible points") {
  Polyhedron poly = three_user_constraints({3, 5, 1, 5});
  CHECK(satisfies(poly, {Rational(0), Rational(0), Rational(0), Rational(1),
                         Rational(2), Rational(0), Rational(0)}));
  LpResult r = maximize(poly);
  CHECK(r.value * Rational(3) == Rational(6));

  Polyhedron poly2 = three_user_constraints({3, 6, 1, 2});
  CHECK(satisfies(poly2, {Rational(0), Rational(0), Rational(1), Rational(0),
                          Rational(0), Rational(2), Rational(2)}));
  CHECK(maximize(poly2).value * Rational(3) == Rational(9));
}

TEST_CASE("fm_eliminate on {x <= 3, y <= x}") {
  Polyhedron p = tiny({"x", "y"});
  p.add_row({Rational(1), Rational(0)}, Rational(3));   // x <= 3
  p.add_row({Rational(-1), Rational(1)}, Rational(0));  // y - x <= 0
  Polyhedron q = fm_eliminate(p, "x");
  REQUIRE(q.variables == std::vector<std::string>{"y"});
  REQUIRE(q.rows.size() == 1);
  CHECK(q.rows[0].coeffs[0] == Rational(1));
  CHECK(q.rows[0].bound == Rational(3));
}

TEST_CASE("eliminating an absent variable leaves the rows unchanged") {
  Polyhedron p = tiny({"x", "y"});
  p.add_row({Rational(1), Rational(0)}, Rational(3));
  Polyhedron q = fm_eliminate(p, "y");
  REQUIRE(q.rows.size() == 1);
  CHECK(q.rows[0].coeffs[0] == Rational(1));
  CHECK(q.rows[0].bound == Rational(3));
}

TEST_CASE("FM projection is sound and complete on a random system") {
  // every feasible point of the projection extends to the original system:
  // check by comparing objective bounds along each remaining axis
  TwoUserParams params{4, 3, 2, 5, 2, 1, 2, 2};
  Polyhedron poly = two_user_constraints(params);
  Polyhedron projected = fm_eliminate(fm_eliminate(poly, "d1_2"), "df");
  // maximize each surviving variable both ways
  for (std::string var : {"d1_1", "d2_1", "d2_2"}) {
    Polyhedron a = poly;
    a.objective.assign(5, Rational(0));
    a.objective[poly.var_index(var)] = Rational(1);
    Polyhedron b = projected;
    b.objective.assign(3, Rational(0));
    b.objective[projected.var_index(var)] = Rational(1);
    CHECK(maximize(a).value == maximize(b).value);
  }
}

TEST_CASE("fm_objective_bound equals the simplex optimum") {
  SeededRng rng(31337);
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto pick = [&](int lo, int hi) {
      return lo + static_cast<int>(rng.uniform(ctr++) * (hi - lo + 1));
    };
    int m1 = pick(1, 5), m2 = pick(1, 5), n1 = pick(1, 5), n2 = pick(1, 5);
    TwoUserParams p{m1, m2, n1, n2,
                    pick(0, std::min(m1, n1)), pick(0, std::min(m2, n1)),
                    pick(0, std::min(m1, n2)), pick(0, std::min(m2, n2))};
    Polyhedron poly = two_user_constraints(p);
    CHECK(fm_objective_bound(poly) == maximize(poly).value);
  }
}

TEST_CASE("dump renders exact fractions, one row per line") {
  Polyhedron p = tiny({"a", "b"});
  p.add_row({Rational(3, 2), Rational(-1)}, Rational(7, 3));
  CHECK(p.dump() == "3/2*a + -1*b <= 7/3\n");
}

TEST_CASE("unbounded and infeasible systems are reported") {
  Polyhedron p = tiny({"x"});
  p.objective = {Rational(1)};
  p.add_row({Rational(-1)}, Rational(0));  // only x >= 0
  CHECK_THROWS_AS(maximize(p), UnboundedError);

  Polyhedron q = tiny({"x"});
  q.objective = {Rational(1)};
  q.add_row({Rational(1)}, Rational(-1));   // x <= -1
  q.add_row({Rational(-1)}, Rational(0));   // -x <= 0
  CHECK_THROWS_AS(maximize(q), InfeasibleError);
}
