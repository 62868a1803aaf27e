#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ricfb/dof_formulas.hpp"

using namespace ricfb;

TEST_CASE("thm1_feedback") {
  CHECK(thm1_feedback({2, 2, 2, 2, 1, 1, 1, 1}) == Rational(3));
  // full rank: coincides with min{M1+M2, N1+N2, max(M1,N2), max(M2,N1)}
  CHECK(thm1_feedback({2, 2, 2, 2, 2, 2, 2, 2}) == Rational(2));
  CHECK(thm1_feedback({4, 4, 4, 4, 2, 2, 2, 2}) == Rational(6));
  for (int m1 = 1; m1 <= 4; ++m1)
    for (int m2 = 1; m2 <= 4; ++m2)
      for (int n1 = 1; n1 <= 4; ++n1)
        for (int n2 = 1; n2 <= 4; ++n2) {
          TwoUserParams full{m1, m2, n1, n2,
                             std::min(m1, n1), std::min(m2, n1),
                             std::min(m1, n2), std::min(m2, n2)};
          long long expect = std::min(
              {static_cast<long long>(m1) + m2, static_cast<long long>(n1) + n2,
               static_cast<long long>(std::max(m1, n2)),
               static_cast<long long>(std::max(m2, n1))});
          CHECK(thm1_feedback(full) == Rational(expect));
        }
}

TEST_CASE("remark2_nofeedback") {
  CHECK(remark2_nofeedback({2, 2, 2, 2, 2, 1, 1, 2}) == Rational(3));
  CHECK(remark2_nofeedback({3, 3, 3, 3, 3, 0, 0, 3}) == Rational(6));
  // precondition gate: direct links must be full rank
  CHECK_THROWS_AS(remark2_nofeedback({4, 4, 4, 4, 2, 2, 2, 2}), DomainError);
}

TEST_CASE("thm2_lower") {
  CHECK(thm2_lower({3, 5, 1, 5}) == Rational(6));
  CHECK(thm2_lower({3, 6, 1, 2}) == Rational(9));  // branch 3D_d + 3D_c
  for (int m = 1; m <= 6; ++m)  // full rank recovers 3M/2
    CHECK(thm2_lower({3, m, m, m}) == Rational(3 * m, 2));
  CHECK_THROWS_AS(thm2_lower({3, 2, 1, 3}), DomainError);  // D_c > M
  CHECK_THROWS_AS(thm2_lower({2, 4, 1, 1}), DomainError);  // K != 3
}

TEST_CASE("thm3_upper and corollary1") {
  CHECK(thm3_upper({3, 4, 1, 2}) == Rational(9));
  CHECK(thm3_upper({4, 8, 1, 0}) == Rational(4));  // D_c = 0: K * D_d
  // K = 2 with D_d = D_c = D matches Theorem 1's 3D term at large M
  for (int d = 1; d <= 4; ++d) {
    int m = 2 * d + 2;  // M >= 1.5 D comfortably
    CHECK(thm3_upper({2, m, d, d}) == Rational(3 * d));
    CHECK(thm1_feedback(TwoUserParams::symmetric(m, d)) == Rational(3 * d));
  }
  CHECK(corollary1_dof({3, 5, 1, 2}) == Rational(9));
  CHECK(corollary1_dof({3, 5, 1, 2}) == thm2_lower({3, 5, 1, 2}));
  CHECK(corollary1_dof({4, 7, 1, 2}) == Rational(16));
  CHECK_THROWS_AS(corollary1_dof({4, 6, 1, 2}), DomainError);
  // Remark 7: feedback / non-feedback ratio (K+1)/2 at D_d = D_c = D
  for (int k = 2; k <= 5; ++k) {
    SymmetricParams p{k, 3 * k, 2, 2};
    CHECK(corollary1_dof(p) / Rational(2LL * k) == Rational(k + 1, 2));
  }
}

TEST_CASE("grid invariants") {
  // feedback never hurts (both defined only at full-rank direct links)
  for (int m1 = 1; m1 <= 5; ++m1)
    for (int m2 = 1; m2 <= 5; ++m2)
      for (int n1 = 1; n1 <= 5; ++n1)
        for (int n2 = 1; n2 <= 5; ++n2)
          for (int d12 = 0; d12 <= std::min(m2, n1); ++d12)
            for (int d21 = 0; d21 <= std::min(m1, n2); ++d21) {
              TwoUserParams p{m1, m2, n1, n2, std::min(m1, n1), d12, d21,
                              std::min(m2, n2)};
              CHECK(thm1_feedback(p) >= remark2_nofeedback(p));
            }

  // symmetric identity and where feedback strictly wins
  for (int m = 1; m <= 10; ++m)
    for (int d = 0; d <= m; ++d) {
      Rational fb = thm1_feedback(TwoUserParams::symmetric(m, d));
      Rational expect = rat_min(rat_min(Rational(2LL * m - d), Rational(3LL * d)),
                                Rational(static_cast<long long>(m) + d));
      CHECK(fb == expect);
      Rational nofb = rat_min(Rational(2LL * m - d), Rational(2LL * d));
      if (d >= 1)
        CHECK((fb > nofb) == (2 * m > 3 * d));  // gain iff M > 1.5 D
      else
        CHECK(fb == nofb);  // no paths at all, both zero
    }

  // three-user: lower <= upper, equality exactly from 2*D_c + D_d on
  for (int m = 1; m <= 10; ++m)
    for (int dd = 0; dd <= m; ++dd)
      for (int dc = 0; dc <= m; ++dc) {
        SymmetricParams p{3, m, dd, dc};
        Rational lo = thm2_lower(p), hi = thm3_upper(p);
        CHECK(lo <= hi);
        CHECK((lo == hi) == (m >= 2 * dc + dd));
        if (m >= dd + 2 * dc) CHECK(corollary1_dof(p) == hi);
      }
}
