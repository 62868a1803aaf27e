#include "ricfb/dof_formulas.hpp"

#include <algorithm>

namespace ricfb {

void TwoUserParams::validate() const {
  if (m1 < 1 || m2 < 1 || n1 < 1 || n2 < 1)
    throw DomainError("TwoUserParams: antenna counts must be >= 1");
  auto check = [](int d, int m, int n, const char* name) {
    if (d < 0 || d > std::min(m, n))
      throw DomainError(std::string("TwoUserParams: ") + name +
                        " exceeds min(M, N)");
  };
  check(d11, m1, n1, "D11");
  check(d12, m2, n1, "D12");
  check(d21, m1, n2, "D21");
  check(d22, m2, n2, "D22");
}

TwoUserParams TwoUserParams::from_config(const NetworkConfig& cfg) {
  if (cfg.users != 2)
    throw DomainError("TwoUserParams: config must have K = 2");
  return {cfg.tx_antennas[0], cfg.tx_antennas[1],
          cfg.rx_antennas[0], cfg.rx_antennas[1],
          cfg.rank_map[0][0], cfg.rank_map[0][1],
          cfg.rank_map[1][0], cfg.rank_map[1][1]};
}

void SymmetricParams::validate() const {
  if (users < 2) throw DomainError("SymmetricParams: K must be >= 2");
  if (antennas < 1) throw DomainError("SymmetricParams: M must be >= 1");
  if (direct_rank < 0 || direct_rank > antennas)
    throw DomainError("SymmetricParams: D_d must lie in [0, M]");
  if (cross_rank < 0 || cross_rank > antennas)
    throw DomainError("SymmetricParams: D_c must lie in [0, M]");
}

Rational thm1_feedback(const TwoUserParams& p) {
  p.validate();
  long long terms[6] = {
      p.m1 + p.n2 - p.d21,
      p.m2 + p.n1 - p.d12,
      p.d11 + p.d22 + p.d12,
      p.d11 + p.d22 + p.d21,
      std::min(p.m1, p.n1) + p.d22,
      std::min(p.m2, p.n2) + p.d11,
  };
  return Rational(*std::min_element(terms, terms + 6));
}

Rational remark2_nofeedback(const TwoUserParams& p) {
  p.validate();
  if (p.d11 != std::min(p.m1, p.n1) || p.d22 != std::min(p.m2, p.n2))
    throw DomainError(
        "remark2_nofeedback: requires full-rank direct links "
        "(D11 = min(M1,N1) and D22 = min(M2,N2))");
  long long terms[3] = {
      p.m1 + p.n2 - p.d21,
      p.n1 + p.m2 - p.d12,
      p.d11 + p.d22,
  };
  return Rational(*std::min_element(terms, terms + 3));
}

Rational thm2_lower(const SymmetricParams& p) {
  p.validate();
  if (p.users != 3) throw DomainError("thm2_lower: K must be 3");
  const long long m = p.antennas, dd = p.direct_rank, dc = p.cross_rank;
  if (dc > m) throw DomainError("thm2_lower: requires D_c <= M");
  bool in1 = (dc <= m && m <= 2 * dc);
  bool in2 = (2 * dc <= m && m <= 2 * dc + dd);
  bool in3 = (m >= 2 * dc + dd);
  Rational value;
  bool set = false;
  auto take = [&](Rational v) {
    if (set && v != value)
      throw std::logic_error("thm2_lower: branch values disagree at boundary");
    value = v;
    set = true;
  };
  if (in1)
    take(rat_max(rat_min(Rational(3 * m, 2), Rational(m + dd)),
                 Rational(2 * m - dc)));
  if (in2) take(Rational(3 * m - 3 * dc));
  if (in3) take(Rational(3 * dd + 3 * dc));
  if (!set) throw DomainError("thm2_lower: parameters outside all branches");
  return value;
}

Rational thm3_upper(const SymmetricParams& p) {
  p.validate();
  const long long k = p.users;
  return Rational(k * p.direct_rank) +
         Rational(p.cross_rank * k * (k - 1), 2);
}

Rational corollary1_dof(const SymmetricParams& p) {
  p.validate();
  const long long threshold =
      p.direct_rank + static_cast<long long>(p.users - 1) * p.cross_rank;
  if (p.antennas < threshold)
    throw DomainError("corollary1_dof: requires M >= D_d + (K-1)*D_c (= " +
                      std::to_string(threshold) + ")");
  return thm3_upper(p);
}

}  // namespace ricfb
