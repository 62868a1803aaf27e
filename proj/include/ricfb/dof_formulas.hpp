#pragma once

#include <stdexcept>

#include "ricfb/channel.hpp"
#include "ricfb/rational.hpp"

namespace ricfb {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Two-user parameter tuple: antennas M1, M2, N1, N2 and ranks D[rx][tx].
struct TwoUserParams {
  int m1 = 0, m2 = 0;  // transmit antennas
  int n1 = 0, n2 = 0;  // receive antennas
  int d11 = 0, d12 = 0, d21 = 0, d22 = 0;  // D_{j,i}

  void validate() const;

  static TwoUserParams from_config(const NetworkConfig& cfg);
  static TwoUserParams symmetric(int m, int d) {
    return {m, m, m, m, d, d, d, d};
  }
};

/// Symmetric K-user parameter tuple.
struct SymmetricParams {
  int users = 0;
  int antennas = 0;
  int direct_rank = 0;
  int cross_rank = 0;

  void validate() const;
};

/// Total feedback DoF of the two-user channel: the six-term minimum.
Rational thm1_feedback(const TwoUserParams& p);

/// Non-feedback DoF when both direct links have full rank; throws DomainError
/// if D11 < min(M1,N1) or D22 < min(M2,N2).
Rational remark2_nofeedback(const TwoUserParams& p);

/// Achievable total feedback DoF for the symmetric three-user channel,
/// piecewise in M against 2*D_c and 2*D_c + D_d. Exact rational (3M/2 stays
/// a fraction). Overlapping branch boundaries are evaluated on both sides
/// and must agree.
Rational thm2_lower(const SymmetricParams& p);

/// K-user feedback upper bound: K*D_d + D_c*K*(K-1)/2.
Rational thm3_upper(const SymmetricParams& p);

/// DoF achieved by the K-user scheme; requires M >= D_d + (K-1)*D_c and
/// equals thm3_upper there.
Rational corollary1_dof(const SymmetricParams& p);

}  // namespace ricfb
