#pragma once

#include <array>
#include <utility>
#include <vector>

#include "ricfb/channel.hpp"
#include "ricfb/rational.hpp"

namespace ricfb {

enum class SchemeKind { TwoUser, ThreeUserSymmetric, KUserCorollary };

struct InfeasibleAllocationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A case prescription asked for a fractional symbol count. Carries the exact
/// rational targets so sweeps can log the skipped point; symbol extensions are
/// deliberately not implemented.
struct IntegralityError : std::runtime_error {
  IntegralityError(const std::string& what, std::array<Rational, 7> target)
      : std::runtime_error(what), prescription(target) {}
  std::array<Rational, 7> prescription;
};

/// The cyclic alignment closure could not be met (or failed verification).
struct AlignmentError : std::runtime_error {
  AlignmentError(const std::string& what, int transmitter, double residual)
      : std::runtime_error(what), transmitter(transmitter), residual(residual) {}
  int transmitter = -1;
  double residual = 0.0;
};

/// Two-user symbol counts. Type 1 nulls the cross link, type 2 is a generic
/// column, type 3 (shared count) nulls the direct link and is relayed through
/// the feedback path.
struct TwoUserAllocation {
  std::array<int, 2> cross_null{};  // d_i^[1]
  std::array<int, 2> generic{};     // d_i^[2]
  int relay = 0;                    // d^f = d_1^[3] = d_2^[3]

  int objective() const {
    return cross_null[0] + generic[0] + cross_null[1] + generic[1] + relay;
  }
  /// Symbols decoded by intended receivers over the two slots.
  int decoded_symbols() const { return 2 * objective(); }
};

/// Three-user symmetric symbol counts d^[1..7] (counts[t-1] holds d^[t]).
struct ThreeUserAllocation {
  std::array<int, 7> counts{};
  std::string case_label;  // which case prescription produced the counts

  int count(int type) const { return counts[type - 1]; }
  Rational total_dof() const {
    long long zf = counts[0] + counts[1] + counts[2] + counts[3];
    long long half = counts[4] + counts[5] + counts[6];
    return Rational(3 * zf) + Rational(3 * half, 2);
  }
  int decoded_symbols() const {
    return 3 * (2 * (counts[0] + counts[1] + counts[2] + counts[3]) +
                counts[4] + counts[5] + counts[6]);
  }
};

/// K-user scheme of Corollary 1: D_d direct symbols plus D_c per cross link.
struct KUserAllocation {
  int users = 0;
  int direct = 0;  // D_d
  int cross = 0;   // D_c

  int symbols_per_tx() const { return direct + (users - 1) * cross; }
  int decoded_symbols() const {
    return users * (2 * direct + (users - 1) * cross);
  }
  Rational total_dof() const { return Rational(decoded_symbols(), 2); }
};

/// Typed transmit blocks of one transmitter. Unused blocks have zero columns.
struct TxBeams {
  std::array<ComplexMatrix, 8> type;       // type[1..7]; type[5] = both halves
  ComplexMatrix type5_first, type5_second;  // aligned pair halves of type 5
  ComplexMatrix direct;                    // K-user: toward own receiver
  std::vector<ComplexMatrix> cross;        // K-user: [target rx] -> block

  /// All blocks side by side (used for the full-column-rank invariant).
  ComplexMatrix stacked() const;
};

struct BeamformerSet {
  SchemeKind scheme = SchemeKind::TwoUser;
  std::vector<TxBeams> tx;
};

/// The 3M x 2M pair system whose nullspace produces the type-5 halves
/// [V_i^{[5,1]}; V_{i+1}^{[5,2]}].
struct AlignmentSystem {
  ComplexMatrix t;
  ComplexMatrix nullspace;
  int measured_rank = 0;
};

AlignmentSystem type5_pair_system(const ChannelInstance& instance, int i,
                                  const Tolerance& tol = {});

/// Maximizes the total symbol count over the two-user constraint system by
/// exhaustive integer enumeration.
TwoUserAllocation alloc_two_user(const NetworkConfig& config);

/// Case-prescribed counts for the symmetric three-user scheme. Throws
/// IntegralityError when the prescription is fractional (sweeps skip those
/// points; formula evaluation stays the authority).
ThreeUserAllocation alloc_three_user(const SymmetricConfig& config);

BeamformerSet build_two_user(const ChannelInstance& instance,
                             const TwoUserAllocation& alloc,
                             const Tolerance& tol = {});

BeamformerSet build_three_user(const ChannelInstance& instance,
                               const ThreeUserAllocation& alloc,
                               const Tolerance& tol = {});

/// Corollary 1 construction; requires M >= D_d + (K-1)*D_c.
std::pair<BeamformerSet, KUserAllocation> build_k_user_corollary(
    const ChannelInstance& instance, const Tolerance& tol = {});

/// Replay/debug dump: typed blocks as complex arrays with the allocation
/// counts embedded. Column counts are the allocation, so loading restores
/// both the blocks and (via the *_allocation_of helpers) the symbol counts.
std::string to_json(const BeamformerSet& bf);
BeamformerSet beamformer_from_json(const std::string& text);
void save_beamformer(const BeamformerSet& bf, const std::string& path);
BeamformerSet load_beamformer(const std::string& path);

TwoUserAllocation two_user_allocation_of(const BeamformerSet& bf);
ThreeUserAllocation three_user_allocation_of(const BeamformerSet& bf);
KUserAllocation k_user_allocation_of(const BeamformerSet& bf);

}  // namespace ricfb
