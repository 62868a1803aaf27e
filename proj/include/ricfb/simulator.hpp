#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ricfb/beamformer.hpp"
#include "ricfb/channel.hpp"
#include "ricfb/dof_formulas.hpp"
#include "ricfb/rational.hpp"

namespace ricfb {

struct DecodeError : std::runtime_error {
  DecodeError(const std::string& what, int receiver, int slot)
      : std::runtime_error(what), receiver(receiver), slot(slot) {}
  int receiver = -1;
  int slot = 0;
};

/// One scalar symbol and its journey through the two slots.
struct SymbolRecord {
  int owner = 0;         // user whose message it belongs to
  int intended_rx = 0;   // = owner for all schemes here
  int type = 0;          // beamformer type at introduction (k-user: 0 direct, -1 cross)
  int slot_introduced = 1;
  std::complex<double> value;

  struct Event {
    bool at_receiver = true;  // false: decoded by an eavesdropping transmitter
    int node = 0;
    int slot = 0;
  };
  std::vector<Event> decoded_by;

  bool decoded_by_intended() const {
    for (const auto& e : decoded_by)
      if (e.at_receiver && e.node == intended_rx) return true;
    return false;
  }
  bool decoded_by_transmitter(int tx) const {
    for (const auto& e : decoded_by)
      if (!e.at_receiver && e.node == tx) return true;
    return false;
  }
};

/// One beamformer column carrying one symbol during one slot.
struct TraceEmission {
  int tx = 0;
  int symbol = -1;
  ComplexVector column;
};

struct TransmissionTrace {
  SchemeKind scheme = SchemeKind::TwoUser;
  int slots = 2;
  std::vector<SymbolRecord> symbols;
  std::vector<std::vector<TraceEmission>> emissions;   // [slot]
  std::vector<std::vector<ComplexVector>> tx_signals;  // [slot][tx]
  std::vector<std::vector<ComplexVector>> rx_signals;  // [slot][rx]
  double max_residual = 0.0;

  int decoded_by_intended_total() const {
    int n = 0;
    for (const auto& s : symbols)
      if (s.decoded_by_intended()) ++n;
    return n;
  }
};

/// Runs the two-slot feedback protocol: slot 1 plants symbols, transmitters
/// decode eavesdropped symbols from the fed-back noiseless output, slot 2
/// relays them. Throws DecodeError if any intended symbol is unrecoverable.
TransmissionTrace run_two_slot(const ChannelInstance& instance,
                               const BeamformerSet& bf,
                               const TwoUserAllocation& alloc,
                               const Tolerance& tol = {});
TransmissionTrace run_two_slot(const ChannelInstance& instance,
                               const BeamformerSet& bf,
                               const ThreeUserAllocation& alloc,
                               const Tolerance& tol = {});
TransmissionTrace run_two_slot(const ChannelInstance& instance,
                               const BeamformerSet& bf,
                               const KUserAllocation& alloc,
                               const Tolerance& tol = {});

struct RankConditionReport {
  struct Entry {
    std::string name;
    int expected = 0;
    int measured = 0;
    bool pass = false;
  };
  std::vector<Entry> entries;
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

/// Measures the receive-side rank identities against their closed forms:
/// A1, A2, A3, [A2 A3], [A1 A2 A3] per receiver for the three-user scheme,
/// the stacked effective matrix for two-user, the receive matrix for k-user.
RankConditionReport verify_rank_conditions(const ChannelInstance& instance,
                                           const BeamformerSet& bf,
                                           const ThreeUserAllocation& alloc,
                                           const Tolerance& tol = {});
RankConditionReport verify_rank_conditions(const ChannelInstance& instance,
                                           const BeamformerSet& bf,
                                           const TwoUserAllocation& alloc,
                                           const Tolerance& tol = {});
RankConditionReport verify_rank_conditions(const ChannelInstance& instance,
                                           const BeamformerSet& bf,
                                           const KUserAllocation& alloc,
                                           const Tolerance& tol = {});

/// Symbols decoded by their intended receivers divided by the slot count.
Rational dof_from_trace(const TransmissionTrace& trace);

struct DofReport {
  int decoded_symbols_total = 0;
  int slots = 2;
  Rational achieved_dof;
  Rational formula_lower;
  Rational formula_upper;
  bool matches_lower = false;
  bool within_upper = false;
};

/// Compares the trace against the closed forms for the instance's scheme.
DofReport dof_report(const TransmissionTrace& trace,
                     const ChannelInstance& instance);

/// Finite-power surrogate for the DoF limit: per-slot Gaussian sum rate at
/// each power (log-det with the scheme's covariance structure), slope between
/// the two largest powers in bits per log2(P). Needs at least two powers with
/// max/min ratio >= 1e4.
double estimate_dof_slope(const ChannelInstance& instance,
                          const TransmissionTrace& trace,
                          const std::vector<double>& powers);
double estimate_dof_slope(const ChannelInstance& instance,
                          const BeamformerSet& bf,
                          const TwoUserAllocation& alloc,
                          const std::vector<double>& powers);
double estimate_dof_slope(const ChannelInstance& instance,
                          const BeamformerSet& bf,
                          const ThreeUserAllocation& alloc,
                          const std::vector<double>& powers);
double estimate_dof_slope(const ChannelInstance& instance,
                          const BeamformerSet& bf,
                          const KUserAllocation& alloc,
                          const std::vector<double>& powers);

std::string trace_to_json(const TransmissionTrace& trace);

}  // namespace ricfb
