#include "ricfb/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>

#include "ricfb/seeded_rng.hpp"

namespace ricfb {

namespace {

// Structural decode failures produce O(1) errors while least-squares noise at
// desk scale sits far below; anything past this is a rank deficit.
constexpr double kRecoveryTol = 1e-6;

struct Emission {
  int tx = 0;
  ComplexVector column;  // transmit-side beamformer column
  int symbol = -1;       // index into trace.symbols
  std::complex<double> sent;  // value placed on the column this slot
};
using SlotPlan = std::vector<Emission>;

class Engine {
 public:
  Engine(const ChannelInstance& instance, SchemeKind scheme,
         const Tolerance& tol)
      : instance_(instance), tol_(tol), sym_rng_(instance.seed(), {0x73796d73ULL}) {
    trace_.scheme = scheme;
    const int k = instance.config().users;
    trace_.emissions.resize(2);
    trace_.tx_signals.assign(2, std::vector<ComplexVector>(k));
    trace_.rx_signals.assign(2, std::vector<ComplexVector>(k));
  }

  int new_symbol(int owner, int type, int slot) {
    SymbolRecord s;
    s.owner = owner;
    s.intended_rx = owner;
    s.type = type;
    s.slot_introduced = slot;
    s.value = sym_rng_.cgauss(counter_++);
    trace_.symbols.push_back(std::move(s));
    return static_cast<int>(trace_.symbols.size()) - 1;
  }

  std::complex<double> estimate(int tx, int symbol) const {
    auto it = estimates_.find({tx, symbol});
    if (it == estimates_.end())
      throw std::logic_error("relay value requested before eavesdrop decode");
    return it->second;
  }

  /// Forms signals, decodes desired symbols at each receiver, and (slot 1)
  /// eavesdropped symbols at each transmitter from the fed-back output.
  void process_slot(int slot, const SlotPlan& plan,
                    const std::vector<std::vector<int>>& desired_per_rx,
                    const std::vector<std::vector<int>>& eaves_per_tx) {
    const auto& cfg = instance_.config();
    const int k = cfg.users;
    std::vector<ComplexVector> x(k), y(k);
    for (int i = 0; i < k; ++i)
      x[i] = ComplexVector::Zero(cfg.tx_antennas[i]);
    for (const auto& e : plan) {
      x[e.tx] += e.column * e.sent;
      trace_.emissions[slot - 1].push_back({e.tx, e.symbol, e.column});
    }
    for (int j = 0; j < k; ++j) {
      y[j] = ComplexVector::Zero(cfg.rx_antennas[j]);
      for (int i = 0; i < k; ++i) y[j] += instance_.matrix(j, i) * x[i];
    }
    trace_.tx_signals[slot - 1] = x;
    trace_.rx_signals[slot - 1] = y;

    for (int rx = 0; rx < k; ++rx)
      decode(rx, slot, plan, y[rx], desired_per_rx[rx],
             /*exclude_tx=*/-1, /*at_receiver=*/true);

    for (int tx = 0; tx < k && slot == 1; ++tx) {
      if (eaves_per_tx[tx].empty()) continue;
      // Transmitter tx sees its own receiver's output and knows what it sent.
      ComplexVector residual = y[tx] - instance_.matrix(tx, tx) * x[tx];
      decode(tx, slot, plan, residual, eaves_per_tx[tx], tx,
             /*at_receiver=*/false);
    }
  }

  TransmissionTrace finish() && { return std::move(trace_); }
  TransmissionTrace& trace() { return trace_; }

 private:
  void decode(int node, int slot, const SlotPlan& plan, const ComplexVector& y,
              const std::vector<int>& wanted, int exclude_tx,
              bool at_receiver) {
    if (wanted.empty() && y.norm() <= tol_.residual) return;
    std::vector<ComplexVector> cols;
    std::vector<int> labels;
    for (const auto& e : plan) {
      if (e.tx == exclude_tx) continue;
      ComplexVector img = instance_.matrix(node, e.tx) * e.column;
      if (img.norm() <= tol_.residual) continue;  // zero-forced here
      cols.push_back(std::move(img));
      labels.push_back(e.symbol);
    }
    ComplexMatrix eff(y.size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      eff.col(static_cast<Eigen::Index>(c)) = cols[c];
    LeastSquaresResult ls = least_squares(eff, y);
    trace_.max_residual = std::max(trace_.max_residual, ls.residual);
    for (int s : wanted) {
      std::complex<double> val = 0.0;
      for (std::size_t c = 0; c < labels.size(); ++c)
        if (labels[c] == s) val += ls.solution(static_cast<Eigen::Index>(c));
      if (std::abs(val - trace_.symbols[s].value) > kRecoveryTol)
        throw DecodeError(
            std::string(at_receiver ? "receiver " : "transmitter ") +
                std::to_string(node) + " cannot decode symbol of user " +
                std::to_string(trace_.symbols[s].owner) + " at slot " +
                std::to_string(slot) + " (effective matrix rank deficit)",
            node, slot);
      trace_.symbols[s].decoded_by.push_back({at_receiver, node, slot});
      if (!at_receiver) estimates_[{node, s}] = val;
    }
  }

  const ChannelInstance& instance_;
  Tolerance tol_;
  TransmissionTrace trace_;
  SeededRng sym_rng_;
  std::uint64_t counter_ = 0;
  std::map<std::pair<int, int>, std::complex<double>> estimates_;
};

void emit_block(SlotPlan& plan, int tx, const ComplexMatrix& block,
                const std::vector<int>& symbols, const Engine& eng,
                const TransmissionTrace& trace, bool relay = false) {
  if (static_cast<int>(symbols.size()) != block.cols())
    throw std::logic_error("emit_block: symbol/column count mismatch");
  for (Eigen::Index c = 0; c < block.cols(); ++c) {
    Emission e;
    e.tx = tx;
    e.column = block.col(c);
    e.symbol = symbols[c];
    e.sent = relay ? eng.estimate(tx, symbols[c])
                   : trace.symbols[symbols[c]].value;
    plan.push_back(std::move(e));
  }
}

std::vector<int> make_symbols(Engine& eng, int owner, int type, int slot,
                              int count) {
  std::vector<int> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) out.push_back(eng.new_symbol(owner, type, slot));
  return out;
}

}  // namespace

TransmissionTrace run_two_slot(const ChannelInstance& instance,
                               const BeamformerSet& bf,
                               const TwoUserAllocation& alloc,
                               const Tolerance& tol) {
  if (bf.scheme != SchemeKind::TwoUser)
    throw std::invalid_argument("run_two_slot: beamformer/alloc mismatch");
  Engine eng(instance, SchemeKind::TwoUser, tol);

  std::array<std::vector<int>, 2> s1_zf, s1_gen, s1_relay;
  SlotPlan plan1;
  for (int i = 0; i < 2; ++i) {
    s1_zf[i] = make_symbols(eng, i, 1, 1, alloc.cross_null[i]);
    s1_gen[i] = make_symbols(eng, i, 2, 1, alloc.generic[i]);
    s1_relay[i] = make_symbols(eng, i, 3, 1, alloc.relay);
    emit_block(plan1, i, bf.tx[i].type[1], s1_zf[i], eng, eng.trace());
    emit_block(plan1, i, bf.tx[i].type[2], s1_gen[i], eng, eng.trace());
    emit_block(plan1, i, bf.tx[i].type[3], s1_relay[i], eng, eng.trace());
  }
  std::vector<std::vector<int>> desired1(2), eaves1(2);
  for (int i = 0; i < 2; ++i) {
    desired1[i] = s1_zf[i];
    desired1[i].insert(desired1[i].end(), s1_gen[i].begin(), s1_gen[i].end());
    const int j = 1 - i;
    eaves1[i] = s1_gen[j];
    eaves1[i].insert(eaves1[i].end(), s1_relay[j].begin(), s1_relay[j].end());
  }
  eng.process_slot(1, plan1, desired1, eaves1);

  SlotPlan plan2;
  std::vector<std::vector<int>> desired2(2), eaves2(2);
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    auto s2_zf = make_symbols(eng, i, 1, 2, alloc.cross_null[i]);
    auto s2_gen = make_symbols(eng, i, 2, 2, alloc.generic[i]);
    emit_block(plan2, i, bf.tx[i].type[1], s2_zf, eng, eng.trace());
    emit_block(plan2, i, bf.tx[i].type[2], s2_gen, eng, eng.trace());
    // relay the other user's slot-1 type-3 symbols through own direct null
    emit_block(plan2, i, bf.tx[i].type[3], s1_relay[j], eng, eng.trace(),
               /*relay=*/true);
    desired2[i] = s2_zf;
    desired2[i].insert(desired2[i].end(), s2_gen.begin(), s2_gen.end());
    desired2[i].insert(desired2[i].end(), s1_relay[i].begin(),
                       s1_relay[i].end());
  }
  eng.process_slot(2, plan2, desired2, eaves2);
  return std::move(eng).finish();
}

TransmissionTrace run_two_slot(const ChannelInstance& instance,
                               const BeamformerSet& bf,
                               const ThreeUserAllocation& alloc,
                               const Tolerance& tol) {
  if (bf.scheme != SchemeKind::ThreeUserSymmetric)
    throw std::invalid_argument("run_two_slot: beamformer/alloc mismatch");
  const auto& d = alloc.counts;
  // the slot-2 relabeling swaps type-6 and type-7 payloads between users,
  // so the protocol needs matching counts and an even type-5 block
  if (d[5] != d[6])
    throw InfeasibleAllocationError(
        "run_two_slot: relay pairing requires d6 == d7");
  if (d[4] % 2 != 0)
    throw InfeasibleAllocationError("run_two_slot: d5 must be even");
  Engine eng(instance, SchemeKind::ThreeUserSymmetric, tol);
  const int half = d[4] / 2;

  // slot-1 payloads: everything is the owner's, types 5-7 travel via relays
  std::array<std::array<std::vector<int>, 8>, 3> s1;
  std::array<std::vector<int>, 3> s1_5a, s1_5b;
  SlotPlan plan1;
  for (int i = 0; i < 3; ++i) {
    for (int t = 1; t <= 4; ++t)
      s1[i][t] = make_symbols(eng, i, t, 1, d[t - 1]);
    s1_5a[i] = make_symbols(eng, i, 5, 1, half);
    s1_5b[i] = make_symbols(eng, i, 5, 1, half);
    s1[i][6] = make_symbols(eng, i, 6, 1, d[5]);
    s1[i][7] = make_symbols(eng, i, 7, 1, d[6]);
    for (int t = 1; t <= 4; ++t)
      emit_block(plan1, i, bf.tx[i].type[t], s1[i][t], eng, eng.trace());
    emit_block(plan1, i, bf.tx[i].type5_first, s1_5a[i], eng, eng.trace());
    emit_block(plan1, i, bf.tx[i].type5_second, s1_5b[i], eng, eng.trace());
    emit_block(plan1, i, bf.tx[i].type[6], s1[i][6], eng, eng.trace());
    emit_block(plan1, i, bf.tx[i].type[7], s1[i][7], eng, eng.trace());
  }
  std::vector<std::vector<int>> desired1(3), eaves1(3);
  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    for (int t = 1; t <= 4; ++t)
      desired1[i].insert(desired1[i].end(), s1[i][t].begin(), s1[i][t].end());
    // tx i relays these in slot 2: (i+1)'s [5,2] and [6], (i+2)'s [5,1] and [7]
    auto& ev = eaves1[i];
    ev.insert(ev.end(), s1_5b[i1].begin(), s1_5b[i1].end());
    ev.insert(ev.end(), s1[i1][6].begin(), s1[i1][6].end());
    ev.insert(ev.end(), s1_5a[i2].begin(), s1_5a[i2].end());
    ev.insert(ev.end(), s1[i2][7].begin(), s1[i2][7].end());
  }
  eng.process_slot(1, plan1, desired1, eaves1);

  SlotPlan plan2;
  std::vector<std::vector<int>> desired2(3), eaves2(3);
  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    for (int t = 1; t <= 4; ++t) {
      auto fresh = make_symbols(eng, i, t, 2, d[t - 1]);
      emit_block(plan2, i, bf.tx[i].type[t], fresh, eng, eng.trace());
      desired2[i].insert(desired2[i].end(), fresh.begin(), fresh.end());
    }
    // slot-2 relabeling: V5a <- s_{i+1}^{[5,2]}(1), V5b <- s_{i+2}^{[5,1]}(1),
    // V6 <- s_{i+2}^{[7]}(1), V7 <- s_{i+1}^{[6]}(1)
    emit_block(plan2, i, bf.tx[i].type5_first, s1_5b[i1], eng, eng.trace(), true);
    emit_block(plan2, i, bf.tx[i].type5_second, s1_5a[i2], eng, eng.trace(), true);
    emit_block(plan2, i, bf.tx[i].type[6], s1[i2][7], eng, eng.trace(), true);
    emit_block(plan2, i, bf.tx[i].type[7], s1[i1][6], eng, eng.trace(), true);
    // receiver i picks up its slot-1 type 5/6/7 symbols relayed by the others
    desired2[i].insert(desired2[i].end(), s1_5a[i].begin(), s1_5a[i].end());
    desired2[i].insert(desired2[i].end(), s1_5b[i].begin(), s1_5b[i].end());
    desired2[i].insert(desired2[i].end(), s1[i][6].begin(), s1[i][6].end());
    desired2[i].insert(desired2[i].end(), s1[i][7].begin(), s1[i][7].end());
  }
  eng.process_slot(2, plan2, desired2, eaves2);
  return std::move(eng).finish();
}

TransmissionTrace run_two_slot(const ChannelInstance& instance,
                               const BeamformerSet& bf,
                               const KUserAllocation& alloc,
                               const Tolerance& tol) {
  if (bf.scheme != SchemeKind::KUserCorollary)
    throw std::invalid_argument("run_two_slot: beamformer/alloc mismatch");
  Engine eng(instance, SchemeKind::KUserCorollary, tol);
  const int k = alloc.users;

  SlotPlan plan1;
  std::vector<std::vector<int>> s1_direct(k);
  std::vector<std::vector<std::vector<int>>> s1_planted(
      k, std::vector<std::vector<int>>(k));  // [owner][planted rx]
  for (int i = 0; i < k; ++i) {
    s1_direct[i] = make_symbols(eng, i, 0, 1, alloc.direct);
    emit_block(plan1, i, bf.tx[i].direct, s1_direct[i], eng, eng.trace());
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      s1_planted[i][j] = make_symbols(eng, i, -1, 1, alloc.cross);
      emit_block(plan1, i, bf.tx[i].cross[j], s1_planted[i][j], eng,
                 eng.trace());
    }
  }
  std::vector<std::vector<int>> desired1(k), eaves1(k);
  for (int j = 0; j < k; ++j) {
    desired1[j] = s1_direct[j];
    for (int i = 0; i < k; ++i)
      if (i != j)
        eaves1[j].insert(eaves1[j].end(), s1_planted[i][j].begin(),
                         s1_planted[i][j].end());
  }
  eng.process_slot(1, plan1, desired1, eaves1);

  SlotPlan plan2;
  std::vector<std::vector<int>> desired2(k), eaves2(k);
  for (int i = 0; i < k; ++i) {
    auto fresh = make_symbols(eng, i, 0, 2, alloc.direct);
    emit_block(plan2, i, bf.tx[i].direct, fresh, eng, eng.trace());
    desired2[i].insert(desired2[i].end(), fresh.begin(), fresh.end());
    // forward user j's symbols that slot 1 planted at this node's receiver
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      emit_block(plan2, i, bf.tx[i].cross[j], s1_planted[j][i], eng,
                 eng.trace(), true);
      desired2[j].insert(desired2[j].end(), s1_planted[j][i].begin(),
                         s1_planted[j][i].end());
    }
  }
  eng.process_slot(2, plan2, desired2, eaves2);
  return std::move(eng).finish();
}

RankConditionReport verify_rank_conditions(const ChannelInstance& instance,
                                           const BeamformerSet& bf,
                                           const ThreeUserAllocation& alloc,
                                           const Tolerance& tol) {
  RankConditionReport report;
  const auto& d = alloc.counts;
  const int three_halves_d5 = d[4] + d[4] / 2;
  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    ComplexMatrix a1 = hstack({instance.matrix(i, i) * bf.tx[i].type[1],
                               instance.matrix(i, i) * bf.tx[i].type[2],
                               instance.matrix(i, i) * bf.tx[i].type[3],
                               instance.matrix(i, i) * bf.tx[i].type[4]});
    ComplexMatrix a2 = hstack({instance.matrix(i, i1) * bf.tx[i1].type[1],
                               instance.matrix(i, i1) * bf.tx[i1].type[4],
                               instance.matrix(i, i1) * bf.tx[i1].type[5],
                               instance.matrix(i, i1) * bf.tx[i1].type[6]});
    ComplexMatrix a3 = hstack({instance.matrix(i, i2) * bf.tx[i2].type[2],
                               instance.matrix(i, i2) * bf.tx[i2].type[4],
                               instance.matrix(i, i2) * bf.tx[i2].type[5],
                               instance.matrix(i, i2) * bf.tx[i2].type[7]});
    auto row = [&](const std::string& name, const ComplexMatrix& m,
                   int expected) {
      RankConditionReport::Entry e;
      e.name = "rx" + std::to_string(i) + ":" + name;
      e.expected = expected;
      e.measured = rank_tol(m, tol);
      e.pass = (e.expected == e.measured);
      report.entries.push_back(std::move(e));
    };
    row("A1", a1, d[0] + d[1] + d[2] + d[3]);
    row("A2", a2, d[0] + d[3] + d[4] + d[5]);
    row("A3", a3, d[1] + d[3] + d[4] + d[6]);
    row("[A2 A3]", hstack({a2, a3}),
        d[0] + d[1] + d[3] + three_halves_d5 + d[5] + d[6]);
    row("[A1 A2 A3]", hstack({a1, a2, a3}),
        2 * d[0] + 2 * d[1] + d[2] + 2 * d[3] + three_halves_d5 + d[5] + d[6]);
  }
  return report;
}

RankConditionReport verify_rank_conditions(const ChannelInstance& instance,
                                           const BeamformerSet& bf,
                                           const TwoUserAllocation& alloc,
                                           const Tolerance& tol) {
  RankConditionReport report;
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    ComplexMatrix eff = hstack({instance.matrix(i, i) * bf.tx[i].type[1],
                                instance.matrix(i, i) * bf.tx[i].type[2],
                                instance.matrix(i, j) * bf.tx[j].type[2],
                                instance.matrix(i, j) * bf.tx[j].type[3]});
    RankConditionReport::Entry e;
    e.name = "rx" + std::to_string(i) + ":effective";
    e.expected = alloc.cross_null[i] + alloc.generic[i] + alloc.generic[j] +
                 alloc.relay;
    e.measured = rank_tol(eff, tol);
    e.pass = (e.expected == e.measured);
    report.entries.push_back(std::move(e));
  }
  return report;
}

RankConditionReport verify_rank_conditions(const ChannelInstance& instance,
                                           const BeamformerSet& bf,
                                           const KUserAllocation& alloc,
                                           const Tolerance& tol) {
  RankConditionReport report;
  const int k = alloc.users;
  for (int j = 0; j < k; ++j) {
    std::vector<ComplexMatrix> blocks{instance.matrix(j, j) * bf.tx[j].direct};
    for (int i = 0; i < k; ++i)
      if (i != j) blocks.push_back(instance.matrix(j, i) * bf.tx[i].cross[j]);
    RankConditionReport::Entry e;
    e.name = "rx" + std::to_string(j) + ":receive";
    e.expected = alloc.direct + (k - 1) * alloc.cross;
    e.measured = rank_tol(hstack(blocks), tol);
    e.pass = (e.expected == e.measured);
    report.entries.push_back(std::move(e));
  }
  return report;
}

Rational dof_from_trace(const TransmissionTrace& trace) {
  return Rational(trace.decoded_by_intended_total(), trace.slots);
}

DofReport dof_report(const TransmissionTrace& trace,
                     const ChannelInstance& instance) {
  DofReport out;
  out.decoded_symbols_total = trace.decoded_by_intended_total();
  out.slots = trace.slots;
  out.achieved_dof = dof_from_trace(trace);
  const auto& cfg = instance.config();
  if (trace.scheme == SchemeKind::TwoUser) {
    TwoUserParams p = TwoUserParams::from_config(cfg);
    out.formula_lower = thm1_feedback(p);
    out.formula_upper = out.formula_lower;  // Theorem 1 is tight
  } else {
    SymmetricParams p{cfg.users, cfg.tx_antennas[0], cfg.rank_map[0][0],
                      cfg.users > 1 ? cfg.rank_map[0][1] : 0};
    out.formula_upper = thm3_upper(p);
    out.formula_lower = (trace.scheme == SchemeKind::ThreeUserSymmetric)
                            ? thm2_lower(p)
                            : corollary1_dof(p);
  }
  out.matches_lower = (out.achieved_dof == out.formula_lower);
  out.within_upper = (out.achieved_dof <= out.formula_upper);
  return out;
}

namespace {

double log2det_hermitian(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m);
  double out = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    out += std::log2(std::max(eig.eigenvalues()(i), 1e-300));
  return out;
}

/// Per-slot Gaussian sum rate: at each receiver, symbols it decodes that slot
/// are the useful part, everything else is colored noise.
double sum_rate_at_power(const ChannelInstance& instance,
                         const TransmissionTrace& trace, double power) {
  const auto& cfg = instance.config();
  const int k = cfg.users;
  double total = 0.0;
  for (int slot = 1; slot <= trace.slots; ++slot) {
    const auto& emissions = trace.emissions[slot - 1];
    std::vector<int> per_tx(k, 0);
    for (const auto& e : emissions) ++per_tx[e.tx];
    for (int rx = 0; rx < k; ++rx) {
      const int n = cfg.rx_antennas[rx];
      ComplexMatrix cov_all = ComplexMatrix::Identity(n, n);
      ComplexMatrix cov_int = ComplexMatrix::Identity(n, n);
      for (const auto& e : emissions) {
        ComplexVector img = instance.matrix(rx, e.tx) * e.column;
        ComplexMatrix outer =
            (power / per_tx[e.tx]) * (img * img.adjoint());
        cov_all += outer;
        bool desired = false;
        for (const auto& ev : trace.symbols[e.symbol].decoded_by)
          if (ev.at_receiver && ev.node == rx && ev.slot == slot)
            desired = true;
        if (!desired) cov_int += outer;
      }
      total += log2det_hermitian(cov_all) - log2det_hermitian(cov_int);
    }
  }
  return total / trace.slots;
}

}  // namespace

double estimate_dof_slope(const ChannelInstance& instance,
                          const TransmissionTrace& trace,
                          const std::vector<double>& powers) {
  if (powers.size() < 2)
    throw std::invalid_argument("estimate_dof_slope: need at least 2 powers");
  std::vector<double> sorted(powers);
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.back() / sorted.front() >= 1e4))
    throw std::invalid_argument(
        "estimate_dof_slope: power ratio must span at least 1e4");
  const double p_hi = sorted[sorted.size() - 1];
  const double p_lo = sorted[sorted.size() - 2];
  double r_hi = sum_rate_at_power(instance, trace, p_hi);
  double r_lo = sum_rate_at_power(instance, trace, p_lo);
  double slope = (r_hi - r_lo) / (std::log2(p_hi) - std::log2(p_lo));
  if (!std::isfinite(slope))
    throw std::runtime_error("estimate_dof_slope: non-finite rate");
  return slope;
}

double estimate_dof_slope(const ChannelInstance& instance,
                          const BeamformerSet& bf,
                          const TwoUserAllocation& alloc,
                          const std::vector<double>& powers) {
  return estimate_dof_slope(instance, run_two_slot(instance, bf, alloc),
                            powers);
}

double estimate_dof_slope(const ChannelInstance& instance,
                          const BeamformerSet& bf,
                          const ThreeUserAllocation& alloc,
                          const std::vector<double>& powers) {
  return estimate_dof_slope(instance, run_two_slot(instance, bf, alloc),
                            powers);
}

double estimate_dof_slope(const ChannelInstance& instance,
                          const BeamformerSet& bf,
                          const KUserAllocation& alloc,
                          const std::vector<double>& powers) {
  return estimate_dof_slope(instance, run_two_slot(instance, bf, alloc),
                            powers);
}

std::string trace_to_json(const TransmissionTrace& trace) {
  using nlohmann::json;
  json out;
  out["scheme"] = trace.scheme == SchemeKind::TwoUser ? "two-user"
                  : trace.scheme == SchemeKind::ThreeUserSymmetric
                      ? "three-user"
                      : "k-user";
  out["slots"] = trace.slots;
  out["max_residual"] = trace.max_residual;
  json ledger = json::array();
  for (std::size_t i = 0; i < trace.symbols.size(); ++i) {
    const auto& s = trace.symbols[i];
    json rec;
    rec["index"] = i;
    rec["owner"] = s.owner;
    rec["type"] = s.type;
    rec["slot_introduced"] = s.slot_introduced;
    rec["intended_rx"] = s.intended_rx;
    rec["value"] = {s.value.real(), s.value.imag()};
    json events = json::array();
    for (const auto& e : s.decoded_by)
      events.push_back({{"node", e.node},
                        {"kind", e.at_receiver ? "rx" : "tx"},
                        {"slot", e.slot}});
    rec["decoded_by"] = std::move(events);
    ledger.push_back(std::move(rec));
  }
  out["ledger"] = std::move(ledger);
  out["decoded_by_intended_total"] = trace.decoded_by_intended_total();
  return out.dump(2);
}

}  // namespace ricfb
