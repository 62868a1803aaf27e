// Acceptance suite: one pass/fail line per criterion, exit code = #failures.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "ricfb/beamformer.hpp"
#include "ricfb/polytope.hpp"
#include "ricfb/seeded_rng.hpp"
#include "ricfb/simulator.hpp"
#include "ricfb/sweep.hpp"

using namespace ricfb;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// collected across criteria 1-8 for the dominance check (criterion 11)
std::vector<std::pair<Rational, Rational>> g_simulated;  // (achieved, upper)

void track(const Rational& achieved, const SymmetricParams& p) {
  g_simulated.emplace_back(achieved, thm3_upper(p));
}

Outcome criterion1() {
  Outcome out;
  SymmetricConfig cfg{2, 2, 1, 1};
  Rational expect = thm1_feedback(TwoUserParams::symmetric(2, 1));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ChannelInstance inst = generate(cfg, seed);
    TwoUserAllocation alloc = alloc_two_user(inst.config());
    BeamformerSet bf = build_two_user(inst, alloc);
    TransmissionTrace trace = run_two_slot(inst, bf, alloc);
    track(dof_from_trace(trace), {2, 2, 1, 1});
    if (trace.decoded_by_intended_total() != 6 || trace.slots != 2 ||
        dof_from_trace(trace) != Rational(3) || expect != Rational(3)) {
      out.pass = false;
      out.detail = "seed " + std::to_string(seed) + ": decoded " +
                   std::to_string(trace.decoded_by_intended_total());
      return out;
    }
  }
  out.detail = "20/20 seeds decode 6 symbols, DoF 3";
  return out;
}

Outcome criterion2() {
  Outcome out;
  SymmetricConfig cfg{3, 5, 1, 5};
  ThreeUserAllocation alloc = alloc_three_user(cfg);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ChannelInstance inst = generate(cfg, seed);
    BeamformerSet bf = build_three_user(inst, alloc);
    TransmissionTrace trace = run_two_slot(inst, bf, alloc);
    track(dof_from_trace(trace), {3, 5, 1, 5});
    RankConditionReport ranks = verify_rank_conditions(inst, bf, alloc);
    if (trace.decoded_by_intended_total() != 12 ||
        dof_from_trace(trace) != Rational(6) || !ranks.all_pass()) {
      out.pass = false;
      out.detail = "seed " + std::to_string(seed) + " failed";
      return out;
    }
  }
  out.detail = "20/20 seeds decode 12 symbols, DoF 6, rank identities exact";
  return out;
}

Outcome criterion3() {
  Outcome out;
  VerificationReport report = verify_grid_two_user(6, 0);
  out.pass = report.ok();
  std::ostringstream d;
  d << report.points_checked << " parameter points, "
    << report.failures.size() << " LP/formula mismatches";
  if (!report.failures.empty())
    d << "; first: " << report.failures[0].point << " "
      << report.failures[0].what;
  out.detail = d.str();
  return out;
}

Outcome criterion4() {
  Outcome out;
  SeededRng rng(4);
  std::uint64_t ctr = 0;
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng.uniform(ctr++) * (hi - lo + 1));
  };
  for (int trial = 0; trial < 200; ++trial) {
    int m1 = pick(1, 6), m2 = pick(1, 6), n1 = pick(1, 6), n2 = pick(1, 6);
    TwoUserParams p{m1, m2, n1, n2,
                    pick(0, std::min(m1, n1)), pick(0, std::min(m2, n1)),
                    pick(0, std::min(m1, n2)), pick(0, std::min(m2, n2))};
    Polyhedron poly = two_user_constraints(p);
    Rational lp = maximize(poly).value;
    Rational fm = fm_objective_bound(poly);
    if (lp != fm) {
      out.pass = false;
      out.detail = "trial " + std::to_string(trial) + ": LP " + lp.str() +
                   " vs FM " + fm.str();
      return out;
    }
  }
  out.detail = "200/200 random points: full FM elimination equals the LP bound";
  return out;
}

Outcome criterion5() {
  Outcome out;
  VerificationReport report = verify_grid_three_user(12, 0);
  out.pass = report.ok();
  std::ostringstream d;
  d << report.points_checked << " parameter points, "
    << report.failures.size()
    << " mismatches under the adopted type-5 cap";
  if (!report.failures.empty())
    d << "; finding: " << report.failures[0].point << " "
      << report.failures[0].what;
  out.detail = d.str();
  return out;
}

Outcome criterion6() {
  Outcome out;
  Fig2Sweep sweep = sweep_fig2(2, 2, 8);
  std::vector<long long> fb, nofb;
  for (const auto& r : sweep.rows) {
    fb.push_back(r.feedback.num());
    nofb.push_back(r.nofeedback.num());
  }
  bool gain_after_threshold = true;
  for (const auto& r : sweep.rows)
    if ((r.gain > Rational(0)) != (r.antennas > 3)) gain_after_threshold = false;
  out.pass = fb == std::vector<long long>{2, 4, 6, 6, 6, 6, 6} &&
             nofb == std::vector<long long>{2, 4, 4, 4, 4, 4, 4} &&
             gain_after_threshold;
  out.detail = out.pass
                   ? "columns match, gain starts strictly after M = 1.5 D"
                   : "column mismatch: " + fig2_csv(sweep);
  return out;
}

Outcome criterion7() {
  Outcome out;
  Fig4Sweep sweep = sweep_fig4(1, 2, 8);
  out.pass = true;
  for (const auto& r : sweep.rows) {
    if (r.antennas >= 5 &&
        !(r.lower == Rational(9) && r.upper == Rational(9)))
      out.pass = false;
    bool zf = r.regime == "ZF";
    if (zf != (r.antennas >= 4)) out.pass = false;
  }
  out.detail = out.pass ? "plateau at 9 from M = 5, regime ZF from M = 4"
                        : "mismatch: " + fig4_csv(sweep);
  return out;
}

Outcome criterion8() {
  Outcome out;
  for (int k = 2; k <= 4; ++k) {
    SymmetricConfig cfg{k, k, 1, 1};  // M = D_d + (K-1) D_c = K
    SymmetricParams params{k, k, 1, 1};
    Rational upper = thm3_upper(params);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      ChannelInstance inst = generate(cfg, seed);
      auto [bf, alloc] = build_k_user_corollary(inst);
      TransmissionTrace trace = run_two_slot(inst, bf, alloc);
      track(dof_from_trace(trace), params);
      if (trace.decoded_by_intended_total() != k * (k + 1) ||
          dof_from_trace(trace) != upper) {
        out.pass = false;
        out.detail = "K=" + std::to_string(k) + " seed " +
                     std::to_string(seed) + " decoded " +
                     std::to_string(trace.decoded_by_intended_total());
        return out;
      }
    }
    // feedback over the K*D non-feedback baseline: (K+1)/2
    if (upper / Rational(k) != Rational(k + 1, 2)) {
      out.pass = false;
      out.detail = "ratio mismatch at K=" + std::to_string(k);
      return out;
    }
  }
  out.detail = "K=2,3,4: DoF K+K(K-1)/2 achieved, gain ratio (K+1)/2";
  return out;
}

Outcome criterion9() {
  Outcome out;
  std::vector<NetworkConfig> configs;
  for (auto [k, m, dd, dc] : std::vector<std::array<int, 4>>{
           {2, 2, 1, 1}, {2, 3, 1, 2}, {2, 4, 2, 3}, {2, 5, 1, 5},
           {2, 6, 3, 2}, {3, 3, 1, 1}, {3, 4, 2, 1}, {3, 5, 1, 5},
           {3, 6, 2, 4}, {3, 7, 3, 3}, {3, 8, 1, 6}, {4, 4, 1, 2},
           {4, 6, 2, 3}, {4, 8, 4, 1}})
    configs.push_back(SymmetricConfig{k, m, dd, dc}.to_network());
  // asymmetric shapes
  auto custom = [&](std::vector<int> tx, std::vector<int> rx,
                    std::vector<std::vector<int>> ranks) {
    NetworkConfig c;
    c.users = static_cast<int>(tx.size());
    c.tx_antennas = std::move(tx);
    c.rx_antennas = std::move(rx);
    c.rank_map = std::move(ranks);
    configs.push_back(std::move(c));
  };
  custom({2, 3}, {3, 2}, {{2, 1}, {1, 2}});
  custom({4, 2}, {2, 4}, {{2, 2}, {0, 2}});
  custom({5, 3}, {4, 6}, {{3, 3}, {4, 2}});
  custom({1, 1}, {1, 1}, {{1, 1}, {1, 0}});
  custom({6, 6}, {6, 6}, {{5, 2}, {3, 6}});
  custom({3, 4, 5}, {5, 4, 3}, {{3, 2, 1}, {2, 4, 3}, {1, 2, 3}});
  if (configs.size() != 20) {
    out.pass = false;
    out.detail = "config grid has " + std::to_string(configs.size());
    return out;
  }
  long long checked = 0, passed = 0;
  for (std::size_t c = 0; c < configs.size(); ++c)
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      ChannelInstance inst = generate(configs[c], seed * 7919 + c);
      ++checked;
      if (validate(inst).all_pass()) ++passed;
    }
  out.pass = (passed == checked);
  out.detail = std::to_string(passed) + "/" + std::to_string(checked) +
               " rank syntheses exact at default tolerances";
  return out;
}

Outcome criterion10() {
  Outcome out;
  std::vector<double> powers{1e4, 1e8};
  ChannelInstance inst1 = generate(SymmetricConfig{2, 2, 1, 1}, 42);
  TwoUserAllocation a1 = alloc_two_user(inst1.config());
  double s1 = estimate_dof_slope(inst1, build_two_user(inst1, a1), a1, powers);

  ChannelInstance inst2 = generate(SymmetricConfig{3, 5, 1, 5}, 7);
  ThreeUserAllocation a2 = alloc_three_user({3, 5, 1, 5});
  double s2 =
      estimate_dof_slope(inst2, build_three_user(inst2, a2), a2, powers);

  char buf[128];
  std::snprintf(buf, sizeof buf, "slopes %.4f (target 3 +/- 0.15), %.4f (target 6 +/- 0.25)",
                s1, s2);
  out.detail = buf;
  out.pass = std::abs(s1 - 3.0) < 0.15 && std::abs(s2 - 6.0) < 0.25;
  return out;
}

Outcome criterion11() {
  Outcome out;
  int violations = 0;
  for (const auto& [achieved, upper] : g_simulated)
    if (achieved > upper) ++violations;
  out.pass = (violations == 0) && !g_simulated.empty();
  out.detail = std::to_string(g_simulated.size()) +
               " simulated runs from criteria 1-8, " +
               std::to_string(violations) + " upper-bound violations";
  return out;
}

}  // namespace

int main() {
  struct Spec {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_s;
  };
  std::vector<Spec> criteria{
      {1, "two-user worked example end-to-end", criterion1, 1.0},
      {2, "three-user alignment example end-to-end", criterion2, 5.0},
      {3, "LP equals Theorem 1 on the full two-user grid", criterion3, 300.0},
      {4, "Fourier-Motzkin agrees with the simplex", criterion4, 60.0},
      {5, "3x LP equals Theorem 2 on the three-user grid", criterion5, 120.0},
      {6, "two-user sweep data (fixed rank 2)", criterion6, 10.0},
      {7, "three-user sweep data (D_c = 2 D_d)", criterion7, 10.0},
      {8, "K-user scheme meets the upper bound at threshold", criterion8, 10.0},
      {9, "rank synthesis Monte Carlo (20 configs x 100 seeds)", criterion9,
       60.0},
      {10, "finite-power slope sanity", criterion10, 30.0},
      {11, "achieved DoF never exceeds the upper bound", criterion11, 1.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (secs > c.budget_s) {
      out.pass = false;
      out.detail += " [over time budget " + std::to_string(c.budget_s) + "s]";
    }
    if (!out.pass) ++failures;
    std::printf("[%s] criterion %2d: %s — %s (%.2fs)\n",
                out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                secs);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failures;
}
