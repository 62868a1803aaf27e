#include "ricfb/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "ricfb/beamformer.hpp"
#include "ricfb/polytope.hpp"
#include "ricfb/simulator.hpp"

namespace ricfb {

namespace {

/// Bounded worker pool over indexed points; results land in caller-owned
/// per-index slots, so aggregation order is independent of scheduling.
template <typename Fn>
void parallel_points(std::size_t count, Fn&& body) {
  unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 8);
  if (workers <= 1 || count < 32) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

struct PointResult {
  std::vector<VerificationReport::Finding> failures;
  std::vector<VerificationReport::Skip> skips;
  long long simulations = 0;
};

}  // namespace

Fig2Sweep sweep_fig2(int rank, int m_lo, int m_hi) {
  if (rank < 0) throw DomainError("sweep_fig2: rank must be >= 0");
  Fig2Sweep sweep;
  for (int m = m_lo; m <= m_hi; ++m) {
    if (m < rank) {
      sweep.skipped.push_back("M=" + std::to_string(m) +
                              ": invalid, M < D (rank exceeds antennas)");
      continue;
    }
    TwoUserParams p = TwoUserParams::symmetric(m, rank);
    Fig2Row row;
    row.antennas = m;
    row.feedback = thm1_feedback(p);
    // Non-feedback baseline: the Remark-2 expression at symmetric rank-D
    // parameters, min{M1+N2-D21, N1+M2-D12, D11+D22} = min{2M-D, 2D}.
    row.nofeedback = rat_min(Rational(2LL * m - rank), Rational(2LL * rank));
    row.gain = row.feedback - row.nofeedback;
    sweep.rows.push_back(row);
  }
  return sweep;
}

Fig4Sweep sweep_fig4(int direct_rank, int m_lo, int m_hi) {
  if (direct_rank < 0) throw DomainError("sweep_fig4: rank must be >= 0");
  const int cross_rank = 2 * direct_rank;
  Fig4Sweep sweep;
  for (int m = m_lo; m <= m_hi; ++m) {
    if (m < cross_rank) {
      sweep.skipped.push_back("M=" + std::to_string(m) +
                              ": invalid, M < D_c = 2*D_d");
      continue;
    }
    SymmetricParams p{3, m, direct_rank, cross_rank};
    Fig4Row row;
    row.antennas = m;
    row.lower = thm2_lower(p);
    row.upper = thm3_upper(p);
    if (m >= 2 * cross_rank)
      row.regime = "ZF";
    else if (m <= 2 * direct_rank)
      row.regime = "IA";
    else
      row.regime = "ZF+IA";
    sweep.rows.push_back(row);
  }
  return sweep;
}

std::string fig2_csv(const Fig2Sweep& sweep) {
  std::ostringstream out;
  out << "M,dof_feedback,dof_nofeedback,gain\n";
  for (const auto& r : sweep.rows)
    out << r.antennas << "," << r.feedback.str() << "," << r.nofeedback.str()
        << "," << r.gain.str() << "\n";
  return out.str();
}

std::string fig4_csv(const Fig4Sweep& sweep) {
  std::ostringstream out;
  out << "M,thm2_lower,thm3_upper,scheme_regime\n";
  for (const auto& r : sweep.rows)
    out << r.antennas << "," << r.lower.str() << "," << r.upper.str() << ","
        << r.regime << "\n";
  return out.str();
}

namespace {

std::string polyline_svg(const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
                         const std::string& x_label, const std::string& y_label) {
  const double w = 480, h = 320, ml = 50, mr = 20, mt = 20, mb = 40;
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
  for (const auto& [name, pts] : series)
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymax = std::max(ymax, y);
    }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  int idx = 0;
  for (const auto& [name, pts] : series) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[idx % 4]
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) out << px(x) << "," << py(y) << " ";
    out << "\"/>\n";
    out << "<text x=\"" << w - mr - 150 << "\" y=\"" << mt + 16 * (idx + 1)
        << "\" fill=\"" << colors[idx % 4] << "\" font-size=\"12\">" << name
        << "</text>\n";
    ++idx;
  }
  out << "<text x=\"" << (w / 2) << "\" y=\"" << h - 8
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << (h / 2)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << (h / 2) << ")\">" << y_label << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string fig2_svg(const Fig2Sweep& sweep) {
  std::vector<std::pair<double, double>> fb, nofb;
  for (const auto& r : sweep.rows) {
    fb.emplace_back(r.antennas, r.feedback.to_double());
    nofb.emplace_back(r.antennas, r.nofeedback.to_double());
  }
  return polyline_svg({{"feedback", fb}, {"no feedback", nofb}}, "M",
                      "total DoF");
}

std::string fig4_svg(const Fig4Sweep& sweep) {
  std::vector<std::pair<double, double>> lo, hi;
  for (const auto& r : sweep.rows) {
    lo.emplace_back(r.antennas, r.lower.to_double());
    hi.emplace_back(r.antennas, r.upper.to_double());
  }
  return polyline_svg({{"achievable (Thm 2)", lo}, {"upper bound (Thm 3)", hi}},
                      "M", "total DoF");
}

VerificationReport verify_grid_two_user(int max_antennas, int seeds,
                                        std::uint64_t seed_base,
                                        const Tolerance& tol) {
  if (max_antennas > 8)
    throw DomainError("verify_grid_two_user: max_antennas capped at 8");
  std::vector<TwoUserParams> points;
  for (int m1 = 1; m1 <= max_antennas; ++m1)
    for (int m2 = 1; m2 <= max_antennas; ++m2)
      for (int n1 = 1; n1 <= max_antennas; ++n1)
        for (int n2 = 1; n2 <= max_antennas; ++n2)
          for (int d11 = 0; d11 <= std::min(m1, n1); ++d11)
            for (int d12 = 0; d12 <= std::min(m2, n1); ++d12)
              for (int d21 = 0; d21 <= std::min(m1, n2); ++d21)
                for (int d22 = 0; d22 <= std::min(m2, n2); ++d22)
                  points.push_back({m1, m2, n1, n2, d11, d12, d21, d22});

  std::vector<PointResult> results(points.size());
  parallel_points(points.size(), [&](std::size_t idx) {
    const TwoUserParams& p = points[idx];
    PointResult& out = results[idx];
    std::ostringstream tag;
    tag << "two-user(M1=" << p.m1 << ",M2=" << p.m2 << ",N1=" << p.n1
        << ",N2=" << p.n2 << ",D=" << p.d11 << p.d12 << p.d21 << p.d22 << ")";
    std::uint64_t point_seed = seed_base ^ static_cast<std::uint64_t>(idx);
    Rational lp = maximize(two_user_constraints(p)).value;
    Rational formula = thm1_feedback(p);
    if (lp != formula) {
      out.failures.push_back({tag.str(), "LP optimum " + lp.str() +
                                             " != Theorem 1 value " +
                                             formula.str()});
      return;
    }
    NetworkConfig cfg;
    cfg.users = 2;
    cfg.tx_antennas = {p.m1, p.m2};
    cfg.rx_antennas = {p.n1, p.n2};
    cfg.rank_map = {{p.d11, p.d12}, {p.d21, p.d22}};
    TwoUserAllocation alloc = alloc_two_user(cfg);
    if (Rational(alloc.objective()) != formula) {
      out.failures.push_back(
          {tag.str(), "integer allocation objective " +
                          std::to_string(alloc.objective()) +
                          " != Theorem 1 value " + formula.str()});
      return;
    }
    for (int s = 0; s < seeds; ++s) {
      ++out.simulations;
      std::uint64_t seed = point_seed + s;
      try {
        ChannelInstance inst = generate(cfg, seed, tol);
        BeamformerSet bf = build_two_user(inst, alloc, tol);
        if (!verify_rank_conditions(inst, bf, alloc, tol).all_pass()) {
          out.failures.push_back({tag.str(), "rank condition failed at seed " +
                                                 std::to_string(seed)});
          continue;
        }
        TransmissionTrace trace = run_two_slot(inst, bf, alloc, tol);
        if (dof_from_trace(trace) != formula)
          out.failures.push_back(
              {tag.str(), "simulated DoF " + dof_from_trace(trace).str() +
                              " != " + formula.str()});
      } catch (const std::exception& e) {
        out.failures.push_back({tag.str(), std::string("seed ") +
                                               std::to_string(seed) + ": " +
                                               e.what()});
      }
    }
  });

  VerificationReport report;
  report.points_checked = static_cast<long long>(points.size());
  for (const auto& r : results) {
    report.simulations_run += r.simulations;
    report.failures.insert(report.failures.end(), r.failures.begin(),
                           r.failures.end());
    report.skips.insert(report.skips.end(), r.skips.begin(), r.skips.end());
  }
  return report;
}

VerificationReport verify_grid_three_user(int max_antennas, int seeds,
                                          std::uint64_t seed_base,
                                          const Tolerance& tol) {
  if (max_antennas > 16)
    throw DomainError("verify_grid_three_user: max_antennas capped at 16");
  std::vector<SymmetricParams> points;
  for (int m = 1; m <= max_antennas; ++m)
    for (int dd = 0; dd <= m; ++dd)
      for (int dc = 0; dc <= m; ++dc) points.push_back({3, m, dd, dc});

  std::vector<PointResult> results(points.size());
  parallel_points(points.size(), [&](std::size_t idx) {
    const SymmetricParams& p = points[idx];
    PointResult& out = results[idx];
    std::ostringstream tag;
    tag << "three-user(M=" << p.antennas << ",Dd=" << p.direct_rank
        << ",Dc=" << p.cross_rank << ")";
    std::uint64_t point_seed = seed_base ^ static_cast<std::uint64_t>(idx);
    Rational lp = maximize(three_user_constraints(p)).value * Rational(3);
    Rational formula = thm2_lower(p);
    if (lp != formula) {
      out.failures.push_back({tag.str(),
                              "3*LP optimum " + lp.str() +
                                  " != Theorem 2 value " + formula.str() +
                                  " under the adopted type-5 cap"});
      return;
    }
    if (seeds == 0) return;
    SymmetricConfig cfg{3, p.antennas, p.direct_rank, p.cross_rank};
    ThreeUserAllocation alloc;
    try {
      alloc = alloc_three_user(cfg);
    } catch (const IntegralityError& e) {
      std::string target = "(";
      for (int t = 0; t < 7; ++t)
        target += (t ? "," : "") + e.prescription[t].str();
      target += ")";
      out.skips.push_back({tag.str(), "integrality: prescription " + target +
                                          " needs a symbol extension"});
      return;
    }
    if (alloc.total_dof() != formula) {
      out.failures.push_back(
          {tag.str(), "allocation DoF " + alloc.total_dof().str() +
                          " != Theorem 2 value " + formula.str()});
      return;
    }
    for (int s = 0; s < seeds; ++s) {
      ++out.simulations;
      std::uint64_t seed = point_seed + s;
      try {
        ChannelInstance inst = generate(cfg, seed, tol);
        BeamformerSet bf = build_three_user(inst, alloc, tol);
        if (!verify_rank_conditions(inst, bf, alloc, tol).all_pass()) {
          out.failures.push_back({tag.str(), "rank identity failed at seed " +
                                                 std::to_string(seed)});
          continue;
        }
        TransmissionTrace trace = run_two_slot(inst, bf, alloc, tol);
        if (dof_from_trace(trace) != formula)
          out.failures.push_back(
              {tag.str(), "simulated DoF " + dof_from_trace(trace).str() +
                              " != " + formula.str()});
      } catch (const std::exception& e) {
        out.failures.push_back({tag.str(), std::string("seed ") +
                                               std::to_string(seed) + ": " +
                                               e.what()});
      }
    }
  });

  VerificationReport report;
  report.points_checked = static_cast<long long>(points.size());
  for (const auto& r : results) {
    report.simulations_run += r.simulations;
    report.failures.insert(report.failures.end(), r.failures.begin(),
                           r.failures.end());
    report.skips.insert(report.skips.end(), r.skips.begin(), r.skips.end());
  }
  return report;
}

}  // namespace ricfb
