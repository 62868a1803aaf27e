// ricfb: channel synthesis, scheme simulation, DoF formulas, and exact
// polyhedral verification for the rank-deficient interference channel with
// output feedback.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "ricfb/beamformer.hpp"
#include "ricfb/polytope.hpp"
#include "ricfb/simulator.hpp"
#include "ricfb/sweep.hpp"

using namespace ricfb;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 1;
  double tol_rank = Tolerance{}.rank_rel;
  double tol_residual = Tolerance{}.residual;
  std::string out;
  bool json = false;

  Tolerance tol() const {
    Tolerance t{tol_rank, tol_residual};
    t.validate();
    return t;
  }
};

void write_output(const GlobalOpts& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::runtime_error("cannot open " + g.out);
  f << text;
}

std::string report_text(const DofReport& r, bool json) {
  if (json) {
    return std::string("{\"decoded_symbols\": ") +
           std::to_string(r.decoded_symbols_total) +
           ", \"slots\": " + std::to_string(r.slots) +
           ", \"achieved_dof\": \"" + r.achieved_dof.str() +
           "\", \"formula_lower\": \"" + r.formula_lower.str() +
           "\", \"formula_upper\": \"" + r.formula_upper.str() +
           "\", \"matches_lower\": " + (r.matches_lower ? "true" : "false") +
           ", \"within_upper\": " + (r.within_upper ? "true" : "false") + "}\n";
  }
  std::ostringstream o;
  o << "decoded " << r.decoded_symbols_total << " symbols over " << r.slots
    << " slots\n"
    << "achieved DoF " << r.achieved_dof.str() << " (formula lower "
    << r.formula_lower.str() << ", upper " << r.formula_upper.str() << ")\n";
  return o.str();
}

int run_scheme(const GlobalOpts& g, const std::string& kind, int users, int m,
               int dd, int dc, int seeds, const std::string& trace_path,
               const std::string& channel_path,
               const std::string& beams_path) {
  Tolerance tol = g.tol();
  if (kind == "two-user") users = 2;
  if (kind == "three-user") users = 3;
  int rc = 0;
  for (int s = 0; s < seeds; ++s) {
    std::uint64_t seed = g.seed + s;
    std::optional<ChannelInstance> loaded;
    if (!channel_path.empty()) loaded = load_channel(channel_path);
    ChannelInstance inst =
        loaded ? std::move(*loaded)
               : generate(SymmetricConfig{users, m, dd, dc}, seed, tol);

    TransmissionTrace trace;
    BeamformerSet beams;
    if (kind == "two-user") {
      TwoUserAllocation alloc = alloc_two_user(inst.config());
      beams = build_two_user(inst, alloc, tol);
      trace = run_two_slot(inst, beams, alloc, tol);
    } else if (kind == "three-user") {
      const auto& cfg = inst.config();
      ThreeUserAllocation alloc = alloc_three_user(
          SymmetricConfig{3, cfg.tx_antennas[0], cfg.rank_map[0][0],
                          cfg.rank_map[0][1]});
      beams = build_three_user(inst, alloc, tol);
      trace = run_two_slot(inst, beams, alloc, tol);
    } else {
      auto [bf, alloc] = build_k_user_corollary(inst, tol);
      beams = std::move(bf);
      trace = run_two_slot(inst, beams, alloc, tol);
    }
    if (!beams_path.empty()) save_beamformer(beams, beams_path);
    DofReport report = dof_report(trace, inst);
    std::cout << "seed " << inst.seed() << ": "
              << report_text(report, g.json);
    if (!report.within_upper) rc = 1;
    if (!trace_path.empty()) {
      std::ofstream f(trace_path);
      f << trace_to_json(trace) << "\n";
    }
    if (loaded) break;  // a loaded channel is a single fixed instance
  }
  return rc;
}

std::vector<Rational> parse_point(const std::string& csv, std::size_t n) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Rational::parse(item));
  if (out.size() != n)
    throw std::runtime_error("expected " + std::to_string(n) + " values");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank-deficient interference channel with feedback: schemes, "
               "DoF formulas, and exact constraint-system verification"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts g;
  app.add_option("--seed", g.seed, "base seed for deterministic streams");
  app.add_option("--tol-rank", g.tol_rank, "relative rank tolerance");
  app.add_option("--tol-residual", g.tol_residual, "residual tolerance");
  app.add_option("--out", g.out, "write primary output to this file");
  app.add_flag("--json", g.json, "machine-readable output where supported");

  // channel gen
  auto* channel = app.add_subcommand("channel", "channel instance tooling");
  auto* gen = channel->add_subcommand("gen", "draw and save an instance");
  int gen_users = 2, gen_m = 2, gen_dd = 1, gen_dc = 1;
  gen->add_option("--users,-k", gen_users, "number of users");
  gen->add_option("--antennas,-m", gen_m, "antennas per node");
  gen->add_option("--dd", gen_dd, "direct-link rank");
  gen->add_option("--dc", gen_dc, "cross-link rank");

  // run <scheme>
  auto* run = app.add_subcommand("run", "build a scheme and simulate 2 slots");
  int run_users = 3, run_m = 5, run_dd = 1, run_dc = 5, run_seeds = 1;
  std::string run_trace, run_channel, run_kind, run_beams;
  for (const char* kind : {"two-user", "three-user", "k-user"}) {
    auto* sc = run->add_subcommand(kind);
    sc->add_option("--antennas,-m", run_m, "antennas per node");
    sc->add_option("--dd", run_dd, "direct-link rank");
    sc->add_option("--dc", run_dc, "cross-link rank");
    sc->add_option("--users,-k", run_users, "users (k-user scheme)");
    sc->add_option("--seeds", run_seeds, "number of consecutive seeds");
    sc->add_option("--trace", run_trace, "dump trace JSON to this path");
    sc->add_option("--channel", run_channel, "load channel JSON instead");
    sc->add_option("--beamformer", run_beams, "dump beamformer JSON here");
    sc->callback([kind, &run_kind] { run_kind = kind; });
  }
  run->require_subcommand(1);

  // sweep fig2|fig4
  auto* sweep = app.add_subcommand("sweep", "figure-data parameter sweeps");
  auto* fig2 = sweep->add_subcommand("fig2", "two-user symmetric sweep");
  int f2_rank = 2, f2_lo = 2, f2_hi = 8;
  bool f2_svg = false;
  fig2->add_option("--rank,-d", f2_rank, "common channel rank D");
  fig2->add_option("--m-min", f2_lo, "first antenna count");
  fig2->add_option("--m-max", f2_hi, "last antenna count");
  fig2->add_flag("--svg", f2_svg, "emit an SVG plot next to the CSV");
  auto* fig4 = sweep->add_subcommand("fig4", "three-user sweep at Dc = 2 Dd");
  int f4_dd = 1, f4_lo = 2, f4_hi = 8;
  bool f4_svg = false;
  fig4->add_option("--dd", f4_dd, "direct-link rank");
  fig4->add_option("--m-min", f4_lo, "first antenna count");
  fig4->add_option("--m-max", f4_hi, "last antenna count");
  fig4->add_flag("--svg", f4_svg, "emit an SVG plot next to the CSV");
  sweep->require_subcommand(1);

  // verify grid
  auto* verify = app.add_subcommand("verify", "cross-module verification");
  auto* grid = verify->add_subcommand("grid", "LP/formula/simulation grid");
  std::string grid_kind = "two-user";
  int grid_max = 4, grid_seeds = 0;
  grid->add_option("--kind", grid_kind, "two-user or three-user")
      ->check(CLI::IsMember({"two-user", "three-user"}));
  grid->add_option("--max-antennas", grid_max, "antenna cap");
  grid->add_option("--seeds", grid_seeds, "instances simulated per point");
  verify->require_subcommand(1);

  // lp solve
  auto* lp = app.add_subcommand("lp", "exact rational linear programming");
  auto* solve = lp->add_subcommand("solve", "maximize a constraint system");
  std::string lp_kind = "two-user", lp_params;
  bool lp_dump = false;
  solve->add_option("--kind", lp_kind, "two-user or three-user")
      ->check(CLI::IsMember({"two-user", "three-user"}));
  solve->add_option("--params", lp_params,
                    "two-user: M1,M2,N1,N2,D11,D12,D21,D22; three-user: M,Dd,Dc")
      ->required();
  solve->add_flag("--dump", lp_dump, "print the inequality system");
  lp->require_subcommand(1);

  // fm project
  auto* fm = app.add_subcommand("fm", "Fourier-Motzkin projection");
  auto* project = fm->add_subcommand("project", "eliminate variables");
  std::string fm_kind = "two-user", fm_params, fm_vars;
  bool fm_bound = false;
  project->add_option("--kind", fm_kind, "two-user or three-user")
      ->check(CLI::IsMember({"two-user", "three-user"}));
  project->add_option("--params", fm_params, "as in lp solve")->required();
  project->add_option("--eliminate", fm_vars,
                      "comma-separated variable names");
  project->add_flag("--objective-bound", fm_bound,
                    "eliminate everything and report the bound on the objective");
  fm->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      ChannelInstance inst =
          generate(SymmetricConfig{gen_users, gen_m, gen_dd, gen_dc}, g.seed,
                   g.tol());
      write_output(g, to_json(inst) + "\n");
      std::cerr << "generated K=" << gen_users << " instance, all ranks valid\n";
      return 0;
    }
    if (run->parsed())
      return run_scheme(g, run_kind, run_users, run_m, run_dd, run_dc,
                        run_seeds, run_trace, run_channel, run_beams);
    if (fig2->parsed()) {
      Fig2Sweep s = sweep_fig2(f2_rank, f2_lo, f2_hi);
      if (f2_rank % 2 != 0)
        std::cerr << "warning: odd rank D; sweep values remain defined\n";
      for (const auto& skip : s.skipped) std::cerr << "skip " << skip << "\n";
      write_output(g, fig2_csv(s));
      if (f2_svg && !g.out.empty()) {
        std::ofstream f(g.out + ".svg");
        f << fig2_svg(s);
      }
      return 0;
    }
    if (fig4->parsed()) {
      Fig4Sweep s = sweep_fig4(f4_dd, f4_lo, f4_hi);
      for (const auto& skip : s.skipped) std::cerr << "skip " << skip << "\n";
      write_output(g, fig4_csv(s));
      if (f4_svg && !g.out.empty()) {
        std::ofstream f(g.out + ".svg");
        f << fig4_svg(s);
      }
      return 0;
    }
    if (grid->parsed()) {
      VerificationReport report =
          grid_kind == "two-user"
              ? verify_grid_two_user(grid_max, grid_seeds, g.seed, g.tol())
              : verify_grid_three_user(grid_max, grid_seeds, g.seed, g.tol());
      std::ostringstream o;
      o << "checked " << report.points_checked << " points, "
        << report.simulations_run << " simulations, "
        << report.failures.size() << " failures, " << report.skips.size()
        << " skips\n";
      for (const auto& f : report.failures)
        o << "FAIL " << f.point << ": " << f.what << "\n";
      for (const auto& s : report.skips)
        o << "skip " << s.point << ": " << s.reason << "\n";
      write_output(g, o.str());
      return report.ok() ? 0 : 1;
    }
    auto build_system = [&](const std::string& kind, const std::string& params) {
      if (kind == "two-user") {
        auto v = parse_point(params, 8);
        TwoUserParams p{static_cast<int>(v[0].num()), static_cast<int>(v[1].num()),
                        static_cast<int>(v[2].num()), static_cast<int>(v[3].num()),
                        static_cast<int>(v[4].num()), static_cast<int>(v[5].num()),
                        static_cast<int>(v[6].num()), static_cast<int>(v[7].num())};
        return two_user_constraints(p);
      }
      auto v = parse_point(params, 3);
      SymmetricParams p{3, static_cast<int>(v[0].num()),
                        static_cast<int>(v[1].num()),
                        static_cast<int>(v[2].num())};
      return three_user_constraints(p);
    };
    if (solve->parsed()) {
      Polyhedron poly = build_system(lp_kind, lp_params);
      LpResult r = maximize(poly);
      std::ostringstream o;
      if (lp_dump) o << poly.dump();
      o << "optimum " << r.value.str() << "\nwitness (";
      for (std::size_t j = 0; j < r.witness.size(); ++j)
        o << (j ? ", " : "") << poly.variables[j] << " = "
          << r.witness[j].str();
      o << ")\n";
      if (lp_kind == "three-user")
        o << "total DoF 3 x optimum = " << (r.value * Rational(3)).str()
          << "\n";
      write_output(g, o.str());
      return 0;
    }
    if (project->parsed()) {
      Polyhedron poly = build_system(fm_kind, fm_params);
      if (fm_bound) {
        write_output(g, "objective bound " +
                            fm_objective_bound(poly).str() + "\n");
        return 0;
      }
      std::stringstream ss(fm_vars);
      std::string var;
      while (std::getline(ss, var, ',')) poly = fm_eliminate(poly, var);
      write_output(g, poly.dump());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
