#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ricfb/dof_formulas.hpp"
#include "ricfb/rational.hpp"

namespace ricfb {

struct Fig2Row {
  int antennas = 0;  // M
  Rational feedback;
  Rational nofeedback;
  Rational gain;
};

/// Two-user symmetric sweep: M_1=M_2=N_1=N_2=M, every rank D. The feedback
/// column is the Theorem 1 value, the baseline column the three-term
/// non-feedback minimum (min{2M-D, 2D} once M >= D). Points with M < D are
/// skipped with a reason.
struct Fig2Sweep {
  std::vector<Fig2Row> rows;
  std::vector<std::string> skipped;
};
Fig2Sweep sweep_fig2(int rank, int m_lo, int m_hi);

struct Fig4Row {
  int antennas = 0;
  Rational lower;   // Theorem 2
  Rational upper;   // Theorem 3, K = 3
  std::string regime;  // IA | ZF+IA | ZF
};

/// Three-user sweep at D_c = 2*D_d.
struct Fig4Sweep {
  std::vector<Fig4Row> rows;
  std::vector<std::string> skipped;
};
Fig4Sweep sweep_fig4(int direct_rank, int m_lo, int m_hi);

std::string fig2_csv(const Fig2Sweep& sweep);
std::string fig4_csv(const Fig4Sweep& sweep);

/// Minimal polyline SVG of one or more columns against M (text only).
std::string fig2_svg(const Fig2Sweep& sweep);
std::string fig4_svg(const Fig4Sweep& sweep);

struct VerificationReport {
  struct Finding {
    std::string point;
    std::string what;
  };
  struct Skip {
    std::string point;
    std::string reason;
  };
  std::vector<Finding> failures;
  std::vector<Skip> skips;
  long long points_checked = 0;
  long long simulations_run = 0;

  bool ok() const { return failures.empty(); }
};

/// Sweeps every two-user parameter point with antennas <= max_antennas:
/// asserts LP optimum == Theorem 1, then (seeds > 0) builds and simulates
/// `seeds` instances per point, checking rank conditions and the decoded DoF.
/// Instance seeds derive as (seed_base ^ point_index) + seed_offset.
VerificationReport verify_grid_two_user(int max_antennas, int seeds,
                                        std::uint64_t seed_base = 1,
                                        const Tolerance& tol = {});

/// Same for the symmetric three-user grid (M <= max_antennas): asserts
/// 3 * LP == Theorem 2 and simulates integral allocations; fractional
/// prescriptions are recorded as skips with the exact rational target.
VerificationReport verify_grid_three_user(int max_antennas, int seeds,
                                          std::uint64_t seed_base = 1,
                                          const Tolerance& tol = {});

}  // namespace ricfb
