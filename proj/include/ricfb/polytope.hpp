#pragma once

#include <string>
#include <vector>

#include "ricfb/dof_formulas.hpp"
#include "ricfb/rational.hpp"

namespace ricfb {

struct UnboundedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rational linear inequality system: rows mean sum_j coeffs[j]*x[j] <= bound.
/// Nonnegativity rows (-x_j <= 0) are part of the system for every variable.
struct Polyhedron {
  struct Row {
    std::vector<Rational> coeffs;
    Rational bound;
  };

  std::vector<std::string> variables;
  std::vector<Row> rows;
  std::vector<Rational> objective;  // maximize objective . x

  int var_index(const std::string& name) const;
  void add_row(std::vector<Rational> coeffs, Rational bound);
  void add_nonnegativity_rows();

  /// One row per line, exact fractions: "a1*v1 + a2*v2 <= b".
  std::string dump() const;
};

/// The two-user symbol-count system over (d1_1, d1_2, d2_1, d2_2, df); the
/// shared relay count is a single variable df. Rows bound each typed count by
/// its nullspace dimension, each link by its rank, and each receiver by its
/// antennas. Objective: d1_1 + d1_2 + d2_1 + d2_2 + df.
Polyhedron two_user_constraints(const TwoUserParams& p);

/// The three-user symbol-count system over d1..d7. The paired-alignment cap
/// is d5 <= 2M - 4*D_d when 2*D_d <= M <= 2*D_c, else d5 <= 0.
/// Objective: d1 + d2 + d3 + d4 + (d5 + d6 + d7)/2 (per-user units).
Polyhedron three_user_constraints(const SymmetricParams& p);

struct LpResult {
  Rational value;
  std::vector<Rational> witness;
};

/// Exact rational simplex (Bland's rule). Throws UnboundedError /
/// InfeasibleError.
LpResult maximize(const Polyhedron& poly);

/// Fourier-Motzkin projection eliminating one variable: pairs every
/// positive-coefficient row with every negative-coefficient row, keeps
/// zero-coefficient rows, normalizes and drops syntactic duplicates.
Polyhedron fm_eliminate(const Polyhedron& poly, const std::string& var);

/// Adds t <= objective, eliminates every original variable, and reads the
/// tightest remaining upper bound on t. Equals maximize() by FM soundness.
Rational fm_objective_bound(const Polyhedron& poly);

}  // namespace ricfb
