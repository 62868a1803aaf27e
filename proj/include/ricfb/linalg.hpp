#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace ricfb {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Numerical thresholds separating "generic" singular values from noise.
/// rank_rel is relative to the largest singular value; residual is an
/// absolute bound for quantities that are exactly zero in the construction.
struct Tolerance {
  double rank_rel = 1e-9;
  double residual = 1e-8;

  void validate() const {
    if (!(rank_rel > 0.0 && rank_rel < 1.0) ||
        !(residual > 0.0 && residual < 1.0))
      throw std::invalid_argument("Tolerance: both thresholds must be in (0,1)");
  }
};

/// Number of singular values above rank_rel * sigma_max. Zero matrix -> 0.
int rank_tol(const ComplexMatrix& a, const Tolerance& tol = {});

/// Orthonormal basis of the right nullspace, cols(a) - rank_tol(a) columns.
ComplexMatrix nullspace_basis(const ComplexMatrix& a, const Tolerance& tol = {});

/// Nullspace of the vertical stack of `mats` (all must share column count).
/// Throws std::invalid_argument on an empty sequence.
ComplexMatrix joint_nullspace(const std::vector<ComplexMatrix>& mats,
                              const Tolerance& tol = {});

/// True iff every column of u projects onto span(w) with relative residual
/// at most tol.residual. Zero columns are trivially contained.
bool span_contains(const ComplexMatrix& u, const ComplexMatrix& w,
                   const Tolerance& tol = {});

struct LeastSquaresResult {
  ComplexVector solution;  // minimum-norm least-squares solution
  double residual = 0.0;   // ||a * solution - y||
};

LeastSquaresResult least_squares(const ComplexMatrix& a, const ComplexVector& y);

/// Horizontal / vertical concatenation helpers (empty blocks are skipped).
ComplexMatrix hstack(const std::vector<ComplexMatrix>& blocks);
ComplexMatrix vstack(const std::vector<ComplexMatrix>& blocks);

}  // namespace ricfb
