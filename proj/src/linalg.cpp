#include "ricfb/linalg.hpp"

namespace ricfb {

int rank_tol(const ComplexMatrix& a, const Tolerance& tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  double smax = s(0);
  if (smax <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol.rank_rel * smax) ++r;
  return r;
}

ComplexMatrix nullspace_basis(const ComplexMatrix& a, const Tolerance& tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0)
    return ComplexMatrix::Identity(n, n);
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  int r = 0;
  if (smax > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > tol.rank_rel * smax) ++r;
  return svd.matrixV().rightCols(n - r);
}

ComplexMatrix joint_nullspace(const std::vector<ComplexMatrix>& mats,
                              const Tolerance& tol) {
  if (mats.empty())
    throw std::invalid_argument("joint_nullspace: empty constraint set");
  return nullspace_basis(vstack(mats), tol);
}

bool span_contains(const ComplexMatrix& u, const ComplexMatrix& w,
                   const Tolerance& tol) {
  if (u.cols() == 0) return true;
  if (u.rows() != w.rows())
    throw std::invalid_argument("span_contains: row mismatch");
  if (w.cols() == 0) return u.norm() <= tol.residual;
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(w);
  ComplexMatrix residual = u - w * cod.solve(u);
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    double un = u.col(c).norm();
    if (un == 0.0) continue;
    if (residual.col(c).norm() > tol.residual * un) return false;
  }
  return true;
}

LeastSquaresResult least_squares(const ComplexMatrix& a,
                                 const ComplexVector& y) {
  if (a.rows() != y.size())
    throw std::invalid_argument("least_squares: dimension mismatch");
  LeastSquaresResult out;
  if (a.cols() == 0) {
    out.solution = ComplexVector(0);
    out.residual = y.norm();
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(a);
  out.solution = cod.solve(y);
  out.residual = (a * out.solution - y).norm();
  return out;
}

ComplexMatrix hstack(const std::vector<ComplexMatrix>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    if (b.cols() == 0) continue;
    if (rows == 0) rows = b.rows();
    if (b.rows() != rows)
      throw std::invalid_argument("hstack: row mismatch");
    cols += b.cols();
  }
  ComplexMatrix out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    if (b.cols() == 0) continue;
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

ComplexMatrix vstack(const std::vector<ComplexMatrix>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() == 0) continue;
    if (cols == 0) cols = b.cols();
    if (b.cols() != cols)
      throw std::invalid_argument("vstack: column mismatch");
    rows += b.rows();
  }
  ComplexMatrix out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    if (b.rows() == 0) continue;
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

}  // namespace ricfb
