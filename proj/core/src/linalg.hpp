#pragma once

#include <string>

#include <Eigen/Eigenvalues>

#include "shapestat/error.hpp"
#include "shapestat/shape_core.hpp"

namespace shapestat::detail {

// Condition number of a symmetric matrix from its eigenvalues; +inf when
// the smallest eigenvalue is not positive.
inline double spd_condition_number(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "symmetric eigensolver failed");
  }
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

// x' m^{-1} x for symmetric positive-definite m. Throws `code` when m fails
// the positive-definiteness or conditioning check.
inline double spd_quadratic_form(const RealMatrix& m, const RealVector& x,
                                 double max_condition, ErrorCode code,
                                 const std::string& context) {
  const RealMatrix sym = 0.5 * (m + m.transpose());
  const double cond = spd_condition_number(sym);
  if (!(cond < max_condition)) {
    throw Error(code, context + ": matrix is singular or ill-conditioned "
                                "(condition number " +
                          std::to_string(cond) + ")");
  }
  Eigen::LLT<RealMatrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw Error(code, context + ": Cholesky factorization failed");
  }
  return x.dot(llt.solve(x));
}

}  // namespace shapestat::detail
