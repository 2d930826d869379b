#pragma once

#include <span>

#include "shapestat/frechet.hpp"
#include "shapestat/shape_core.hpp"

namespace shapestat::extrinsic {

/// A k x k complex self-adjoint matrix (checked to 1e-12 entrywise).
class HermitianMatrix {
 public:
  explicit HermitianMatrix(ComplexMatrix a);

  const ComplexMatrix& matrix() const noexcept { return a_; }
  int k() const noexcept { return static_cast<int>(a_.rows()); }

 private:
  ComplexMatrix a_;
};

/// Full spectral decomposition. Eigenvalues ascend; column a of
/// `eigenvectors` belongs to eigenvalue a. Each eigenvector's phase is fixed
/// so that its largest-modulus entry is real and positive.
struct EigenSystem {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
  double spectral_gap = 0.0;  // lambda_k - lambda_{k-1}

  double top_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
  ComplexVector top_eigenvector() const {
    return eigenvectors.col(eigenvectors.cols() - 1);
  }
  int k() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

/// Tangent coordinates at the projected mean. Entries 0..k-3 hold
/// Re(U_a* X U_k) for a = 2..k-1 and entries k-2..2k-5 the Im parts.
struct ExtrinsicCoords {
  RealVector t;
};

/// Veronese-Whitney embedding u u*.
HermitianMatrix embed(const Shape& s);

/// (1/n) sum embed(X_j). Throws EmptySample.
HermitianMatrix average_embedding(std::span<const Shape> sample);

/// Throws NumericalFailure if the solver does not converge.
EigenSystem hermitian_eigensystem(const HermitianMatrix& a);

/// Focal test used by the mean estimators:
/// lambda_k - lambda_{k-1} <= 1e-10 max(1, lambda_k).
bool has_simple_top_eigenvalue(const EigenSystem& eig);

struct ExtrinsicMean {
  Shape mean;
  EigenSystem eig;
};

/// Top unit eigenvector of the averaged embedding. Throws EmptySample, and
/// FocalMean when the top eigenvalue is not simple.
ExtrinsicMean extrinsic_mean(std::span<const Shape> sample);

/// 2 (1 - lambda_k).
double extrinsic_variation(const EigenSystem& eig);

ExtrinsicCoords tangent_coords(const HermitianMatrix& x, const EigenSystem& eig);

/// Same as tangent_coords(embed(s), eig) without forming the k x k matrix.
ExtrinsicCoords tangent_coords(const Shape& s, const EigenSystem& eig);

/// Two-sample test for equal extrinsic mean shapes. The base point is the
/// pooled averaged embedding (n Xbar + m Ybar) / (n + m); the statistic is
/// (Tbar - Sbar)' (Sigma1/n + Sigma2/m)^{-1} (Tbar - Sbar) with 1/n
/// covariances, referred to chi-squared with 2k - 4 degrees of freedom.
///
/// Throws FocalMean, or SingularCovariance when the pooled covariance is
/// not positive definite or its condition number exceeds 1e12.
TestReport extrinsic_mean_test(std::span<const Shape> a,
                               std::span<const Shape> b, double alpha);

/// Two-sample test for equal extrinsic variations:
/// 2 (lambda_k(B) - lambda_k(A)) / sqrt(s_a^2/n + s_b^2/m), two-sided normal.
TestReport extrinsic_variation_test(std::span<const Shape> a,
                                    std::span<const Shape> b, double alpha);

/// Variation summary of a sample about its own extrinsic mean.
VariationSummary extrinsic_variation_summary(std::span<const Shape> sample);

}  // namespace shapestat::extrinsic
