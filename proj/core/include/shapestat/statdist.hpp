#pragma once

namespace shapestat::statdist {

/// Chi-squared distribution with integer degrees of freedom.
struct ChiSquared {
  int df;

  /// Throws DomainError for df < 1.
  explicit ChiSquared(int degrees_of_freedom);

  double sf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;
};

/// Regularized upper incomplete gamma Q(a, x).
///
/// Series for x < a + 1, Lentz continued fraction otherwise, both iterated
/// to 1e-14 relative convergence.
double regularized_gamma_q(double a, double x);

/// P(chi2_df > x) = Q(df/2, x/2). Throws DomainError for x < 0 or df < 1.
double chi2_sf(double x, int df);

/// Lower-tail quantile: the x with P(chi2_df <= x) = p, for 0 < p < 1.
double chi2_quantile(double p, int df);

/// 2 (1 - Phi(|z|)), computed as erfc(|z| / sqrt 2).
double normal_two_sided_p(double z);

}  // namespace shapestat::statdist
