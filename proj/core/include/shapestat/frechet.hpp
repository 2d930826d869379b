#pragma once

#include <span>
#include <string_view>

#include "shapestat/shape_core.hpp"

namespace shapestat {

/// Selects the squared distance used throughout one analysis:
/// extrinsic -> full Procrustes distance squared, intrinsic -> geodesic^2.
enum class MetricKind { Extrinsic, Intrinsic };

std::string_view to_string(MetricKind kind) noexcept;

double squared_distance(const Shape& a, const Shape& b, MetricKind metric);

/// Sample Frechet function (1/n) sum rho^2(X_j, p). Throws EmptySample.
double frechet_function(const Shape& p, std::span<const Shape> sample,
                        MetricKind metric);

/// Sample Frechet variation at a caller-supplied mean, together with the
/// 1/n variance of the squared distances to that mean.
struct VariationSummary {
  int n = 0;
  double variation = 0.0;
  double s_sq = 0.0;
};

VariationSummary variation_summary(std::span<const Shape> sample,
                                   const Shape& mean, MetricKind metric);

enum class ReferenceDistribution { ChiSquared, StandardNormal };

std::string_view to_string(ReferenceDistribution dist) noexcept;

/// Outcome of a hypothesis test. `df` is meaningful for chi-squared only.
/// Invariant: reject == (p_value < alpha).
struct TestReport {
  double statistic = 0.0;
  ReferenceDistribution distribution = ReferenceDistribution::StandardNormal;
  int df = 0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;
};

/// Upper-tail chi-squared report for a quadratic-form statistic.
TestReport chi_squared_report(double statistic, int df, double alpha);

/// Two-sided standard-normal report.
TestReport normal_report(double statistic, double alpha);

/// Two-sample test for equal Frechet variations,
/// T = (V_a - V_b) / sqrt(s_a^2 / n_a + s_b^2 / n_b), two-sided normal.
/// Requires n >= 2 on both sides; throws DegenerateVariance when the
/// denominator vanishes.
TestReport variation_test(const VariationSummary& a, const VariationSummary& b,
                          double alpha);

void validate_alpha(double alpha);

}  // namespace shapestat
