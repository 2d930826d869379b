#include "shapestat/frechet.hpp"

#include <cmath>
#include <string>

#include "shapestat/error.hpp"
#include "shapestat/statdist.hpp"

namespace shapestat {

std::string_view to_string(MetricKind kind) noexcept {
  return kind == MetricKind::Extrinsic ? "extrinsic" : "intrinsic";
}

std::string_view to_string(ReferenceDistribution dist) noexcept {
  return dist == ReferenceDistribution::ChiSquared ? "chi_squared"
                                                   : "standard_normal";
}

double squared_distance(const Shape& a, const Shape& b, MetricKind metric) {
  if (metric == MetricKind::Extrinsic) return procrustes_distance_sq(a, b);
  const double d = geodesic_distance(a, b);
  return d * d;
}

double frechet_function(const Shape& p, std::span<const Shape> sample,
                        MetricKind metric) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "empty sample");
  double sum = 0.0;
  for (const Shape& x : sample) sum += squared_distance(x, p, metric);
  return sum / static_cast<double>(sample.size());
}

VariationSummary variation_summary(std::span<const Shape> sample,
                                   const Shape& mean, MetricKind metric) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "empty sample");
  const auto n = static_cast<double>(sample.size());
  RealVector sq(static_cast<Eigen::Index>(sample.size()));
  for (std::size_t j = 0; j < sample.size(); ++j) {
    sq(static_cast<Eigen::Index>(j)) = squared_distance(sample[j], mean, metric);
  }
  VariationSummary s;
  s.n = static_cast<int>(sample.size());
  s.variation = sq.sum() / n;
  s.s_sq = (sq.array() - s.variation).square().sum() / n;
  return s;
}

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

TestReport chi_squared_report(double statistic, int df, double alpha) {
  validate_alpha(alpha);
  TestReport r;
  r.statistic = statistic;
  r.distribution = ReferenceDistribution::ChiSquared;
  r.df = df;
  // Rounding can leave a quadratic form a hair below zero.
  r.p_value = statdist::chi2_sf(std::max(statistic, 0.0), df);
  r.alpha = alpha;
  r.reject = r.p_value < alpha;
  return r;
}

TestReport normal_report(double statistic, double alpha) {
  validate_alpha(alpha);
  TestReport r;
  r.statistic = statistic;
  r.distribution = ReferenceDistribution::StandardNormal;
  r.df = 0;
  r.p_value = statdist::normal_two_sided_p(statistic);
  r.alpha = alpha;
  r.reject = r.p_value < alpha;
  return r;
}

TestReport variation_test(const VariationSummary& a, const VariationSummary& b,
                          double alpha) {
  if (a.n < 2 || b.n < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "variation test needs at least 2 observations per sample");
  }
  const double var = a.s_sq / a.n + b.s_sq / b.n;
  if (!(var > 0.0)) {
    throw Error(ErrorCode::DegenerateVariance,
                "both samples have zero spread of squared distances");
  }
  return normal_report((a.variation - b.variation) / std::sqrt(var), alpha);
}

}  // namespace shapestat
