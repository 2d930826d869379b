#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapestat/frechet.hpp"
#include "shapestat/intrinsic.hpp"
#include "shapestat/simulate.hpp"

namespace shapestat {

enum class Method { Extrinsic, Intrinsic, Both };

Method parse_method(std::string_view name);
std::string_view to_string(Method method) noexcept;
bool uses_extrinsic(Method method) noexcept;
bool uses_intrinsic(Method method) noexcept;

struct CalibrationConfig {
  double noise_sd = 0.02;
  int n = 50;
  int m = 50;
  int replicates = 500;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  Method method = Method::Both;
  intrinsic::IntrinsicOptions intrinsic;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Null distribution of one mean test across replicates. Replicates whose
/// test fails numerically are counted in `failures` and left out of the
/// statistics.
struct CalibrationSeries {
  std::string test;
  int df = 0;
  std::vector<double> statistics;
  std::vector<double> p_values;
  int failures = 0;
  double rejection_rate = 0.0;
  double ks_distance = 0.0;
};

struct CalibrationReport {
  std::vector<CalibrationSeries> series;
};

/// Runs `replicates` two-sample mean tests with both samples drawn from
/// the same template. Replicate r draws sample A from stream 2r and sample
/// B from stream 2r + 1 of `seed`; results are reduced in replicate order,
/// so the report does not depend on thread scheduling.
CalibrationReport calibrate(const KAd& shape_template, const CalibrationConfig& config);

/// Kolmogorov-Smirnov distance sup |F_emp - F_chi2(df)|.
double ks_distance_chi2(std::vector<double> statistics, int df);

/// Nonparametric bootstrap p-value for the two-sample variation test.
/// Each resample recomputes both sample means and the statistic centered at
/// the observed difference; p = (1 + #{|T*| >= |T|}) / (1 + B_ok).
struct BootstrapResult {
  TestReport asymptotic;
  double p_value = 1.0;
  int replicates = 0;
  int failures = 0;
};

BootstrapResult bootstrap_variation_test(std::span<const Shape> a,
                                         std::span<const Shape> b, MetricKind metric,
                                         double alpha, int replicates, std::uint64_t seed,
                                         const intrinsic::KarcherOptions& karcher = {});

/// Variation summary about the sample's own mean under the given metric.
VariationSummary sample_variation_summary(std::span<const Shape> sample, MetricKind metric,
                                          const intrinsic::KarcherOptions& karcher = {});

}  // namespace shapestat
