#include "shapestat/calibration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "shapestat/error.hpp"
#include "shapestat/extrinsic.hpp"
#include "shapestat/statdist.hpp"

namespace shapestat {

Method parse_method(std::string_view name) {
  if (name == "extrinsic") return Method::Extrinsic;
  if (name == "intrinsic") return Method::Intrinsic;
  if (name == "both") return Method::Both;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Extrinsic: return "extrinsic";
    case Method::Intrinsic: return "intrinsic";
    case Method::Both: return "both";
  }
  return "both";
}

bool uses_extrinsic(Method method) noexcept { return method != Method::Intrinsic; }
bool uses_intrinsic(Method method) noexcept { return method != Method::Extrinsic; }

double ks_distance_chi2(std::vector<double> statistics, int df) {
  if (statistics.empty()) return 1.0;
  std::sort(statistics.begin(), statistics.end());
  const statdist::ChiSquared ref(df);
  const auto n = static_cast<double>(statistics.size());
  double d = 0.0;
  for (std::size_t i = 0; i < statistics.size(); ++i) {
    const double f = ref.cdf(std::max(statistics[i], 0.0));
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

namespace {

template <class Fn>
void parallel_for(int count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
}

struct ReplicateOutcome {
  std::optional<TestReport> extrinsic;
  std::optional<TestReport> intrinsic;
};

}  // namespace

CalibrationReport calibrate(const KAd& shape_template, const CalibrationConfig& config) {
  if (config.replicates < 1) {
    throw Error(ErrorCode::InvalidArgument, "replicates must be >= 1");
  }
  validate_alpha(config.alpha);
  const SimSpec spec_a{shape_template, config.noise_sd, config.n};
  const SimSpec spec_b{shape_template, config.noise_sd, config.m};

  std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(config.replicates));
  auto run_replicate = [&](int r) {
    const auto stream = static_cast<std::uint64_t>(r);
    const auto a = simulate_sample(spec_a, config.seed, 2 * stream);
    const auto b = simulate_sample(spec_b, config.seed, 2 * stream + 1);
    ReplicateOutcome& out = outcomes[static_cast<std::size_t>(r)];
    if (uses_extrinsic(config.method)) {
      try {
        out.extrinsic = extrinsic::extrinsic_mean_test(a, b, config.alpha);
      } catch (const Error& e) {
        if (!is_numerical(e.code())) throw;
      }
    }
    if (uses_intrinsic(config.method)) {
      try {
        out.intrinsic = intrinsic::intrinsic_mean_test(a, b, config.alpha, config.intrinsic);
      } catch (const Error& e) {
        if (!is_numerical(e.code())) throw;
      }
    }
  };

  // Worker threads must not let exceptions escape; rethrow the first one
  // in replicate order after the pool joins.
  std::vector<std::exception_ptr> errors(outcomes.size());
  parallel_for(config.replicates, config.threads, [&](int r) {
    try {
      run_replicate(r);
    } catch (...) {
      errors[static_cast<std::size_t>(r)] = std::current_exception();
    }
  });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const int df = shape_space_dim(shape_template.k());
  auto reduce = [&](const char* name, auto member) {
    CalibrationSeries s;
    s.test = name;
    s.df = df;
    int rejections = 0;
    for (const ReplicateOutcome& o : outcomes) {
      const std::optional<TestReport>& r = o.*member;
      if (!r) {
        ++s.failures;
        continue;
      }
      s.statistics.push_back(r->statistic);
      s.p_values.push_back(r->p_value);
      rejections += r->reject ? 1 : 0;
    }
    if (!s.statistics.empty()) {
      s.rejection_rate = static_cast<double>(rejections) / static_cast<double>(s.statistics.size());
    }
    s.ks_distance = ks_distance_chi2(s.statistics, df);
    return s;
  };

  CalibrationReport report;
  if (uses_extrinsic(config.method)) {
    report.series.push_back(reduce("extrinsic_mean", &ReplicateOutcome::extrinsic));
  }
  if (uses_intrinsic(config.method)) {
    report.series.push_back(reduce("intrinsic_mean", &ReplicateOutcome::intrinsic));
  }
  return report;
}

VariationSummary sample_variation_summary(std::span<const Shape> sample, MetricKind metric,
                                          const intrinsic::KarcherOptions& karcher) {
  if (metric == MetricKind::Extrinsic) return extrinsic::extrinsic_variation_summary(sample);
  return intrinsic::intrinsic_variation_summary(sample, karcher);
}

BootstrapResult bootstrap_variation_test(std::span<const Shape> a, std::span<const Shape> b,
                                         MetricKind metric, double alpha, int replicates,
                                         std::uint64_t seed,
                                         const intrinsic::KarcherOptions& karcher) {
  if (replicates < 1) throw Error(ErrorCode::InvalidArgument, "bootstrap replicates must be >= 1");
  const VariationSummary sa = sample_variation_summary(a, metric, karcher);
  const VariationSummary sb = sample_variation_summary(b, metric, karcher);
  BootstrapResult result;
  result.asymptotic = variation_test(sa, sb, alpha);
  result.replicates = replicates;
  const double observed_diff = sa.variation - sb.variation;
  const double observed = std::abs(result.asymptotic.statistic);

  auto resample = [](std::span<const Shape> s, Philox4x32& rng) {
    std::vector<Shape> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      out.push_back(s[static_cast<std::size_t>(rng() % s.size())]);
    }
    return out;
  };

  int exceed = 0;
  int ok = 0;
  for (int r = 0; r < replicates; ++r) {
    Philox4x32 rng(seed, static_cast<std::uint64_t>(r));
    const auto ra = resample(a, rng);
    const auto rb = resample(b, rng);
    try {
      const VariationSummary ba = sample_variation_summary(ra, metric, karcher);
      const VariationSummary bb = sample_variation_summary(rb, metric, karcher);
      const double var = ba.s_sq / ba.n + bb.s_sq / bb.n;
      if (!(var > 0.0)) {
        ++result.failures;
        continue;
      }
      const double t = ((ba.variation - bb.variation) - observed_diff) / std::sqrt(var);
      ++ok;
      if (std::abs(t) >= observed) ++exceed;
    } catch (const Error& e) {
      if (!is_numerical(e.code())) throw;
      ++result.failures;
    }
  }
  result.p_value = (1.0 + exceed) / (1.0 + ok);
  return result;
}

}  // namespace shapestat
