#include "shapestat/simulate.hpp"

#include <string>

#include "shapestat/error.hpp"

namespace shapestat {

double centroid_size(const KAd& kad) {
  const ComplexVector& z = kad.points();
  return (z.array() - z.mean()).matrix().norm();
}

std::vector<KAd> simulate_kads(const SimSpec& spec, Philox4x32& rng) {
  if (!(spec.noise_sd > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "noise_sd must be positive, got " + std::to_string(spec.noise_sd));
  }
  if (spec.n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");

  const double sd = spec.noise_sd * centroid_size(spec.shape_template);
  const ComplexVector& base = spec.shape_template.points();
  std::vector<KAd> out;
  out.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    ComplexVector z = base;
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      const double dx = standard_normal(rng);
      const double dy = standard_normal(rng);
      z(j) += sd * Complex(dx, dy);
    }
    out.emplace_back(std::move(z));
  }
  return out;
}

std::vector<Shape> simulate_sample(const SimSpec& spec, Philox4x32& rng) {
  std::vector<Shape> out;
  out.reserve(static_cast<std::size_t>(std::max(spec.n, 0)));
  for (const KAd& z : simulate_kads(spec, rng)) out.push_back(to_shape(z));
  return out;
}

std::vector<Shape> simulate_sample(const SimSpec& spec, std::uint64_t seed,
                                   std::uint64_t stream) {
  Philox4x32 rng(seed, stream);
  return simulate_sample(spec, rng);
}

}  // namespace shapestat
