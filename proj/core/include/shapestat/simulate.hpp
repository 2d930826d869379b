#pragma once

#include <cstdint>
#include <vector>

#include "shapestat/rng.hpp"
#include "shapestat/shape_core.hpp"

namespace shapestat {

/// Isotropic Gaussian perturbation of a template configuration. Each
/// landmark coordinate receives independent noise with standard deviation
/// noise_sd * centroid_size(shape_template).
struct SimSpec {
  KAd shape_template;
  double noise_sd = 0.01;
  int n = 1;
};

/// |z - <z>|
double centroid_size(const KAd& kad);

std::vector<KAd> simulate_kads(const SimSpec& spec, Philox4x32& rng);
std::vector<Shape> simulate_sample(const SimSpec& spec, Philox4x32& rng);

/// Deterministic in (seed, stream): equal arguments give bit-identical shapes.
std::vector<Shape> simulate_sample(const SimSpec& spec, std::uint64_t seed,
                                   std::uint64_t stream = 0);

}  // namespace shapestat
