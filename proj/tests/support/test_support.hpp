#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "shapestat/rng.hpp"
#include "shapestat/shape_core.hpp"
#include "shapestat/simulate.hpp"

namespace shapestat::testing {

inline ComplexVector random_complex_vector(Philox4x32& rng, int k) {
  ComplexVector z(k);
  for (int j = 0; j < k; ++j) {
    const double x = standard_normal(rng);
    const double y = standard_normal(rng);
    z(j) = Complex(x, y);
  }
  return z;
}

// Gaussian landmarks give the uniform distribution on shape space.
inline Shape random_shape(Philox4x32& rng, int k) {
  return to_shape(KAd(random_complex_vector(rng, k)));
}

inline std::vector<Shape> random_sample(Philox4x32& rng, int k, int n) {
  std::vector<Shape> out;
  for (int i = 0; i < n; ++i) out.push_back(random_shape(rng, k));
  return out;
}

inline Complex random_phase(Philox4x32& rng) {
  return std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
}

inline Shape rephased(const Shape& s, Complex phase) {
  return Shape(Preshape::project(phase * s.rep().vector()));
}

inline std::vector<Shape> concentrated_sample(const KAd& tpl, double noise_sd, int n,
                                              std::uint64_t seed, std::uint64_t stream = 0) {
  return simulate_sample(SimSpec{tpl, noise_sd, n}, seed, stream);
}

inline KAd irregular_template(int k) {
  ComplexVector z(k);
  for (int j = 0; j < k; ++j) {
    const double r = 1.0 + 0.3 * std::sin(1.7 * j + 0.4);
    z(j) = std::polar(r, 2.0 * std::numbers::pi * j / k + 0.2 * std::cos(2.3 * j));
  }
  return KAd(z);
}

// Orthonormal basis {f1, f2} of the centered subspace of C^3.
inline std::pair<ComplexVector, ComplexVector> centered_basis_k3() {
  ComplexVector f1(3), f2(3);
  f1 << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
  f2 << 1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0);
  return {f1, f2};
}

// Bloch (Hopf) coordinates of a k = 3 shape on the unit sphere; geodesic
// distance on shape space is half the angle between Bloch vectors.
inline std::array<double, 3> bloch_vector(const Shape& s) {
  const auto [f1, f2] = centered_basis_k3();
  const Complex a = f1.dot(s.rep().vector());
  const Complex b = f2.dot(s.rep().vector());
  const Complex ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

inline Shape from_bloch(double theta, double phi) {
  const auto [f1, f2] = centered_basis_k3();
  ComplexVector v = std::cos(theta / 2.0) * f1 + std::polar(std::sin(theta / 2.0), phi) * f2;
  return Shape(Preshape::project(v));
}

// Fibonacci lattice of `count` points on the Bloch sphere, i.e. a near
// uniform grid on the k = 3 shape space.
inline std::vector<Shape> fibonacci_grid_k3(int count) {
  std::vector<Shape> grid;
  grid.reserve(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    grid.push_back(from_bloch(std::acos(z), golden * i));
  }
  return grid;
}

inline double procrustes_distance(const Shape& a, const Shape& b) {
  return std::sqrt(procrustes_distance_sq(a, b));
}

}  // namespace shapestat::testing
