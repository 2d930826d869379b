#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace shapestat {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr int kMinLandmarks = 3;
inline constexpr int kMaxLandmarks = 512;

/// An ordered configuration of k planar landmarks, stored as x + iy.
///
/// Construction rejects k < 3, k > 512 and configurations whose landmarks
/// all coincide.
class KAd {
 public:
  explicit KAd(ComplexVector points);
  explicit KAd(std::span<const Complex> points);

  int k() const noexcept { return static_cast<int>(points_.size()); }
  const ComplexVector& points() const noexcept { return points_; }

 private:
  ComplexVector points_;
};

/// A centered, unit-norm complex k-vector: a point on the preshape sphere.
class Preshape {
 public:
  /// Validates that `u` is centered (|sum| <= 1e-12) and has unit norm
  /// (within 1e-12). Throws InvalidArgument otherwise.
  explicit Preshape(ComplexVector u);

  /// Re-centers and re-normalizes an arbitrary nonzero vector. Used to
  /// absorb rounding drift after arithmetic on preshapes.
  static Preshape project(const ComplexVector& v);

  int k() const noexcept { return static_cast<int>(u_.size()); }
  const ComplexVector& vector() const noexcept { return u_; }

  /// e^{i theta} u
  Preshape rotated(double theta) const;

 private:
  struct Unchecked {};
  Preshape(ComplexVector u, Unchecked) : u_(std::move(u)) {}

  ComplexVector u_;
};

/// The rotation orbit of a preshape. The stored representative is
/// arbitrary; every function taking a Shape is invariant under
/// rep -> e^{i theta} rep.
class Shape {
 public:
  explicit Shape(Preshape rep) : rep_(std::move(rep)) {}

  const Preshape& rep() const noexcept { return rep_; }
  int k() const noexcept { return rep_.k(); }

 private:
  Preshape rep_;
};

/// Real dimension of the shape space for k landmarks.
constexpr int shape_space_dim(int k) noexcept { return 2 * k - 4; }

Preshape to_preshape(const KAd& kad);
Shape to_shape(const KAd& kad);

/// u* v (conjugate-linear in the first argument).
Complex hermitian_inner(const Preshape& u, const Preshape& v);

/// Full Procrustes distance squared, 2 (1 - |u* v|^2), in [0, 2].
double procrustes_distance_sq(const Shape& a, const Shape& b);

/// Geodesic distance arccos|u* v| in [0, pi/2], evaluated as
/// atan2(|v~ - |c| u|, |c|) so that small distances keep full precision.
double geodesic_distance(const Shape& a, const Shape& b);

/// e^{i theta} u with theta minimizing |e^{i theta} u - m|.
Preshape align_rotation(const Preshape& u, const Preshape& m);

namespace detail {

// Decomposition of v relative to u used by the geodesic distance and the
// log map: with c = u* v, v_aligned = v conj(c)/|c|, the residual
// v_aligned - |c| u is horizontal at u and has norm sin(angle).
struct OrbitGeometry {
  double cos_angle = 1.0;  // |c|
  double sin_angle = 0.0;  // |residual|
  double angle = 0.0;      // atan2(sin_angle, cos_angle)
  ComplexVector residual;
};

OrbitGeometry orbit_geometry(const ComplexVector& u, const ComplexVector& v);

}  // namespace detail

}  // namespace shapestat
