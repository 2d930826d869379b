#include "shapestat/shape_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shapestat/error.hpp"

namespace shapestat {

namespace {

constexpr double kInvariantTol = 1e-12;

void check_k(Eigen::Index k) {
  if (k < kMinLandmarks || k > kMaxLandmarks) {
    throw Error(ErrorCode::InvalidArgument,
                "landmark count k=" + std::to_string(k) + " outside [" +
                    std::to_string(kMinLandmarks) + ", " +
                    std::to_string(kMaxLandmarks) + "]");
  }
}

}  // namespace

KAd::KAd(ComplexVector points) : points_(std::move(points)) {
  check_k(points_.size());
  const Complex first = points_(0);
  if (std::all_of(points_.begin(), points_.end(),
                  [&](const Complex& z) { return z == first; })) {
    throw Error(ErrorCode::DegenerateConfiguration,
                "all landmarks coincide");
  }
}

KAd::KAd(std::span<const Complex> points)
    : KAd(ComplexVector(Eigen::Map<const ComplexVector>(
          points.data(), static_cast<Eigen::Index>(points.size())))) {}

Preshape::Preshape(ComplexVector u) : u_(std::move(u)) {
  check_k(u_.size());
  if (std::abs(u_.sum()) > kInvariantTol) {
    throw Error(ErrorCode::InvalidArgument, "preshape is not centered");
  }
  if (std::abs(u_.norm() - 1.0) > kInvariantTol) {
    throw Error(ErrorCode::InvalidArgument, "preshape is not unit norm");
  }
}

Preshape Preshape::project(const ComplexVector& v) {
  check_k(v.size());
  ComplexVector c = v.array() - v.mean();
  const double norm = c.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::DegenerateConfiguration,
                "centered configuration has zero norm");
  }
  c /= norm;
  return Preshape(std::move(c), Unchecked{});
}

Preshape Preshape::rotated(double theta) const {
  return Preshape(u_ * std::polar(1.0, theta), Unchecked{});
}

Preshape to_preshape(const KAd& kad) { return Preshape::project(kad.points()); }

Shape to_shape(const KAd& kad) { return Shape(to_preshape(kad)); }

Complex hermitian_inner(const Preshape& u, const Preshape& v) {
  return u.vector().dot(v.vector());
}

double procrustes_distance_sq(const Shape& a, const Shape& b) {
  // 2(1 - |c|^2) written as 2 sin^2 of the orbit angle, which keeps
  // precision when the shapes are close
  const auto g = detail::orbit_geometry(a.rep().vector(), b.rep().vector());
  const double s2 = g.sin_angle * g.sin_angle;
  return std::clamp(2.0 * s2 / (s2 + g.cos_angle * g.cos_angle), 0.0, 2.0);
}

double geodesic_distance(const Shape& a, const Shape& b) {
  return detail::orbit_geometry(a.rep().vector(), b.rep().vector()).angle;
}

Preshape align_rotation(const Preshape& u, const Preshape& m) {
  const Complex c = m.vector().dot(u.vector());
  if (std::abs(c) == 0.0) return u;
  return u.rotated(-std::arg(c));
}

namespace detail {

OrbitGeometry orbit_geometry(const ComplexVector& u, const ComplexVector& v) {
  OrbitGeometry g;
  const Complex c = u.dot(v);
  const double abs_c = std::min(std::abs(c), 1.0);
  const ComplexVector aligned =
      abs_c > 0.0 ? ComplexVector(v * (std::conj(c) / std::abs(c))) : v;
  g.residual = aligned - abs_c * u;
  g.cos_angle = abs_c;
  g.sin_angle = g.residual.norm();
  g.angle = std::atan2(g.sin_angle, abs_c);
  return g;
}

}  // namespace detail

}  // namespace shapestat
