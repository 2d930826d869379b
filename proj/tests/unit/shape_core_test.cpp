#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shapestat/error.hpp"
#include "shapestat/shape_core.hpp"
#include "test_support.hpp"

using namespace shapestat;
using namespace shapestat::testing;

namespace {

ComplexVector triangle() {
  ComplexVector z(3);
  z << Complex(0, 0), Complex(1, 0), Complex(0, 1);
  return z;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::NumericalFailure;
}

}  // namespace

TEST_CASE("to_preshape centers and normalizes by hand") {
  const Preshape u = to_preshape(KAd(triangle()));
  const Complex mean(1.0 / 3.0, 1.0 / 3.0);
  ComplexVector expected = triangle().array() - mean;
  const double norm = std::sqrt(2.0 / 9.0 + 5.0 / 9.0 + 5.0 / 9.0);
  expected /= norm;
  for (int j = 0; j < 3; ++j) CHECK(std::abs(u.vector()(j) - expected(j)) < 1e-15);
  CHECK(std::abs(u.vector().sum()) < 1e-15);
  CHECK(u.vector().norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("to_preshape is translation and scale invariant, rotation equivariant") {
  const Preshape u = to_preshape(KAd(triangle()));
  ComplexVector shifted = triangle().array() + Complex(5, 5);
  CHECK((to_preshape(KAd(shifted)).vector() - u.vector()).norm() < 1e-15);

  Philox4x32 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 3 + trial % 8;
    const ComplexVector z = random_complex_vector(rng, k);
    const Complex t(standard_normal(rng), standard_normal(rng));
    const double r = std::exp(standard_normal(rng));
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const ComplexVector moved = std::polar(r, theta) * (z.array() + t).matrix();
    const ComplexVector lhs = to_preshape(KAd(moved)).vector();
    const ComplexVector rhs = std::polar(1.0, theta) * to_preshape(KAd(z)).vector();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("degenerate and invalid configurations") {
  ComplexVector same = ComplexVector::Constant(4, Complex(1, 1));
  CHECK(code_of([&] { KAd bad(same); }) == ErrorCode::DegenerateConfiguration);
  CHECK(code_of([&] { Preshape::project(same); }) == ErrorCode::DegenerateConfiguration);
  CHECK(code_of([] { KAd bad(ComplexVector::Zero(2)); }) == ErrorCode::InvalidArgument);
  ComplexVector not_centered = ComplexVector::Zero(3);
  not_centered(0) = 1.0;
  CHECK(code_of([&] { Preshape p(not_centered); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("procrustes distance: identity, rotation, orthogonality") {
  Philox4x32 rng(2);
  const Shape a = random_shape(rng, 6);
  CHECK(procrustes_distance_sq(a, a) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(procrustes_distance_sq(a, rephased(a, random_phase(rng))) < 1e-14);

  ComplexVector u(4), v(4);
  u << 1, -1, 0, 0;
  v << 0, 0, 1, -1;
  const Shape su(Preshape::project(u));
  const Shape sv(Preshape::project(v));
  CHECK(procrustes_distance_sq(su, sv) == doctest::Approx(2.0));
  CHECK(geodesic_distance(su, sv) == doctest::Approx(std::numbers::pi / 2.0));
}

TEST_CASE("procrustes distance equals the embedding trace formula") {
  Philox4x32 rng(3);
  for (int i = 0; i < 100; ++i) {
    const int k = 3 + i % 10;
    const Shape a = random_shape(rng, k);
    const Shape b = random_shape(rng, k);
    const ComplexVector& u = a.rep().vector();
    const ComplexVector& v = b.rep().vector();
    const ComplexMatrix diff = u * u.adjoint() - v * v.adjoint();
    const double trace_form = diff.cwiseAbs2().sum();
    CHECK(std::abs(procrustes_distance_sq(a, b) - trace_form) < 1e-10);
    CHECK(procrustes_distance_sq(a, b) == doctest::Approx(procrustes_distance_sq(b, a)));
    const Shape a2 = rephased(a, random_phase(rng));
    const Shape b2 = rephased(b, random_phase(rng));
    CHECK(std::abs(procrustes_distance_sq(a2, b2) - procrustes_distance_sq(a, b)) < 1e-12);
  }
}

TEST_CASE("geodesic distance links to procrustes and obeys the triangle inequality") {
  Philox4x32 rng(4);
  for (int i = 0; i < 100; ++i) {
    const int k = 3 + i % 7;
    const Shape a = random_shape(rng, k);
    const Shape b = random_shape(rng, k);
    const Shape c = random_shape(rng, k);
    const double d = geodesic_distance(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= std::numbers::pi / 2.0);
    CHECK(std::abs(2.0 * std::sin(d) * std::sin(d) - procrustes_distance_sq(a, b)) < 1e-12);
    CHECK(d <= geodesic_distance(a, c) + geodesic_distance(c, b) + 1e-10);
    CHECK(geodesic_distance(a, a) < 1e-7);
  }
}

TEST_CASE("geodesic distance stays accurate for nearby shapes") {
  Philox4x32 rng(5);
  const Shape a = random_shape(rng, 5);
  ComplexVector w = random_complex_vector(rng, 5);
  w.array() -= w.mean();
  w -= a.rep().vector() * a.rep().vector().dot(w);
  w.normalize();
  for (double eps : {1e-3, 1e-6, 1e-9}) {
    const ComplexVector v = std::cos(eps) * a.rep().vector() + std::sin(eps) * w;
    const Shape b(Preshape::project(v));
    CHECK(geodesic_distance(a, b) == doctest::Approx(eps).epsilon(1e-6));
  }
}

TEST_CASE("align_rotation undoes rotations and beats a grid search") {
  Philox4x32 rng(6);
  const Preshape m = random_shape(rng, 5).rep();
  CHECK((align_rotation(m, m).vector() - m.vector()).norm() < 1e-14);
  const Preshape rotated = m.rotated(1.234);
  CHECK((align_rotation(rotated, m).vector() - m.vector()).cwiseAbs().maxCoeff() < 1e-12);

  for (int trial = 0; trial < 20; ++trial) {
    const Preshape u = random_shape(rng, 6).rep();
    const Preshape target = random_shape(rng, 6).rep();
    const Preshape aligned = align_rotation(u, target);
    const double best = (aligned.vector() - target.vector()).norm();
    double grid_best = 1e300;
    for (int g = 0; g < 360; ++g) {
      const double theta = 2.0 * std::numbers::pi * g / 360.0;
      grid_best = std::min(grid_best, (u.rotated(theta).vector() - target.vector()).norm());
    }
    CHECK(best <= grid_best + 1e-12);
    // differs from the input by a unit-modulus factor only
    const Complex ratio = aligned.vector().dot(u.vector());
    CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-12);
    CHECK((aligned.vector() - std::conj(ratio) * u.vector()).norm() < 1e-12);
  }
}

TEST_CASE("align_rotation leaves orthogonal inputs unchanged") {
  ComplexVector u(4), v(4);
  u << 1, -1, 0, 0;
  v << 0, 0, 1, -1;
  const Preshape pu = Preshape::project(u);
  const Preshape pv = Preshape::project(v);
  CHECK((align_rotation(pu, pv).vector() - pu.vector()).norm() == 0.0);
}

TEST_CASE("shape space dimension") {
  CHECK(shape_space_dim(3) == 2);
  CHECK(shape_space_dim(13) == 22);
}
