#include <doctest.h>

#include <cmath>

#include "shapestat/error.hpp"
#include "shapestat/extrinsic.hpp"
#include "shapestat/simulate.hpp"
#include "test_support.hpp"

using namespace shapestat;
using namespace shapestat::testing;

TEST_CASE("same seed, same sample") {
  const SimSpec spec{irregular_template(6), 0.05, 20};
  const auto a = simulate_sample(spec, 9, 2);
  const auto b = simulate_sample(spec, 9, 2);
  const auto c = simulate_sample(spec, 9, 3);
  REQUIRE(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].rep().vector() == b[i].rep().vector());
  }
  CHECK(a[0].rep().vector() != c[0].rep().vector());
}

TEST_CASE("vanishing noise reproduces the template") {
  const KAd tpl = irregular_template(8);
  const auto s = simulate_sample(SimSpec{tpl, 1e-8, 50}, 1);
  for (const Shape& x : s) CHECK(procrustes_distance(x, to_shape(tpl)) < 1e-6);
}

TEST_CASE("noise scales with centroid size") {
  const KAd tpl = irregular_template(5);
  ComplexVector big = 1000.0 * tpl.points();
  const auto a = simulate_sample(SimSpec{tpl, 0.05, 10}, 4);
  const auto b = simulate_sample(SimSpec{KAd(big), 0.05, 10}, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(procrustes_distance_sq(a[i], b[i]) < 1e-20);
  }
  CHECK(centroid_size(KAd(big)) == doctest::Approx(1000.0 * centroid_size(tpl)));
}

TEST_CASE("sample variation stabilizes for large n") {
  const SimSpec spec{irregular_template(6), 0.01, 10000};
  const double v1 = extrinsic::extrinsic_variation_summary(simulate_sample(spec, 1)).variation;
  const double v2 = extrinsic::extrinsic_variation_summary(simulate_sample(spec, 2)).variation;
  CHECK(std::abs(v1 - v2) / v1 < 0.1);
}

TEST_CASE("invalid specs") {
  Philox4x32 rng(1);
  CHECK_THROWS_AS(simulate_sample(SimSpec{irregular_template(4), 0.0, 5}, rng), Error);
  CHECK_THROWS_AS(simulate_sample(SimSpec{irregular_template(4), 0.1, 0}, rng), Error);
}
