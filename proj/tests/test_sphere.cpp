#include "fatou/sphere.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fatou;

TEST_CASE("chordal distance basic values") {
  SpherePoint z(cplx(0.3, -1.2));
  CHECK(sphere_distance(z, z) == 0.0);
  CHECK(sphere_distance(SpherePoint(cplx(0, 0)), SpherePoint::infinity()) == 2.0);

  // Direct evaluation of the chordal formula at the antipodal pair (1, -1):
  // 2*|1-(-1)| / sqrt(2*2) = 2.
  double expected = 2.0 * std::abs(cplx(1, 0) - cplx(-1, 0)) / std::sqrt(2.0 * 2.0);
  CHECK(sphere_distance(SpherePoint(1.0), SpherePoint(-1.0)) == Catch::Approx(expected));
  CHECK(expected == Catch::Approx(2.0));
}

TEST_CASE("chordal distance range and symmetry") {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    SpherePoint a = (i % 7 == 0) ? SpherePoint::infinity() : SpherePoint(rng.disc_point(20.0));
    SpherePoint b = (i % 11 == 0) ? SpherePoint::infinity() : SpherePoint(rng.disc_point(20.0));
    double d = sphere_distance(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 2.0);
    CHECK(d == sphere_distance(b, a));
    if (!(a == b)) CHECK(d > 0.0);
  }
}

TEST_CASE("chordal triangle inequality on random triples") {
  Rng rng(77);
  for (int i = 0; i < 10000; ++i) {
    auto pick = [&]() -> SpherePoint {
      double sel = rng.next_double();
      if (sel < 0.05) return SpherePoint::infinity();
      return SpherePoint(rng.disc_point(50.0));
    };
    SpherePoint a = pick(), b = pick(), c = pick();
    CHECK(sphere_distance(a, c) <= sphere_distance(a, b) + sphere_distance(b, c) + 1e-12);
  }
}

TEST_CASE("overflow normalizes to the single point at infinity") {
  SpherePoint big(cplx(3e12, 0));
  CHECK(big.is_inf());
  CHECK(big == SpherePoint::infinity());
  CHECK_THROWS_AS(SpherePoint(cplx(std::nan(""), 0)), error);
}
