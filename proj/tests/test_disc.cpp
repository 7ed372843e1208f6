#include "fatou/disc.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fatou;

namespace {

// Trapezoid quadrature of a radial density between radii t0 < t1.
double radial_integral(double t0, double t1, double (*density)(double)) {
  const int n = 4000;
  double h = (t1 - t0) / n;
  double acc = 0.5 * (density(t0) + density(t1));
  for (int i = 1; i < n; ++i) acc += density(t0 + i * h);
  return acc * h;
}

double lower_density(double t) { return 1.0 / (2.0 * (1.0 - t)); }
double upper_density(double t) { return 2.0 / (1.0 - t); }

}  // namespace

TEST_CASE("hyperbolic distance identity and the ln 3 oracle") {
  DiscPoint o(cplx(0, 0));
  CHECK(disc_hyperbolic_distance(o, o) == 0.0);

  // 1-D oracle: rho(0, 1/2) equals the integral of the exact density
  // 2/(1 - t^2) over [0, 1/2], evaluated by quadrature. Analytically ln 3.
  const int n = 20000;
  double acc = 0.5 * (2.0 + 2.0 / (1.0 - 0.25));
  for (int i = 1; i < n; ++i) {
    double t = 0.5 * i / n;
    acc += 2.0 / (1.0 - t * t);
  }
  double oracle = acc * (0.5 / n);
  double got = disc_hyperbolic_distance(o, DiscPoint(cplx(0.5, 0)));
  CHECK(got == Catch::Approx(oracle).margin(1e-6));
  CHECK(got == Catch::Approx(std::log(3.0)).margin(1e-12));
}

TEST_CASE("conformal invariance under disc automorphisms") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    DiscPoint z(rng.disc_point(0.98));
    DiscPoint w(rng.disc_point(0.98));
    Mobius m{rng.uniform(0, kTwoPi), rng.disc_point(0.9)};
    DiscPoint mz(m(z.z)), mw(m(w.z));
    CHECK(disc_hyperbolic_distance(z, w) ==
          Catch::Approx(disc_hyperbolic_distance(mz, mw)).margin(1e-10));
  }
}

TEST_CASE("density sandwich along radial segments") {
  // On a radial segment the geodesic is the segment itself, so the distance
  // lies between the integrals of the two density bounds 1/(2 dist(.,bd))
  // and 2/dist(.,bd).
  Rng rng(42);
  for (int i = 0; i < 10000; ++i) {
    double phi = rng.uniform(0, kTwoPi);
    double t0 = rng.uniform(0.0, 0.995);
    double t1 = rng.uniform(0.0, 0.995);
    if (t0 > t1) std::swap(t0, t1);
    if (t1 - t0 < 1e-6) continue;
    cplx dir = std::polar(1.0, phi);
    double d = disc_hyperbolic_distance(DiscPoint(t0 * dir), DiscPoint(t1 * dir));
    double lo = radial_integral(t0, t1, lower_density);
    double hi = radial_integral(t0, t1, upper_density);
    CHECK(d >= lo - 1e-3);
    CHECK(d <= hi + 1e-3);
  }
}

TEST_CASE("boundary points rejected by the distance") {
  CHECK_THROWS_AS(DiscPoint(cplx(1.0, 0.0)), error);
  CHECK_NOTHROW(BoundaryPoint(std::polar(1.0, 0.7)));
  CHECK_THROWS_AS(BoundaryPoint(cplx(0.5, 0)), error);
}
