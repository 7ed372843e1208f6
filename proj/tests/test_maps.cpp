#include "fatou/maps.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fatou;

namespace {

cplx value_of(const MeromorphicMap& m, cplx z) {
  auto [v, d] = m.evaluate_with_derivative(SpherePoint(z));
  (void)d;
  return v.value();
}

}  // namespace

TEST_CASE("newton map closed forms") {
  // Newton of sin z equals z - tan z at random points.
  auto n_sin = newton_map({EntireFamily::Sin, {}});
  Rng rng(101);
  for (int i = 0; i < 100; ++i) {
    cplx z = rng.disc_point(3.0);
    if (std::abs(std::cos(z)) < 0.1) continue;
    cplx want = z - std::sin(z) / std::cos(z);
    CHECK(std::abs(value_of(n_sin, z) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }

  // Newton of z + e^z equals e^z (z-1)/(e^z+1).
  auto n_zpe = newton_map({EntireFamily::ZPlusExp, {}});
  for (int i = 0; i < 100; ++i) {
    cplx z = rng.disc_point(3.0);
    cplx want = std::exp(z) * (z - 1.0) / (std::exp(z) + 1.0);
    CHECK(std::abs(value_of(n_zpe, z) - want) <= 1e-11 * std::max(1.0, std::abs(want)));
  }

  // Newton of z^3 - 1 equals (2z^3+1)/(3z^2), checked by evaluator cross-check.
  auto n_poly = MeromorphicMap::from_spec("newton:poly:1,0,0,-1");
  for (int i = 0; i < 100; ++i) {
    cplx z = rng.disc_point(3.0);
    if (std::abs(z) < 0.2) continue;
    cplx want = (2.0 * z * z * z + 1.0) / (3.0 * z * z);
    CHECK(std::abs(value_of(n_poly, z) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
  }

  CHECK_THROWS_AS(newton_map({EntireFamily::Polynomial, {cplx(1, 0), cplx(2, 0)}}), error);
}

TEST_CASE("evaluate_with_derivative spot values") {
  auto zpt = MeromorphicMap::from_spec("z+tan");
  // z + tan z at i equals i (1 + tanh 1).
  cplx want = cplx(0, 1) * (1.0 + std::tanh(1.0));
  CHECK(std::abs(value_of(zpt, cplx(0, 1)) - want) < 1e-14);

  auto [pole_v, pole_d] = zpt.evaluate_with_derivative(SpherePoint(cplx(kPi / 2, 0)));
  CHECK(pole_v.is_inf());
  CHECK(pole_d.is_inf());

  auto zmt = MeromorphicMap::from_spec("z-tan");
  for (long k : {-2L, 0L, 3L}) {
    auto [v, d] = zmt.evaluate_with_derivative(SpherePoint(cplx(double(k) * kPi, 0)));
    CHECK(std::abs(v.value() - cplx(double(k) * kPi, 0)) < 1e-12);
    CHECK(std::abs(d.value()) < 1e-12);
  }
}

TEST_CASE("pole enumeration") {
  auto zmt = MeromorphicMap::from_spec("z-tan");
  // The four lattice poles nearest the origin; +-3pi/2 ~ +-4.712 needs the
  // window to reach past 4.72.
  auto poles = zmt.poles_in_rect({-5, -1, 5, 1});
  REQUIRE(poles.size() == 4);
  CHECK(poles[0].value().real() == Catch::Approx(-3 * kPi / 2));
  CHECK(poles[1].value().real() == Catch::Approx(-kPi / 2));
  CHECK(poles[2].value().real() == Catch::Approx(kPi / 2));
  CHECK(poles[3].value().real() == Catch::Approx(3 * kPi / 2));

  auto n_poly = MeromorphicMap::from_spec("newton:poly:1,0,0,-1");
  auto p2 = n_poly.poles_in_rect({-1, -1, 1, 1});
  REQUIRE(p2.size() == 1);
  CHECK(std::abs(p2[0].value()) < 1e-9);

  auto zpt = MeromorphicMap::from_spec("z+tan");
  CHECK(zpt.poles_in_rect({0.1, 0.0, 0.2, 1.0}).empty());

  // Listed poles blow up the map: |1/f(p + eps)| <= 1e-6.
  for (const auto& p : zmt.poles_in_rect({-8, -1, 8, 1})) {
    cplx probe = p.value() + cplx(1e-8, 1e-8) / std::sqrt(2.0);
    auto v = zmt.evaluate(SpherePoint(probe));
    if (!v.is_inf()) CHECK(1.0 / std::abs(v.value()) <= 1e-6);
  }
}

TEST_CASE("fixed points per family") {
  auto zmt = MeromorphicMap::from_spec("z-tan");
  auto fx = zmt.fixed_points_in_rect({-1, -1, 1, 1});
  REQUIRE(fx.size() == 1);
  CHECK(std::abs(fx[0].first.value()) < 1e-12);
  CHECK(std::abs(fx[0].second) < 1e-12);  // superattracting

  auto zpt = MeromorphicMap::from_spec("z+tan");
  auto fx2 = zpt.fixed_points_in_rect({-1, -1, 1, 1});
  REQUIRE(fx2.size() == 1);
  CHECK(std::abs(fx2[0].second - cplx(2, 0)) < 1e-12);  // 1 + sec^2(0) = 2

  auto zit = MeromorphicMap::from_spec("z+i+tan");
  CHECK(zit.fixed_points_in_rect({-10, -10, 10, 10}).empty());

  // Newton of z + e^z: the real root matches a bisection oracle.
  double lo = -1.0, hi = 0.0;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    ((mid + std::exp(mid) < 0) ? lo : hi) = mid;
  }
  double oracle = 0.5 * (lo + hi);
  auto n_zpe = MeromorphicMap::from_spec("newton:z+exp");
  auto fx3 = n_zpe.fixed_points_in_rect({-1, -0.5, 0, 0.5});
  REQUIRE(fx3.size() == 1);
  CHECK(std::abs(fx3[0].first.value() - cplx(oracle, 0)) < 1e-10);

  CHECK(MeromorphicMap::from_spec("newton:exp(-exp)").fixed_points_in_rect({-5, -5, 5, 5}).empty());
}

TEST_CASE("asymptotic drifts") {
  auto zit = MeromorphicMap::from_spec("z+i+tan");
  REQUIRE(zit.asymptotic_drift(Direction::Up).has_value());
  CHECK(*zit.asymptotic_drift(Direction::Up) == cplx(0, 2));

  auto zmt = MeromorphicMap::from_spec("z-tan");
  CHECK(*zmt.asymptotic_drift(Direction::Up) == cplx(0, -1));

  auto zpt = MeromorphicMap::from_spec("z+tan");
  CHECK(*zpt.asymptotic_drift(Direction::Down) == cplx(0, -1));

  CHECK(!MeromorphicMap::from_spec("newton:poly:1,0,0,-1").asymptotic_drift(Direction::Up));

  // Tabulated drifts validated at Im z = +-50.
  for (const char* spec : {"z+tan", "z-tan", "z+i+tan"}) {
    auto m = MeromorphicMap::from_spec(spec);
    for (Direction dir : {Direction::Up, Direction::Down}) {
      auto drift = m.asymptotic_drift(dir);
      REQUIRE(drift.has_value());
      cplx z(0.37, dir == Direction::Up ? 50.0 : -50.0);
      cplx fz = value_of(m, z);
      CHECK(std::abs(fz - z - *drift) <= 1e-6);
    }
  }
}

TEST_CASE("invariant line maps") {
  auto zmt = MeromorphicMap::from_spec("z-tan");
  auto r0 = zmt.invariant_line_map("r:0");
  CHECK(r0.offset == Catch::Approx(kPi / 2));

  // g(t) = t - coth t with g'(t) = 1 + 1/sinh^2 t, and odd symmetry.
  for (int i = 1; i <= 100; ++i) {
    double t = -10.0 + 20.0 * i / 101.0;
    if (std::abs(t) < 1e-3) continue;
    double want = t - std::cosh(t) / std::sinh(t);
    CHECK(r0.g(t) == Catch::Approx(want).margin(1e-12));
    double s = std::sinh(t);
    CHECK(r0.gp(t) == Catch::Approx(1.0 + 1.0 / (s * s)).margin(1e-12));
    CHECK(r0.gp(t) > 1.0);
    CHECK(r0.g(-t) == Catch::Approx(-r0.g(t)).margin(1e-12));
  }
  CHECK(std::abs(r0.g(20.0) - 19.0) <= 1e-8);  // coth t -> 1

  // The 2-D map restricted to the line agrees with the 1-D reduction.
  for (const char* id : {"r:0", "r:-2", "l:0", "l:1"}) {
    auto line = zmt.invariant_line_map(id);
    for (double t : {-3.0, -0.7, 0.4, 2.2, 9.0}) {
      cplx image = value_of(zmt, cplx(line.offset, t));
      CHECK(std::abs(image - cplx(line.offset, line.g(t))) <= 1e-9);
    }
  }

  CHECK_THROWS_AS(MeromorphicMap::from_spec("newton:z+exp").invariant_line_map("r:0"), error);
}

TEST_CASE("derivative matches central finite difference") {
  Rng rng(31337);
  for (const char* spec :
       {"z+tan", "z-tan", "z+i+tan", "newton:z+exp", "newton:1+z*exp", "newton:exp(-exp)",
        "newton:poly:1,0,0,-1"}) {
    auto m = MeromorphicMap::from_spec(spec);
    int checked = 0;
    while (checked < 1000) {
      cplx z = rng.disc_point(4.0);
      auto [v, d] = m.evaluate_with_derivative(SpherePoint(z));
      if (v.is_inf() || d.is_inf()) continue;
      double h = 1e-6;
      auto vp = m.evaluate(SpherePoint(z + cplx(h, 0)));
      auto vm = m.evaluate(SpherePoint(z - cplx(h, 0)));
      if (vp.is_inf() || vm.is_inf()) continue;
      cplx fd = (vp.value() - vm.value()) / (2.0 * h);
      if (std::abs(fd) > 1e4) continue;  // too close to a pole for the stencil
      double denom = std::max(1.0, std::abs(d.value()));
      CHECK(std::abs(fd - d.value()) / denom <= 1e-5);
      ++checked;
    }
  }
}

TEST_CASE("half plane and half strip invariance") {
  auto zpt = MeromorphicMap::from_spec("z+tan");
  Rng rng(909);
  for (int i = 0; i < 1000; ++i) {
    cplx z(rng.uniform(-20, 20), rng.uniform(1e-3, 12.0));
    cplx fz = value_of(zpt, z);
    CHECK(fz.imag() > z.imag());
  }

  // z - tan z maps each line r_k into itself.
  auto zmt = MeromorphicMap::from_spec("z-tan");
  for (long k : {-1L, 0L, 2L}) {
    double offset = kPi / 2 + double(k) * kPi;
    for (int i = 0; i < 200; ++i) {
      double t = -10.0 + 20.0 * (i + 0.5) / 200.0;
      if (std::abs(t) < 0.01) continue;
      cplx fz = value_of(zmt, cplx(offset, t));
      CHECK(std::abs(fz.real() - offset) <= 1e-9);
    }
  }

  // z + i + tan z maps the closed half strip S_k into itself. The cap -0.55
  // is slightly below -(ln 2)/2: at that shallower cap the top corners of the
  // strip overshoot the far wall (image offset -0.91 > pi/8), so the trapping
  // region starts a bit deeper.
  auto zit = MeromorphicMap::from_spec("z+i+tan");
  double cap = -0.55;
  for (int i = 0; i < 1000; ++i) {
    long k = long(rng.next_u64() % 5) - 2;
    double cx = kPi / 2 + double(k) * kPi;
    double x, y;
    switch (i % 3) {
      case 0:  // vertical boundary
        x = cx + (i % 2 ? kPi / 8 : -kPi / 8);
        y = cap - rng.uniform(0.0, 30.0);
        break;
      case 1:  // top boundary
        x = cx + rng.uniform(-kPi / 8, kPi / 8);
        y = cap;
        break;
      default:  // interior
        x = cx + rng.uniform(-kPi / 8, kPi / 8);
        y = cap - rng.uniform(0.0, 30.0);
    }
    cplx fz = value_of(zit, cplx(x, y));
    // Deep boundary points map to offset pi/8 - O(e^{-2|y|}), inside by less
    // than one ulp; compare against the closed strip.
    CHECK(std::abs(fz.real() - cx) <= kPi / 8 + 1e-12);
    CHECK(fz.imag() < cap);
  }
}
