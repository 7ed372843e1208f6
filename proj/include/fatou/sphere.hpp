#pragma once

#include <cmath>

#include "fatou/core.hpp"

namespace fatou {

/// A point of the Riemann sphere: a finite complex number or the single
/// unsigned point at infinity.
class SpherePoint {
public:
  SpherePoint() : z_(0.0, 0.0), inf_(false) {}
  SpherePoint(cplx z) : z_(z), inf_(false) {  // NOLINT: implicit by design
    if (has_nan(z)) fail(errc::evaluation, "SpherePoint: NaN component");
    if (std::abs(z) > kOverflowModulus || std::isinf(z.real()) || std::isinf(z.imag())) {
      z_ = cplx(0, 0);
      inf_ = true;
    }
  }
  SpherePoint(double x) : SpherePoint(cplx(x, 0)) {}  // NOLINT

  static SpherePoint infinity() {
    SpherePoint p;
    p.inf_ = true;
    return p;
  }

  bool is_inf() const { return inf_; }
  cplx value() const {
    if (inf_) fail(errc::precondition, "SpherePoint: value() of infinity");
    return z_;
  }

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.z_ == b.z_;
  }

private:
  cplx z_;
  bool inf_;
};

/// Chordal metric on the sphere, range [0, 2]; 2|a-b|/sqrt((1+|a|^2)(1+|b|^2))
/// with the usual limit when an argument is the point at infinity.
inline double sphere_distance(const SpherePoint& a, const SpherePoint& b) {
  if (a.is_inf() && b.is_inf()) return 0.0;
  if (a.is_inf() || b.is_inf()) {
    cplx z = a.is_inf() ? b.value() : a.value();
    return 2.0 / std::sqrt(1.0 + std::norm(z));
  }
  cplx za = a.value(), zb = b.value();
  return 2.0 * std::abs(za - zb) / std::sqrt((1.0 + std::norm(za)) * (1.0 + std::norm(zb)));
}

}  // namespace fatou
