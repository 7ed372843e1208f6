#pragma once

#include <cmath>

#include "fatou/core.hpp"

namespace fatou {

inline constexpr double kBoundaryTol = 1e-12;

/// Interior point of the unit disc, |z| < 1 strictly.
struct DiscPoint {
  cplx z;

  explicit DiscPoint(cplx value) : z(value) {
    require(std::abs(value) < 1.0, "DiscPoint: |z| >= 1");
  }
};

/// Unit-modulus point, | |z| - 1 | <= 1e-12.
struct BoundaryPoint {
  cplx zeta;

  explicit BoundaryPoint(cplx value) : zeta(value) {
    require(std::abs(std::abs(value) - 1.0) <= kBoundaryTol, "BoundaryPoint: |z| != 1");
  }
};

/// Hyperbolic distance in the unit disc with density 2/(1-|z|^2):
/// rho(z, w) = 2 artanh |(z-w)/(1 - conj(w) z)|.
inline double disc_hyperbolic_distance(const DiscPoint& a, const DiscPoint& b) {
  double p = std::abs((a.z - b.z) / (1.0 - std::conj(b.z) * a.z));
  return std::log((1.0 + p) / (1.0 - p));
}

/// Disc automorphism z -> e^{i theta} (z - a)/(1 - conj(a) z).
struct Mobius {
  double theta;
  cplx a;

  cplx operator()(cplx z) const {
    return std::polar(1.0, theta) * (z - a) / (1.0 - std::conj(a) * z);
  }
};

}  // namespace fatou
