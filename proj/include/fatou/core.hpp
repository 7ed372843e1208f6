#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fatou {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Modulus beyond which an orbit point is treated as the point at infinity.
inline constexpr double kOverflowModulus = 1e12;

enum class errc {
  precondition,
  inconsistency,
  evaluation,
  data_quality,
  inconclusive,
  io,
};

class error : public std::runtime_error {
public:
  error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  errc kind() const { return kind_; }

private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) { throw error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(errc::precondition, what);
}

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(cplx z) const {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
  bool finite() const {
    return std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) && std::isfinite(y1);
  }
  Rect expanded(double margin) const { return {x0 - margin, y0 - margin, x1 + margin, y1 + margin}; }
};

inline bool has_nan(cplx z) { return std::isnan(z.real()) || std::isnan(z.imag()); }

/// splitmix64; used where reproducibility across standard libraries matters.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform in the open disc of given radius.
  cplx disc_point(double radius) {
    double r = radius * std::sqrt(next_double());
    double phi = kTwoPi * next_double();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

private:
  std::uint64_t state_;
};

}  // namespace fatou
