#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fatou/core.hpp"
#include "fatou/disc.hpp"
#include "fatou/parse.hpp"
#include "fatou/polyroots.hpp"
#include "fatou/sphere.hpp"

namespace fatou {

inline constexpr double kCircleTol = 1e-8;     // boundary membership on |z| = 1
inline constexpr double kParabolicTol = 1e-8;  // |multiplier - 1| for parabolic

enum class BoundaryClass { Attracting, Parabolic, Repelling, NotBoundary };

struct FixedPointRecord {
  SpherePoint location;
  int multiplicity = 1;
  cplx multiplier{0, 0};
  bool multiplier_infinite = false;
  bool on_boundary = false;
  BoundaryClass boundary_class = BoundaryClass::NotBoundary;
};

enum class InnerClassKind { Elliptic, Hyperbolic, SimplyParabolic, DoublyParabolic };

inline const char* inner_class_name(InnerClassKind k) {
  switch (k) {
    case InnerClassKind::Elliptic: return "elliptic";
    case InnerClassKind::Hyperbolic: return "hyperbolic";
    case InnerClassKind::SimplyParabolic: return "simply-parabolic";
    case InnerClassKind::DoublyParabolic: return "doubly-parabolic";
  }
  return "?";
}

struct InnerClass {
  InnerClassKind value;
  SpherePoint denjoy_wolff;
  cplx dw_multiplier{0, 0};
  int boundary_count = 0;  // D, distinct boundary fixed points
};

/// Finite Blaschke product e^{i theta} prod (z - a_k)/(1 - conj(a_k) z) with
/// all zeros in the open disc.
class BlaschkeProduct {
public:
  BlaschkeProduct(double theta, std::vector<cplx> zeros)
      : theta_(std::fmod(std::fmod(theta, kTwoPi) + kTwoPi, kTwoPi)), zeros_(std::move(zeros)) {
    require(!zeros_.empty(), "BlaschkeProduct: need at least one zero (degree >= 1)");
    for (cplx a : zeros_) require(std::abs(a) < 1.0, "BlaschkeProduct: zeros must lie in |a| < 1");
    num_ = Poly::from_roots(zeros_, std::polar(1.0, theta_));
    den_ = Poly({cplx(1, 0)});
    for (cplx a : zeros_) {
      if (a == cplx(0, 0)) continue;
      den_ = den_ * Poly({cplx(1, 0), -std::conj(a)});
    }
  }

  /// Parses "theta=<t>;zeros=<c1>,<c2>,..." with complex literals like
  /// 0.3+0.1i, -0.2i, 1e-3.
  static BlaschkeProduct parse(const std::string& text);

  int degree() const { return static_cast<int>(zeros_.size()); }
  double theta() const { return theta_; }
  const std::vector<cplx>& zeros() const { return zeros_; }

  cplx eval(cplx z) const { return num_.eval(z) / den_.eval(z); }

  cplx derivative(cplx z) const {
    auto [n, dn] = num_.eval_with_derivative(z);
    auto [d, dd] = den_.eval_with_derivative(z);
    return (dn * d - n * dd) / (d * d);
  }

  bool is_identity() const {
    return degree() == 1 && zeros_[0] == cplx(0, 0) && std::abs(theta_) < 1e-15;
  }

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }

private:
  double theta_;
  std::vector<cplx> zeros_;
  Poly num_, den_;
};

inline BlaschkeProduct BlaschkeProduct::parse(const std::string& text) {
  double theta = 0;
  std::vector<cplx> zeros;
  bool saw_zeros = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t semi = text.find(';', pos);
    std::string field = text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
    std::size_t eq = field.find('=');
    require(eq != std::string::npos, "blaschke spec: expected key=value, got '" + field + "'");
    std::string key = field.substr(0, eq), val = field.substr(eq + 1);
    if (key == "theta") {
      theta = std::stod(val);
    } else if (key == "zeros") {
      saw_zeros = true;
      std::size_t p = 0;
      while (p <= val.size()) {
        std::size_t comma = val.find(',', p);
        std::string tok = val.substr(p, comma == std::string::npos ? std::string::npos : comma - p);
        require(!tok.empty(), "blaschke spec: empty zero entry");
        zeros.push_back(detail::parse_complex(tok));
        if (comma == std::string::npos) break;
        p = comma + 1;
      }
    } else {
      fail(errc::precondition, "blaschke spec: unknown key '" + key + "'");
    }
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  require(saw_zeros, "blaschke spec: missing zeros=");
  return BlaschkeProduct(theta, std::move(zeros));
}

// ---------------------------------------------------------------------------
// Fixed point analysis.
// ---------------------------------------------------------------------------

/// All fixed points of B on the sphere with multiplicity; the multiplicity sum
/// is degree+1. Solved by clearing denominators into P(z) - z Q(z) = 0; a
/// degree drop is the multiplicity at infinity.
inline std::vector<FixedPointRecord> all_fixed_points(const BlaschkeProduct& B) {
  require(!B.is_identity(), "all_fixed_points: B = id has every point fixed");
  const Poly& P = B.numerator();
  const Poly& Q = B.denominator();
  Poly R = P - Poly({cplx(0, 0), cplx(1, 0)}) * Q;
  Poly Rt = R.trimmed(1e-11);
  int d = B.degree();
  int inf_mult = d + 1 - Rt.degree();

  std::vector<FixedPointRecord> out;
  auto roots = polynomial_roots(Rt);
  for (const auto& cl : cluster_roots(Rt, roots)) {
    FixedPointRecord rec;
    rec.location = SpherePoint(cl.center);
    rec.multiplicity = cl.multiplicity;
    rec.multiplier = B.derivative(cl.center);
    rec.on_boundary = std::abs(std::abs(cl.center) - 1.0) <= kCircleTol;
    if (rec.on_boundary) {
      // Julia-Wolff: the derivative at a boundary fixed point is positive
      // real (or infinite); classify from its size.
      double m = rec.multiplier.real();
      if (std::abs(rec.multiplier - cplx(1, 0)) <= kParabolicTol)
        rec.boundary_class = BoundaryClass::Parabolic;
      else if (m < 1.0)
        rec.boundary_class = BoundaryClass::Attracting;
      else
        rec.boundary_class = BoundaryClass::Repelling;
    }
    // Residual contract at simple roots.
    if (cl.multiplicity == 1 && std::abs(B.eval(cl.center) - cl.center) > 1e-8)
      fail(errc::inconsistency, "fixed point residual above 1e-8");
    out.push_back(rec);
  }

  if (inf_mult > 0) {
    FixedPointRecord rec;
    rec.location = SpherePoint::infinity();
    rec.multiplicity = inf_mult;
    // Multiplier at infinity in the 1/z chart: with e = deg Q, it is
    // q_e / p_d when d - e = 1 and 0 when the gap is larger.
    int gap = d - Q.degree();
    if (gap == 1)
      rec.multiplier = Q.c.back() / P.c.back();
    else
      rec.multiplier = cplx(0, 0);
    out.push_back(rec);
  }

  int total = 0;
  for (const auto& r : out) total += r.multiplicity;
  if (total != d + 1) fail(errc::inconsistency, "fixed point multiplicities do not sum to d+1");
  return out;
}

/// Distinct boundary fixed points (the D of the degree-D count) and their
/// records.
inline std::pair<int, std::vector<FixedPointRecord>> boundary_fixed_points(
    const BlaschkeProduct& B) {
  auto all = all_fixed_points(B);
  std::vector<FixedPointRecord> bd;
  for (const auto& r : all)
    if (r.on_boundary) bd.push_back(r);
  return {static_cast<int>(bd.size()), bd};
}

/// B'(zeta) at a boundary fixed point; positive real by Julia-Wolff, enforced
/// to imaginary residue 1e-8.
inline double angular_derivative(const BlaschkeProduct& B, const BoundaryPoint& zeta) {
  require(std::abs(B.eval(zeta.zeta) - zeta.zeta) <= kCircleTol,
          "angular_derivative: zeta is not a boundary fixed point");
  cplx d = B.derivative(zeta.zeta);
  if (std::abs(d.imag()) > kParabolicTol)
    fail(errc::inconsistency, "angular derivative has non-real residue above tolerance");
  if (d.real() <= 0) fail(errc::inconsistency, "angular derivative not positive");
  return d.real();
}

/// Denjoy-Wolff point and the elliptic / hyperbolic / simply-parabolic /
/// doubly-parabolic classification, cross-validated by iteration from 0.
inline InnerClass denjoy_wolff_and_classify(const BlaschkeProduct& B) {
  require(!B.is_identity(), "denjoy_wolff: B = id rejected");
  auto all = all_fixed_points(B);
  int d = B.degree();

  InnerClass out;
  const FixedPointRecord* dw = nullptr;

  // Interior attracting point <=> elliptic.
  for (const auto& r : all) {
    if (r.location.is_inf() || r.on_boundary) continue;
    if (std::abs(r.location.value()) < 1.0 - kCircleTol) {
      if (std::abs(r.multiplier) >= 1.0 - 1e-12)
        fail(errc::precondition,
             "denjoy_wolff: interior fixed point with |multiplier| >= 1 (elliptic Mobius "
             "rotation); Denjoy-Wolff dynamics undefined");
      dw = &r;
      out.value = InnerClassKind::Elliptic;
      break;
    }
  }

  if (!dw) {
    // Boundary Denjoy-Wolff: the unique boundary point with multiplier <= 1.
    for (const auto& r : all) {
      if (!r.on_boundary) continue;
      if (r.boundary_class == BoundaryClass::Attracting ||
          r.boundary_class == BoundaryClass::Parabolic) {
        if (dw) fail(errc::inconsistency, "two non-repelling boundary fixed points");
        dw = &r;
      }
    }
    if (!dw) fail(errc::inconsistency, "no Denjoy-Wolff candidate found");
    if (dw->boundary_class == BoundaryClass::Attracting) {
      out.value = InnerClassKind::Hyperbolic;
    } else if (dw->multiplicity == 2) {
      out.value = InnerClassKind::SimplyParabolic;
    } else if (dw->multiplicity == 3) {
      out.value = InnerClassKind::DoublyParabolic;
    } else {
      fail(errc::inconsistency, "parabolic Denjoy-Wolff point with unexpected multiplicity");
    }
  }

  out.denjoy_wolff = dw->location;
  out.dw_multiplier = dw->multiplier;
  int D = 0;
  for (const auto& r : all)
    if (r.on_boundary) ++D;
  out.boundary_count = D;

  // Theorem-level sanity: d-1 <= D <= d+1 with the class-specific value.
  if (D < d - 1 || D > d + 1) fail(errc::inconsistency, "boundary count outside [d-1, d+1]");
  switch (out.value) {
    case InnerClassKind::Elliptic:
      if (D != d - 1) fail(errc::inconsistency, "elliptic class requires D = d-1");
      break;
    case InnerClassKind::Hyperbolic:
      if (D != d + 1) fail(errc::inconsistency, "hyperbolic class requires D = d+1");
      break;
    case InnerClassKind::SimplyParabolic:
      if (D != d) fail(errc::inconsistency, "simply parabolic class requires D = d");
      break;
    case InnerClassKind::DoublyParabolic:
      if (D != d - 1) fail(errc::inconsistency, "doubly parabolic class requires D = d-1");
      break;
  }

  // Iteration oracle: the orbit of 0 must approach the Denjoy-Wolff point.
  // Near-parabolic multipliers converge too slowly for the standard budget
  // and get the parabolic one.
  bool parabolic = out.value == InnerClassKind::SimplyParabolic ||
                   out.value == InnerClassKind::DoublyParabolic;
  bool near_parabolic = std::abs(std::abs(dw->multiplier) - 1.0) < 1e-3;
  long max_steps = (parabolic || near_parabolic) ? 1000000 : 10000;
  double tol = (parabolic || near_parabolic) ? 1e-2 : 1e-4;
  cplx target = dw->location.value();
  cplx z(0, 0);
  bool converged = false;
  for (long n = 0; n < max_steps; ++n) {
    z = B.eval(z);
    if (std::abs(z - target) <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    fail(errc::inconsistency,
         "iteration does not confirm the algebraic Denjoy-Wolff point (internal inconsistency)");
  return out;
}

/// Sup over a 1000-point radial grid of the hyperbolic deviation between the
/// ray toward a boundary fixed point and its image.
inline double radial_hyperbolic_deviation(const BlaschkeProduct& B, const BoundaryPoint& zeta,
                                          double t_max) {
  require(t_max < 1.0, "radial_hyperbolic_deviation: t_max must be < 1");
  require(std::abs(B.eval(zeta.zeta) - zeta.zeta) <= kCircleTol,
          "radial_hyperbolic_deviation: zeta is not a boundary fixed point");
  const int n = 1000;
  double sup = 0;
  for (int i = 0; i < n; ++i) {
    double t = t_max * double(i) / double(n - 1);
    cplx p = t * zeta.zeta;
    cplx img = B.eval(p);
    if (std::abs(img) >= 1.0)
      fail(errc::inconsistency, "Blaschke image escaped the unit disc");
    sup = std::max(sup, disc_hyperbolic_distance(DiscPoint(img), DiscPoint(p)));
  }
  return sup;
}

/// Samples the open horodisc of radius r at the boundary Denjoy-Wolff point
/// and reports whether every image stays inside it.
inline bool wolff_horodisc_check(const BlaschkeProduct& B, double r) {
  require(r > 0.0 && r < 1.0, "wolff_horodisc_check: radius must be in (0,1)");
  InnerClass cls = denjoy_wolff_and_classify(B);
  require(!cls.denjoy_wolff.is_inf() && std::abs(std::abs(cls.denjoy_wolff.value()) - 1.0) <= kCircleTol,
          "wolff_horodisc_check: Denjoy-Wolff point is interior; horodisc undefined");
  cplx zeta = cls.denjoy_wolff.value();
  cplx center = (1.0 - r) * zeta;
  const int n = 1000;
  Rng rng(0x701fful);
  for (int i = 0; i < n; ++i) {
    double rad = r * std::sqrt(rng.next_double());
    double ang = kTwoPi * rng.next_double();
    cplx p = center + std::polar(rad * 0.999999, ang);
    cplx img = B.eval(p);
    if (std::abs(img - center) >= r) return false;
  }
  return true;
}

}  // namespace fatou
