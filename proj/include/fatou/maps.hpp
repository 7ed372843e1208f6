#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fatou/core.hpp"
#include "fatou/polyroots.hpp"
#include "fatou/sphere.hpp"

namespace fatou {

// ---------------------------------------------------------------------------
// Stable trigonometric kernels.
//
// tan(x+iy) = sin 2x / (cos 2x + cosh 2y) + i sinh 2y / (cos 2x + cosh 2y).
// For |y| > 5 the displayed split is rescaled by 2 e^{-2|y|} so that the
// hyperbolic terms never overflow and the limit forms are reached smoothly.
// ---------------------------------------------------------------------------

inline cplx stable_tan(cplx z) {
  double y = z.imag();
  if (std::abs(y) <= 5.0) return std::tan(z);
  double x = z.real();
  double e2 = std::exp(-2.0 * std::abs(y));  // in (0, e^-10)
  double e4 = e2 * e2;
  double den = 2.0 * e2 * std::cos(2.0 * x) + 1.0 + e4;
  double re = 2.0 * e2 * std::sin(2.0 * x) / den;
  double im = (1.0 - e4) / den;
  return {re, y > 0 ? im : -im};
}

/// tan^2 with full relative accuracy at any height (used for derivatives of
/// the tan family, which are 1 +- sec^2 = polynomial in tan).
inline cplx stable_tan_sq(cplx z) {
  cplx t = stable_tan(z);
  return t * t;
}

/// i + tan z without cancellation: equals 2iu/(1+u), u = e^{-2iz}, for
/// Im z < 0, where the direct difference loses all digits at depth.
inline cplx i_plus_tan(cplx z) {
  if (z.imag() >= 0.0) return cplx(0, 1) + stable_tan(z);
  cplx u = std::exp(cplx(0, -2) * z);  // |u| = e^{2 Im z} < 1
  return 2.0 * cplx(0, 1) * u / (1.0 + u);
}

// ---------------------------------------------------------------------------
// Families.
// ---------------------------------------------------------------------------

enum class EntireFamily { Sin, ZPlusExp, OnePlusZExp, ExpNegExp, Polynomial };

struct EntireFunction {
  EntireFamily family;
  /// Ascending coefficients, Polynomial family only.
  std::vector<cplx> poly;
};

enum class MapFamily {
  ZPlusTan,
  ZMinusTan,
  ZPlusIPlusTan,
  NewtonZPlusExp,
  NewtonOnePlusZExp,
  NewtonExpNegExp,
  Rational,
};

enum class Direction { Up, Down, Right, Left };

inline const char* direction_name(Direction d) {
  switch (d) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::Right: return "right";
    case Direction::Left: return "left";
  }
  return "?";
}

/// Escape signature: orbits in a Baker domain of this map eventually show
/// per-step increments near `drift` moving toward `direction`. A zero drift
/// marks the creeping regimes where increments vanish in the limit.
struct EscapeSignature {
  Direction direction;
  cplx drift;
};

/// One-dimensional restriction of the map to an invariant vertical line.
struct InvariantLine1D {
  std::string id;      // "r:<k>" or "l:<k>"
  double offset;       // the line is Re z = offset
  std::function<double(double)> g;
  std::function<double(double)> gp;
};

struct StepEval {
  SpherePoint value;
  SpherePoint derivative;
  cplx increment;        // f(z) - z by a cancellation-free closed form
  bool increment_valid;  // false at poles / overflow
};

namespace detail {

struct PoleLattice {
  bool present = false;
  cplx base;
  cplx period;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// MeromorphicMap: closed-form evaluator descriptor with pole lattice,
// asymptotic drifts and escape signatures.
// ---------------------------------------------------------------------------

class MeromorphicMap {
public:
  static MeromorphicMap from_spec(const std::string& spec);

  MapFamily family() const { return family_; }
  const std::string& spec() const { return spec_; }

  StepEval step(cplx z) const;

  /// f(z) and f'(z) on the sphere; poles yield (INF, INF).
  std::pair<SpherePoint, SpherePoint> evaluate_with_derivative(const SpherePoint& z) const {
    if (z.is_inf()) return {SpherePoint::infinity(), SpherePoint::infinity()};
    StepEval e = step(z.value());
    return {e.value, e.derivative};
  }

  SpherePoint evaluate(const SpherePoint& z) const { return evaluate_with_derivative(z).first; }

  std::vector<SpherePoint> poles_in_rect(const Rect& rect) const;

  /// Fixed points inside rect with their multipliers f'(z).
  std::vector<std::pair<SpherePoint, cplx>> fixed_points_in_rect(const Rect& rect) const;

  std::optional<cplx> asymptotic_drift(Direction dir) const {
    for (const auto& [d, v] : drifts_)
      if (d == dir) return v;
    return std::nullopt;
  }

  const std::vector<EscapeSignature>& escape_signatures() const { return signatures_; }

  InvariantLine1D invariant_line_map(const std::string& line_id) const;

  friend MeromorphicMap newton_map(const EntireFunction& f);

private:
  MapFamily family_;
  std::string spec_;
  Poly num_, den_;           // Rational only: f = num/den
  Poly fpoly_, fpoly_d_;     // Rational-from-Newton: the entire F and F'
  bool is_newton_poly_ = false;
  detail::PoleLattice lattice_;
  std::vector<cplx> finite_poles_;
  std::vector<std::pair<Direction, cplx>> drifts_;
  std::vector<EscapeSignature> signatures_;

  StepEval step_tan_family(cplx z) const;
  StepEval step_newton_zpe(cplx z) const;
  StepEval step_newton_opze(cplx z) const;
  StepEval step_newton_ene(cplx z) const;
  StepEval step_rational(cplx z) const;
};

MeromorphicMap newton_map(const EntireFunction& f);

// ---------------------------------------------------------------------------
// Implementation.
// ---------------------------------------------------------------------------

namespace detail {

inline StepEval make_infinite() {
  return {SpherePoint::infinity(), SpherePoint::infinity(), cplx(0, 0), false};
}

inline StepEval finish(cplx z, cplx inc, cplx deriv) {
  if (has_nan(inc) || has_nan(deriv)) fail(errc::evaluation, "map evaluation produced NaN");
  cplx v = z + inc;
  if (has_nan(v)) fail(errc::evaluation, "map evaluation produced NaN");
  if (std::abs(v) > kOverflowModulus || std::isinf(v.real()) || std::isinf(v.imag()))
    return make_infinite();
  return {SpherePoint(v), SpherePoint(deriv), inc, true};
}

inline double coth(double t) { return std::cosh(t) / std::sinh(t); }

}  // namespace detail

inline StepEval MeromorphicMap::step_tan_family(cplx z) const {
  // Exact lattice pole.
  double k = std::round((z.real() - kPi / 2) / kPi);
  cplx pole(kPi / 2 + k * kPi, 0.0);
  if (std::abs(z - pole) <= 1e-12) return detail::make_infinite();

  cplx t = stable_tan(z);
  if (has_nan(t)) fail(errc::evaluation, "tan evaluation produced NaN");
  if (std::abs(t) > kOverflowModulus) return detail::make_infinite();
  cplx t2 = t * t;
  switch (family_) {
    case MapFamily::ZPlusTan: return detail::finish(z, t, 2.0 + t2);
    case MapFamily::ZMinusTan: return detail::finish(z, -t, -t2);
    case MapFamily::ZPlusIPlusTan: return detail::finish(z, i_plus_tan(z), 2.0 + t2);
    default: break;
  }
  fail(errc::precondition, "not a tan family");
}

inline StepEval MeromorphicMap::step_newton_zpe(cplx z) const {
  // f = e^z (z-1)/(e^z+1) = z - (z+e^z)/(1+e^z), f' = (z+e^z) e^z/(1+e^z)^2.
  double x = z.real();
  double kp = std::round((z.imag() - kPi) / kTwoPi);
  cplx pole(0.0, kPi + kp * kTwoPi);
  if (std::abs(z - pole) <= 1e-12) return detail::make_infinite();
  if (x > 40.0) {
    cplx w = std::exp(-z);  // tiny
    cplx inc = -(z * w + 1.0) / (1.0 + w);
    cplx deriv = (z * w + 1.0) / ((1.0 + w) * (1.0 + w));
    return detail::finish(z, inc, deriv);
  }
  cplx u = std::exp(z);
  cplx den = 1.0 + u;
  if (std::abs(den) < 1e-300) return detail::make_infinite();
  cplx inc = -(z + u) / den;
  cplx deriv = (z + u) * u / (den * den);
  return detail::finish(z, inc, deriv);
}

inline StepEval MeromorphicMap::step_newton_opze(cplx z) const {
  // f = z - (z+e^{-z})/(1+z), f' = (z+e^{-z})(2+z)/(1+z)^2.
  if (std::abs(z + 1.0) <= 1e-12) return detail::make_infinite();
  if (z.real() < -690.0) return detail::make_infinite();  // e^{-z} overflows past 1e300
  cplx w = std::exp(-z);
  cplx den = 1.0 + z;
  cplx inc = -(z + w) / den;
  cplx deriv = (z + w) * (2.0 + z) / (den * den);
  return detail::finish(z, inc, deriv);
}

inline StepEval MeromorphicMap::step_newton_ene(cplx z) const {
  // f = z + e^{-z}, f' = 1 - e^{-z}; entire, no poles.
  if (z.real() < -690.0) return detail::make_infinite();
  cplx w = std::exp(-z);
  return detail::finish(z, w, 1.0 - w);
}

inline StepEval MeromorphicMap::step_rational(cplx z) const {
  if (is_newton_poly_) {
    auto [p, dp] = fpoly_.eval_with_derivative(z);
    if (std::abs(dp) < 1e-300) return detail::make_infinite();
    cplx inc = -p / dp;
    cplx ddp = fpoly_d_.derivative().eval(z);
    cplx deriv = p * ddp / (dp * dp);
    return detail::finish(z, inc, deriv);
  }
  auto [n, dn] = num_.eval_with_derivative(z);
  auto [d, dd] = den_.eval_with_derivative(z);
  if (std::abs(d) < 1e-300) return detail::make_infinite();
  cplx v = n / d;
  cplx deriv = (dn * d - n * dd) / (d * d);
  return detail::finish(z, v - z, deriv);
}

inline StepEval MeromorphicMap::step(cplx z) const {
  switch (family_) {
    case MapFamily::ZPlusTan:
    case MapFamily::ZMinusTan:
    case MapFamily::ZPlusIPlusTan: return step_tan_family(z);
    case MapFamily::NewtonZPlusExp: return step_newton_zpe(z);
    case MapFamily::NewtonOnePlusZExp: return step_newton_opze(z);
    case MapFamily::NewtonExpNegExp: return step_newton_ene(z);
    case MapFamily::Rational: return step_rational(z);
  }
  fail(errc::precondition, "unknown family");
}

inline std::vector<SpherePoint> MeromorphicMap::poles_in_rect(const Rect& rect) const {
  require(rect.finite(), "poles_in_rect: rect must be finite");
  std::vector<cplx> found;
  if (lattice_.present) {
    // p = base + k * period; period is purely real or purely imaginary here.
    cplx per = lattice_.period;
    bool horizontal = std::abs(per.real()) > std::abs(per.imag());
    double step = horizontal ? per.real() : per.imag();
    double lo = horizontal ? rect.x0 : rect.y0;
    double hi = horizontal ? rect.x1 : rect.y1;
    double b = horizontal ? lattice_.base.real() : lattice_.base.imag();
    long k0 = static_cast<long>(std::ceil((lo - b) / step - 1e-12));
    long k1 = static_cast<long>(std::floor((hi - b) / step + 1e-12));
    for (long k = k0; k <= k1; ++k) {
      cplx p = lattice_.base + double(k) * per;
      if (rect.contains(p)) found.push_back(p);
    }
  }
  for (cplx p : finite_poles_)
    if (rect.contains(p)) found.push_back(p);
  std::sort(found.begin(), found.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<SpherePoint> out;
  out.reserve(found.size());
  for (cplx p : found) out.emplace_back(p);
  return out;
}

namespace detail {

/// Damped Newton zero search for an analytic function given by value+derivative.
inline std::optional<cplx> newton_zero(const std::function<std::pair<cplx, cplx>(cplx)>& fn,
                                       cplx seed, double tol, int max_steps = 60) {
  cplx z = seed;
  auto [v, d] = fn(z);
  if (has_nan(v)) return std::nullopt;
  double best = std::abs(v);
  for (int it = 0; it < max_steps; ++it) {
    if (best <= tol) return z;
    if (std::abs(d) < 1e-300 || has_nan(d)) return std::nullopt;
    cplx full = v / d;
    double scale = 1.0;
    bool moved = false;
    for (int h = 0; h < 8; ++h) {
      cplx cand = z - scale * full;
      auto [cv, cd] = fn(cand);
      if (!has_nan(cv) && std::abs(cv) < best) {
        z = cand;
        v = cv;
        d = cd;
        best = std::abs(cv);
        moved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!moved) return (best <= tol) ? std::optional<cplx>(z) : std::nullopt;
  }
  return (best <= tol) ? std::optional<cplx>(z) : std::nullopt;
}

}  // namespace detail

inline std::vector<std::pair<SpherePoint, cplx>> MeromorphicMap::fixed_points_in_rect(
    const Rect& rect) const {
  require(rect.finite(), "fixed_points_in_rect: rect must be finite");
  std::vector<std::pair<SpherePoint, cplx>> out;
  auto push = [&](cplx z) {
    StepEval e = step(z);
    if (!e.increment_valid) return;
    out.emplace_back(SpherePoint(z), e.derivative.value());
  };

  switch (family_) {
    case MapFamily::ZPlusTan:
    case MapFamily::ZMinusTan: {
      long k0 = static_cast<long>(std::ceil(rect.x0 / kPi - 1e-12));
      long k1 = static_cast<long>(std::floor(rect.x1 / kPi + 1e-12));
      for (long k = k0; k <= k1; ++k) {
        cplx z(double(k) * kPi, 0.0);
        if (rect.contains(z)) push(z);
      }
      break;
    }
    case MapFamily::ZPlusIPlusTan:
    case MapFamily::NewtonExpNegExp:
      break;  // no fixed points: f(z)-z omits a value / never vanishes
    case MapFamily::Rational: {
      const Poly& zeros = is_newton_poly_ ? fpoly_ : (num_ - Poly({cplx(0, 0), cplx(1, 0)}) * den_);
      auto roots = polynomial_roots(zeros);
      for (const auto& cl : cluster_roots(zeros, roots, 1e-7))
        if (rect.contains(cl.center)) push(cl.center);
      break;
    }
    case MapFamily::NewtonZPlusExp:
    case MapFamily::NewtonOnePlusZExp: {
      // Zeros of the entire F found by damped Newton from a seed grid.
      auto F = [&](cplx z) -> std::pair<cplx, cplx> {
        if (family_ == MapFamily::NewtonZPlusExp) {
          cplx u = std::exp(z);
          return {z + u, 1.0 + u};
        }
        cplx u = std::exp(z);
        return {1.0 + z * u, u * (1.0 + z)};
      };
      std::vector<cplx> hits;
      int nx = std::max(8, int(rect.width() / 0.7));
      int ny = std::max(8, int(rect.height() / 0.7));
      for (int i = 0; i <= nx; ++i) {
        for (int j = 0; j <= ny; ++j) {
          cplx seed(rect.x0 + rect.width() * i / nx, rect.y0 + rect.height() * j / ny);
          auto r = detail::newton_zero(F, seed, 1e-13);
          if (!r) continue;
          if (!rect.contains(*r)) continue;
          bool dup = false;
          for (cplx h : hits)
            if (std::abs(h - *r) < 1e-7) dup = true;
          if (!dup) hits.push_back(*r);
        }
      }
      std::sort(hits.begin(), hits.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
      });
      for (cplx h : hits) push(h);
      break;
    }
  }

  // Residual contract: |f(z) - z| <= 1e-10.
  for (auto& [z, mult] : out) {
    (void)mult;
    StepEval e = step(z.value());
    if (!e.increment_valid || std::abs(e.increment) > 1e-10)
      fail(errc::inconsistency, "fixed point residual above tolerance");
  }
  return out;
}

inline InvariantLine1D MeromorphicMap::invariant_line_map(const std::string& line_id) const {
  require(line_id.size() >= 3 && (line_id[0] == 'r' || line_id[0] == 'l') && line_id[1] == ':',
          "line id must be r:<k> or l:<k>");
  long k = std::stol(line_id.substr(2));
  bool pole_line = line_id[0] == 'r';
  double offset = pole_line ? kPi / 2 + double(k) * kPi : double(k) * kPi;

  InvariantLine1D line;
  line.id = line_id;
  line.offset = offset;
  switch (family_) {
    case MapFamily::ZMinusTan:
      if (pole_line) {
        line.g = [](double t) { return t - detail::coth(t); };
        line.gp = [](double t) { double s = std::sinh(t); return 1.0 + 1.0 / (s * s); };
      } else {
        line.g = [](double t) { return t - std::tanh(t); };
        line.gp = [](double t) { double th = std::tanh(t); return th * th; };
      }
      return line;
    case MapFamily::ZPlusTan:
      if (pole_line) {
        line.g = [](double t) { return t + detail::coth(t); };
        line.gp = [](double t) { double s = std::sinh(t); return 1.0 - 1.0 / (s * s); };
      } else {
        line.g = [](double t) { return t + std::tanh(t); };
        line.gp = [](double t) { double c = std::cosh(t); return 1.0 + 1.0 / (c * c); };
      }
      return line;
    case MapFamily::ZPlusIPlusTan:
      if (pole_line) {
        line.g = [](double t) { return t + 1.0 + detail::coth(t); };
        line.gp = [](double t) { double s = std::sinh(t); return 1.0 - 1.0 / (s * s); };
      } else {
        line.g = [](double t) { return t + 1.0 + std::tanh(t); };
        line.gp = [](double t) { double c = std::cosh(t); return 1.0 + 1.0 / (c * c); };
      }
      return line;
    default:
      fail(errc::precondition, "family has no tabulated invariant lines");
  }
}

// ---------------------------------------------------------------------------
// Registry construction.
// ---------------------------------------------------------------------------

namespace detail {

inline MapFamily tan_or_newton_family(EntireFamily f) {
  switch (f) {
    case EntireFamily::Sin: return MapFamily::ZMinusTan;
    case EntireFamily::ZPlusExp: return MapFamily::NewtonZPlusExp;
    case EntireFamily::OnePlusZExp: return MapFamily::NewtonOnePlusZExp;
    case EntireFamily::ExpNegExp: return MapFamily::NewtonExpNegExp;
    case EntireFamily::Polynomial: return MapFamily::Rational;
  }
  fail(errc::precondition, "unknown entire family");
}

}  // namespace detail

inline MeromorphicMap MeromorphicMap::from_spec(const std::string& spec) {
  MeromorphicMap m;
  m.spec_ = spec;
  auto tan_lattice = [] {
    detail::PoleLattice l;
    l.present = true;
    l.base = cplx(kPi / 2, 0);
    l.period = cplx(kPi, 0);
    return l;
  };
  if (spec == "z+tan") {
    m.family_ = MapFamily::ZPlusTan;
    m.lattice_ = tan_lattice();
    m.drifts_ = {{Direction::Up, cplx(0, 1)}, {Direction::Down, cplx(0, -1)}};
    m.signatures_ = {{Direction::Up, cplx(0, 1)}, {Direction::Down, cplx(0, -1)}};
    return m;
  }
  if (spec == "z-tan" || spec == "newton:sin") {
    m.family_ = MapFamily::ZMinusTan;
    m.lattice_ = tan_lattice();
    m.drifts_ = {{Direction::Up, cplx(0, -1)}, {Direction::Down, cplx(0, 1)}};
    return m;
  }
  if (spec == "z+i+tan") {
    m.family_ = MapFamily::ZPlusIPlusTan;
    m.lattice_ = tan_lattice();
    m.drifts_ = {{Direction::Up, cplx(0, 2)}, {Direction::Down, cplx(0, 0)}};
    m.signatures_ = {{Direction::Up, cplx(0, 2)},
                     {Direction::Up, cplx(0, 0)},
                     {Direction::Down, cplx(0, 0)}};
    return m;
  }
  if (spec == "newton:z+exp") {
    m.family_ = MapFamily::NewtonZPlusExp;
    m.lattice_.present = true;
    m.lattice_.base = cplx(0, kPi);
    m.lattice_.period = cplx(0, kTwoPi);
    return m;
  }
  if (spec == "newton:1+z*exp") {
    m.family_ = MapFamily::NewtonOnePlusZExp;
    m.finite_poles_ = {cplx(-1, 0)};
    return m;
  }
  if (spec == "newton:exp(-exp)") {
    m.family_ = MapFamily::NewtonExpNegExp;
    m.signatures_ = {{Direction::Right, cplx(0, 0)}};
    return m;
  }
  if (spec.rfind("newton:poly:", 0) == 0) {
    std::string rest = spec.substr(12);
    std::vector<cplx> desc;
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      std::size_t comma = rest.find(',', pos);
      std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      require(!tok.empty(), "newton:poly: empty coefficient");
      desc.push_back(cplx(std::stod(tok), 0.0));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    std::vector<cplx> asc(desc.rbegin(), desc.rend());
    EntireFunction f{EntireFamily::Polynomial, asc};
    MeromorphicMap nm = newton_map(f);
    nm.spec_ = spec;
    return nm;
  }
  fail(errc::precondition, "unknown map spec: " + spec);
}

inline MeromorphicMap newton_map(const EntireFunction& f) {
  switch (f.family) {
    case EntireFamily::Sin: return MeromorphicMap::from_spec("newton:sin");
    case EntireFamily::ZPlusExp: return MeromorphicMap::from_spec("newton:z+exp");
    case EntireFamily::OnePlusZExp: return MeromorphicMap::from_spec("newton:1+z*exp");
    case EntireFamily::ExpNegExp: return MeromorphicMap::from_spec("newton:exp(-exp)");
    case EntireFamily::Polynomial: {
      Poly p(f.poly);
      p = p.trimmed();
      require(p.degree() >= 2 && std::abs(p.c.back()) > 0.0,
              "newton_map: polynomial degree must be >= 2");
      MeromorphicMap m;
      m.family_ = MapFamily::Rational;
      m.is_newton_poly_ = true;
      m.fpoly_ = p;
      m.fpoly_d_ = p.derivative();
      m.spec_ = "newton:poly";
      // Numerator/denominator of the simplified closed form z - P/P'.
      m.num_ = Poly({cplx(0, 0), cplx(1, 0)}) * m.fpoly_d_ - m.fpoly_;
      m.den_ = m.fpoly_d_;
      auto roots = polynomial_roots(m.fpoly_d_);
      for (const auto& cl : cluster_roots(m.fpoly_d_, roots, 1e-7)) {
        // Poles of the Newton map are zeros of P' that are not zeros of P.
        if (std::abs(m.fpoly_.eval(cl.center)) > 1e-9) m.finite_poles_.push_back(cl.center);
      }
      return m;
    }
  }
  fail(errc::precondition, "unknown entire family");
}

}  // namespace fatou
