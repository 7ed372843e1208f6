#pragma once

#include <algorithm>
#include <vector>

#include "fatou/core.hpp"

namespace fatou {

/// Dense polynomial with ascending coefficients: c[0] + c[1] z + ... + c[n] z^n.
struct Poly {
  std::vector<cplx> c;

  Poly() = default;
  explicit Poly(std::vector<cplx> coeffs) : c(std::move(coeffs)) {}

  int degree() const { return static_cast<int>(c.size()) - 1; }

  cplx eval(cplx z) const {
    cplx acc(0, 0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// Horner evaluation of value and first derivative in one pass.
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const {
    cplx p(0, 0), dp(0, 0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      dp = dp * z + p;
      p = p * z + *it;
    }
    return {p, dp};
  }

  Poly derivative() const {
    if (c.size() <= 1) return Poly{{cplx(0, 0)}};
    std::vector<cplx> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = double(k) * c[k];
    return Poly(std::move(d));
  }

  double max_magnitude() const {
    double m = 0;
    for (auto v : c) m = std::max(m, std::abs(v));
    return m;
  }

  /// Drops leading coefficients below rel_tol * max |c|.
  Poly trimmed(double rel_tol = 1e-12) const {
    double cut = rel_tol * max_magnitude();
    std::size_t n = c.size();
    while (n > 1 && std::abs(c[n - 1]) <= cut) --n;
    return Poly(std::vector<cplx>(c.begin(), c.begin() + n));
  }

  static Poly from_roots(const std::vector<cplx>& roots, cplx leading = cplx(1, 0)) {
    std::vector<cplx> acc{leading};
    for (cplx r : roots) {
      std::vector<cplx> next(acc.size() + 1, cplx(0, 0));
      for (std::size_t i = 0; i < acc.size(); ++i) {
        next[i] += -r * acc[i];
        next[i + 1] += acc[i];
      }
      acc = std::move(next);
    }
    return Poly(std::move(acc));
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    std::vector<cplx> out(a.c.size() + b.c.size() - 1, cplx(0, 0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(out));
  }

  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<cplx> out(std::max(a.c.size(), b.c.size()), cplx(0, 0));
    for (std::size_t i = 0; i < a.c.size(); ++i) out[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) out[i] -= b.c[i];
    return Poly(std::move(out));
  }
};

/// All complex roots by Aberth-Ehrlich simultaneous iteration, refined to
/// residual ~1e-12 relative to the coefficient scale. The polynomial is
/// trimmed first; zero roots from a vanishing constant term are split off
/// exactly.
inline std::vector<cplx> polynomial_roots(const Poly& input, int max_iter = 200) {
  Poly p = input.trimmed();
  int n = p.degree();
  if (n <= 0) return {};
  std::vector<cplx> out;

  // Exact zero roots: strip z^k factor.
  double cut = 1e-14 * p.max_magnitude();
  std::size_t k0 = 0;
  while (k0 + 1 < p.c.size() && std::abs(p.c[k0]) <= cut) ++k0;
  for (std::size_t i = 0; i < k0; ++i) out.push_back(cplx(0, 0));
  if (k0 > 0) p = Poly(std::vector<cplx>(p.c.begin() + k0, p.c.end()));
  n = p.degree();
  if (n <= 0) return out;
  if (n == 1) {
    out.push_back(-p.c[0] / p.c[1]);
    return out;
  }

  // Cauchy-style radius for the initial ring.
  double an = std::abs(p.c.back());
  double radius = 0;
  for (int k = 0; k < n; ++k)
    radius = std::max(radius, 2.0 * std::pow(std::abs(p.c[k]) / an, 1.0 / double(n - k)));
  if (radius <= 0 || !std::isfinite(radius)) radius = 1.0;

  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) {
    double ang = kTwoPi * (double(i) + 0.35) / double(n) + 0.42;
    z[i] = std::polar(radius, ang);
  }

  for (int it = 0; it < max_iter; ++it) {
    double step_max = 0;
    for (int i = 0; i < n; ++i) {
      auto [pv, dv] = p.eval_with_derivative(z[i]);
      if (pv == cplx(0, 0)) continue;
      cplx ratio = (dv == cplx(0, 0)) ? cplx(0, 0) : pv / dv;
      cplx sum(0, 0);
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      cplx denom = 1.0 - ratio * sum;
      cplx w = (std::abs(denom) > 1e-300) ? ratio / denom : ratio;
      z[i] -= w;
      step_max = std::max(step_max, std::abs(w));
    }
    if (step_max < 1e-14 * std::max(1.0, radius)) break;
  }

  // Newton polish.
  for (int i = 0; i < n; ++i) {
    for (int it = 0; it < 8; ++it) {
      auto [pv, dv] = p.eval_with_derivative(z[i]);
      if (std::abs(dv) < 1e-300) break;
      cplx step = pv / dv;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      z[i] -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z[i]))) break;
    }
  }

  out.insert(out.end(), z.begin(), z.end());
  return out;
}

struct RootCluster {
  cplx center;
  int multiplicity = 1;
};

namespace detail {

/// Center polish for a multiplicity-m cluster: Newton on the (m-1)-th
/// derivative, whose root there is simple. Cancels first-order solver scatter.
inline cplx polish_cluster_center(const Poly& p, cplx center, int m, double guard) {
  Poly d = p;
  for (int k = 0; k < m - 1; ++k) d = d.derivative();
  for (int it = 0; it < 60; ++it) {
    auto [pv, dv] = d.eval_with_derivative(center);
    if (std::abs(dv) < 1e-300) break;
    cplx step = pv / dv;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    if (std::abs(step) > guard) break;  // polish must stay inside the cluster
    center -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(center))) break;
  }
  return center;
}

/// A claimed multiplicity must be backed by vanishing derivative orders:
/// |p^(k)(c)| for k < m has to be far below what two merely-close simple
/// roots would produce at the cluster scale.
inline bool multiplicity_verified(const Poly& p, cplx c, int m, double sep) {
  std::vector<Poly> derivs{p};
  for (int k = 1; k <= m; ++k) derivs.push_back(derivs.back().derivative());
  double ref = std::abs(derivs[m].eval(c));
  double floor_scale = 0;
  for (int k = 0; k <= m; ++k) floor_scale = std::max(floor_scale, derivs[k].max_magnitude());
  double grow = std::max(1.0, std::abs(c));
  double growpow = 1.0;
  for (int i = 0; i < p.degree(); ++i) growpow *= grow;
  for (int k = m - 1; k >= 1; --k) {
    double fact = 1;
    for (int j = 2; j <= m - k; ++j) fact *= j;
    double bound = ref * std::pow(sep, double(m - k)) / fact + 1e-10 * floor_scale * growpow;
    if (std::abs(derivs[k].eval(c)) > bound) return false;
  }
  return true;
}

}  // namespace detail

/// Groups roots into multiplicity clusters. Chains within `tol`, polishes the
/// candidate center, then keeps the merge only if the derivative vanishing
/// orders confirm it; unconfirmed groups fall back to simple roots. The wide
/// chain tolerance absorbs the m-th-root coefficient-noise scatter of genuine
/// multiple roots (about 5e-6 for a triple at unit scale).
inline std::vector<RootCluster> cluster_roots(const Poly& p, const std::vector<cplx>& roots,
                                              double tol = 1e-4) {
  std::vector<RootCluster> clusters;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> group{i};
    used[i] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (used[j]) continue;
        for (std::size_t g : group) {
          if (std::abs(roots[j] - roots[g]) <= tol) {
            group.push_back(j);
            used[j] = true;
            grew = true;
            break;
          }
        }
      }
    }
    int m = static_cast<int>(group.size());
    cplx center(0, 0);
    for (std::size_t g : group) center += roots[g];
    center /= double(m);
    if (m == 1) {
      clusters.push_back({center, 1});
      continue;
    }
    cplx polished = detail::polish_cluster_center(p, center, m, 4.0 * tol);
    if (detail::multiplicity_verified(p, polished, m, 0.5 * tol)) {
      clusters.push_back({polished, m});
    } else {
      for (std::size_t g : group) clusters.push_back({roots[g], 1});
    }
  }
  std::sort(clusters.begin(), clusters.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
    return a.center.imag() < b.center.imag();
  });
  return clusters;
}

}  // namespace fatou
