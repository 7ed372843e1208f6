#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fatou/dynamics.hpp"

namespace fatou {

/// Maximal run of same-fate samples on the circle |z| = R; the
/// finite-resolution section of one channel to infinity.
struct ChannelSection {
  double radius = 0;
  FateCode fate = kFateUnresolved;
  int first_sample = 0;  // k of the first angle 2 pi k / M
  int sample_len = 0;
  int samples = 0;  // M
  cplx midpoint;

  double theta_lo() const { return kTwoPi * first_sample / samples; }
  double theta_hi() const { return kTwoPi * (first_sample + sample_len) / samples; }

  bool contains_angle(double theta) const {
    double t = std::fmod(std::fmod(theta, kTwoPi) + kTwoPi, kTwoPi);
    double lo = theta_lo(), hi = theta_hi();
    if (hi <= kTwoPi + 1e-15 && t >= lo && t < hi) return true;
    // wrapped arc
    return hi > kTwoPi && (t >= lo || t < hi - kTwoPi);
  }
};

/// Classifies M equispaced samples of the circle |z| = R and groups maximal
/// runs of the component fate into arcs (with wraparound); runs shorter than
/// two samples are resolution noise and dropped. More than 1% evaluation
/// failures abort with a data-quality error.
inline std::vector<ChannelSection> channel_sections(const MeromorphicMap& m,
                                                    const std::vector<cplx>& targets,
                                                    const OrbitParams& params, FateCode fate,
                                                    double R, int M) {
  require(M >= 360, "channel_sections: need at least 360 samples");
  require(R > 0, "channel_sections: radius must be positive");
  std::vector<std::uint8_t> hit(M, 0);
  int errors = 0;
  for (int k = 0; k < M; ++k) {
    cplx z = std::polar(R, kTwoPi * k / M);
    OrbitResult r = classify_point(m, SpherePoint(z), targets, params);
    if (r.eval_error) ++errors;
    hit[k] = (r.fate == fate) ? 1 : 0;
  }
  if (errors * 100 > M) fail(errc::data_quality, "channel_sections: > 1% classification failures");

  std::vector<ChannelSection> arcs;
  if (std::all_of(hit.begin(), hit.end(), [](std::uint8_t h) { return h == 1; })) {
    ChannelSection full{R, fate, 0, M, M, std::polar(R, 0.0)};
    arcs.push_back(full);
    return arcs;
  }
  // Start scanning at a miss so wrapped runs close correctly.
  int start = 0;
  while (hit[start]) ++start;
  int run_begin = -1, run_len = 0;
  auto flush = [&]() {
    if (run_len >= 2) {
      ChannelSection arc;
      arc.radius = R;
      arc.fate = fate;
      arc.first_sample = run_begin % M;
      arc.sample_len = run_len;
      arc.samples = M;
      double mid = kTwoPi * (run_begin + 0.5 * (run_len - 1)) / M;
      arc.midpoint = std::polar(R, mid);
      arcs.push_back(arc);
    }
    run_begin = -1;
    run_len = 0;
  };
  for (int i = 0; i < M; ++i) {
    int k = (start + i) % M;
    if (hit[k]) {
      if (run_begin < 0) run_begin = start + i;
      ++run_len;
    } else if (run_begin >= 0) {
      flush();
    }
  }
  flush();
  std::sort(arcs.begin(), arcs.end(), [](const ChannelSection& a, const ChannelSection& b) {
    return a.first_sample < b.first_sample;
  });
  return arcs;
}

enum class AccessVerdict { Stable, Growing, Unresolved };

inline const char* verdict_name(AccessVerdict v) {
  switch (v) {
    case AccessVerdict::Stable: return "stable";
    case AccessVerdict::Growing: return "growing";
    case AccessVerdict::Unresolved: return "unresolved";
  }
  return "?";
}

/// One chained channel: the selected arc index per radius, -1 where absent.
struct ChannelChain {
  std::vector<int> arc;
};

struct AccessEstimate {
  FateCode fate = kFateUnresolved;
  std::vector<double> radii;
  int samples = 0;
  std::vector<std::vector<ChannelSection>> sections;  // all fate arcs per radius
  std::vector<std::vector<int>> parent;               // arc -> parent arc at previous radius
  std::vector<std::vector<std::uint8_t>> selected;    // component membership per arc
  std::vector<int> counts;                            // selected arcs per radius
  AccessVerdict verdict = AccessVerdict::Unresolved;
  int stable_count = 0;
  std::vector<ChannelChain> chains;  // chains over selected arcs
};

/// How arcs sharing the component's fate code are attributed to the queried
/// component.
///  - FateWide: every arc of the fate counts. Right for attracted basins
///    (codes are per-target) and for completely invariant Baker domains whose
///    creeping tongues shadow their true accesses.
///  - Anchored: only chains hanging from the arcs crossed by the straight
///    walk from the seed along the escape axis. Separates parallel Baker
///    strips that share a direction.
///  - MaskConnected: arcs whose midpoint cell is flood-connected to the seed
///    in a supplied mask covering the sampling discs.
enum class SelectionMode { FateWide, Anchored, MaskConnected };

/// Counts channels of one component across increasing radii. Arcs at
/// consecutive radii are chained by walking inward along the midpoint ray.
inline AccessEstimate count_accesses(const MeromorphicMap& m, const std::vector<cplx>& targets,
                                     const OrbitParams& params, const ComponentRef& comp,
                                     const std::vector<double>& radii, int M,
                                     SelectionMode mode = SelectionMode::FateWide,
                                     const ClassificationMask* connectivity = nullptr) {
  require(radii.size() >= 4, "count_accesses: need at least 4 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    require(radii[i] > radii[i - 1], "count_accesses: radii must increase");
  require(mode != SelectionMode::MaskConnected || connectivity,
          "count_accesses: MaskConnected requires a connectivity mask");

  AccessEstimate est;
  est.fate = comp.fate;
  est.radii = radii;
  est.samples = M;
  std::size_t n = radii.size();
  for (double R : radii)
    est.sections.push_back(channel_sections(m, targets, params, comp.fate, R, M));

  // Chain arcs radially: walk inward from each arc midpoint in 64 steps,
  // requiring component membership along the way, and attach to the arc
  // containing the entry angle.
  est.parent.resize(n);
  est.parent[0].assign(est.sections[0].size(), -1);
  for (std::size_t i = 1; i < n; ++i) {
    est.parent[i].assign(est.sections[i].size(), -1);
    for (std::size_t j = 0; j < est.sections[i].size(); ++j) {
      double theta = std::arg(est.sections[i][j].midpoint);
      bool ok = true;
      for (int s = 1; s <= 64 && ok; ++s) {
        double r = radii[i] - s * (radii[i] - radii[i - 1]) / 64.0;
        OrbitResult res = classify_point(m, SpherePoint(std::polar(r, theta)), targets, params);
        ok = res.fate == comp.fate;
      }
      if (!ok) continue;
      for (std::size_t pj = 0; pj < est.sections[i - 1].size(); ++pj) {
        if (est.sections[i - 1][pj].contains_angle(theta)) {
          est.parent[i][j] = int(pj);
          break;
        }
      }
    }
  }

  // Provisional chain ids over all arcs of the fate.
  std::vector<std::vector<int>> chain_id(n);
  int next_chain = 0;
  for (std::size_t i = 0; i < n; ++i) {
    chain_id[i].assign(est.sections[i].size(), -1);
    for (std::size_t j = 0; j < est.sections[i].size(); ++j) {
      int pj = (i > 0) ? est.parent[i][j] : -1;
      if (pj >= 0 && chain_id[i - 1][pj] >= 0) {
        bool taken = false;  // keep chains simple paths: one child per parent
        for (std::size_t jj = 0; jj < j; ++jj)
          if (chain_id[i][jj] == chain_id[i - 1][pj]) taken = true;
        chain_id[i][j] = taken ? next_chain++ : chain_id[i - 1][pj];
      } else {
        chain_id[i][j] = next_chain++;
      }
    }
  }

  // Component membership per arc.
  est.selected.resize(n);
  switch (mode) {
    case SelectionMode::FateWide:
      for (std::size_t i = 0; i < n; ++i) est.selected[i].assign(est.sections[i].size(), 1);
      break;
    case SelectionMode::MaskConnected: {
      auto reach = component_cells(m, *connectivity, comp);
      for (std::size_t i = 0; i < n; ++i) {
        est.selected[i].assign(est.sections[i].size(), 0);
        for (std::size_t j = 0; j < est.sections[i].size(); ++j) {
          int row, col;
          bool in = connectivity->cell_of(est.sections[i][j].midpoint, row, col);
          est.selected[i][j] =
              in && reach[std::size_t(row) * connectivity->grid.width + col] ? 1 : 0;
        }
      }
      break;
    }
    case SelectionMode::Anchored: {
      require(is_baker_fate(comp.fate), "count_accesses: Anchored applies to Baker components");
      Direction dir = Direction(comp.fate - 2);
      bool vertical = dir == Direction::Up || dir == Direction::Down;
      double sign = (dir == Direction::Up || dir == Direction::Right) ? 1.0 : -1.0;
      std::vector<std::uint8_t> anchored_chain(std::size_t(next_chain), 0);
      for (std::size_t i = 0; i < n; ++i) {
        double fixed = vertical ? comp.seed.real() : comp.seed.imag();
        if (std::abs(fixed) >= radii[i]) continue;
        double travel = sign * std::sqrt(radii[i] * radii[i] - fixed * fixed);
        cplx crossing = vertical ? cplx(fixed, travel) : cplx(travel, fixed);
        // Straight walk from the seed to the ring crossing stays in-fate.
        double moved = vertical ? comp.seed.imag() : comp.seed.real();
        double dist = std::abs(travel - moved);
        int steps = std::max(4, int(dist / 1.0));
        bool ok = true;
        for (int s = 1; s <= steps && ok; ++s) {
          double t = moved + (travel - moved) * s / steps;
          cplx pt = vertical ? cplx(fixed, t) : cplx(t, fixed);
          ok = classify_point(m, SpherePoint(pt), targets, params).fate == comp.fate;
        }
        if (!ok) continue;
        double theta = std::arg(crossing);
        for (std::size_t j = 0; j < est.sections[i].size(); ++j)
          if (est.sections[i][j].contains_angle(theta)) anchored_chain[chain_id[i][j]] = 1;
      }
      for (std::size_t i = 0; i < n; ++i) {
        est.selected[i].assign(est.sections[i].size(), 0);
        for (std::size_t j = 0; j < est.sections[i].size(); ++j)
          est.selected[i][j] = anchored_chain[chain_id[i][j]];
      }
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    int c = 0;
    for (auto s : est.selected[i]) c += s;
    est.counts.push_back(c);
  }

  // Verdict from the last three radii.
  int c1 = est.counts[n - 3], c2 = est.counts[n - 2], c3 = est.counts[n - 1];
  bool one_to_one = true;
  for (std::size_t i : {n - 2, n - 1}) {
    std::vector<int> used(est.sections[i - 1].size(), 0);
    for (std::size_t j = 0; j < est.sections[i].size(); ++j) {
      if (!est.selected[i][j]) continue;
      int pj = est.parent[i][j];
      if (pj < 0 || !est.selected[i - 1][pj] || used[pj]) {
        one_to_one = false;
        break;
      }
      used[pj] = 1;
    }
    if (!one_to_one) break;
    for (std::size_t pj = 0; pj < est.sections[i - 1].size(); ++pj)
      if (est.selected[i - 1][pj] && !used[pj]) one_to_one = false;
    if (!one_to_one) break;
  }
  if (c1 == c2 && c2 == c3 && c3 > 0 && one_to_one) {
    est.verdict = AccessVerdict::Stable;
    est.stable_count = c3;
  } else if (c1 < c2 && c2 < c3) {
    est.verdict = AccessVerdict::Growing;
  } else {
    est.verdict = AccessVerdict::Unresolved;
  }

  // Chains over selected arcs.
  std::vector<std::vector<int>> sel_chain(n);
  for (std::size_t i = 0; i < n; ++i) sel_chain[i].assign(est.sections[i].size(), -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < est.sections[i].size(); ++j) {
      if (!est.selected[i][j] || sel_chain[i][j] >= 0) continue;
      int pj = (i > 0) ? est.parent[i][j] : -1;
      if (pj >= 0 && est.selected[i - 1][pj] && sel_chain[i - 1][pj] >= 0) {
        int id = sel_chain[i - 1][pj];
        if (est.chains[id].arc[i] < 0) {
          sel_chain[i][j] = id;
          est.chains[id].arc[i] = int(j);
          continue;
        }
      }
      ChannelChain chain;
      chain.arc.assign(n, -1);
      chain.arc[i] = int(j);
      sel_chain[i][j] = int(est.chains.size());
      est.chains.push_back(chain);
    }
  }
  return est;
}

enum class Invariance { Invariant, NotInvariant, Unresolved };

inline const char* invariance_name(Invariance v) {
  switch (v) {
    case Invariance::Invariant: return "invariant";
    case Invariance::NotInvariant: return "not-invariant";
    case Invariance::Unresolved: return "unresolved";
  }
  return "?";
}

/// Maps the chained polyline through f and checks that the image tail stays
/// in the same chain's arcs.
inline Invariance access_invariance(const MeromorphicMap& m, const AccessEstimate& est,
                                    std::size_t chain_index) {
  require(est.verdict == AccessVerdict::Stable,
          "access_invariance: requires a STABLE access estimate");
  require(chain_index < est.chains.size(), "access_invariance: chain index out of range");
  const ChannelChain& chain = est.chains[chain_index];

  std::vector<std::pair<std::size_t, cplx>> vertices;  // (radius index, midpoint)
  for (std::size_t i = 0; i < est.radii.size(); ++i)
    if (chain.arc[i] >= 0) vertices.emplace_back(i, est.sections[i][chain.arc[i]].midpoint);
  require(vertices.size() >= 3, "access_invariance: chain spans fewer than 3 radii");

  int invariant_votes = 0;
  std::size_t tail = vertices.size() - 3;
  for (std::size_t v = tail; v < vertices.size(); ++v) {
    SpherePoint image = m.evaluate(SpherePoint(vertices[v].second));
    if (image.is_inf()) return Invariance::Unresolved;
    cplx w = image.value();
    // Largest chain radius not exceeding |w|.
    int at = -1;
    for (std::size_t i = 0; i < est.radii.size(); ++i)
      if (chain.arc[i] >= 0 && est.radii[i] <= std::abs(w)) at = int(i);
    if (at < 0) return Invariance::Unresolved;
    double theta = std::arg(w);
    if (est.sections[at][chain.arc[at]].contains_angle(theta)) {
      ++invariant_votes;
      continue;
    }
    for (const auto& other : est.sections[at])
      if (other.contains_angle(theta)) return Invariance::NotInvariant;
    return Invariance::Unresolved;
  }
  return invariant_votes == 3 ? Invariance::Invariant : Invariance::Unresolved;
}

// ---------------------------------------------------------------------------
// Accessible boundary poles.
// ---------------------------------------------------------------------------

struct PoleAccess {
  cplx pole;
  bool accessible = false;
  std::vector<std::pair<int, int>> witness;  // cell path seed -> pole-adjacent
};

struct PoleAccessReport {
  std::vector<PoleAccess> poles;
};

namespace detail {

/// Inverse-branch continuation: pulls the in-component path (seed, then the
/// chain's arc midpoints outward) back through f, starting from a preimage
/// branch next to the pole. The branch clings to the pole while the image is
/// beyond the innermost radius; its finite endpoint is a preimage of the seed
/// whose component membership the mask can check. Returns that endpoint and
/// the branch polyline on success.
inline std::optional<std::vector<cplx>> pull_back_branch(const MeromorphicMap& m, cplx pole,
                                                         const std::vector<cplx>& path,
                                                         double inner_radius) {
  if (path.size() < 2) return std::nullopt;

  // Dense image samples, far end first.
  std::vector<cplx> ws;
  for (std::size_t s = path.size() - 1; s > 0; --s) {
    cplx a = path[s], b = path[s - 1];
    int sub = std::max(2, int(std::abs(a - b) / 0.5));
    for (int j = 0; j < sub; ++j) ws.push_back(a + (b - a) * (double(j) / sub));
  }
  ws.push_back(path.front());

  auto solve = [&](cplx w, cplx seed) -> std::optional<cplx> {
    auto h = [&](cplx z) -> std::pair<cplx, cplx> {
      StepEval e = m.step(z);
      if (e.value.is_inf() || e.derivative.is_inf()) return {cplx(1e30, 0), cplx(1, 0)};
      return {e.value.value() - w, e.derivative.value()};
    };
    return newton_zero(h, seed, 1e-9, 60);
  };

  // Branch start: preimage of the far path vertex next to the pole.
  cplx w0 = ws.front();
  std::optional<cplx> z;
  std::vector<cplx> first_seeds;
  if (std::abs(pole - w0) > 1.0) {
    first_seeds.push_back(pole + 1.0 / (pole - w0));
    first_seeds.push_back(pole - 1.0 / (pole - w0));
  }
  for (int k = 0; k < 8; ++k) first_seeds.push_back(pole + std::polar(0.04, k * kPi / 4));
  for (cplx s0 : first_seeds) {
    auto cand = solve(w0, s0);
    if (cand && std::abs(*cand - pole) <= 0.75) {
      z = cand;
      break;
    }
  }
  if (!z) return std::nullopt;

  std::vector<cplx> branch{*z};
  for (std::size_t i = 1; i < ws.size(); ++i) {
    auto next = solve(ws[i], *z);
    if (!next) return std::nullopt;
    if (std::abs(*next - *z) > 0.5) return std::nullopt;  // jumped branches
    if (std::abs(ws[i]) >= inner_radius && std::abs(*next - pole) > 1.0)
      return std::nullopt;  // lost the petal while the image is still far out
    z = next;
    branch.push_back(*z);
  }
  return branch;
}

}  // namespace detail

/// A pole is accessible from the component iff a 4-connected path of
/// component cells joins the seed cell to one of the 8 cells around the
/// pole's cell. The cell test cannot resolve the quadratically tangent
/// approach petals of the tangent family at any fixed resolution, so when it
/// fails and channel data is available, the decision falls back to pulling an
/// in-component channel path back through the inverse branch at the pole and
/// checking that the branch endpoint (a preimage of the seed) lies in the
/// component.
inline PoleAccessReport accessible_poles(const MeromorphicMap& m, const ClassificationMask& mask,
                                         const ComponentRef& comp, const std::vector<cplx>& poles,
                                         const AccessEstimate* channels = nullptr) {
  require(mask.grid.width >= 400 && mask.grid.height >= 400,
          "accessible_poles: mask resolution must be at least 400x400");
  for (cplx p : poles)
    require(p.real() >= mask.grid.rect.x0 + 1.0 && p.real() <= mask.grid.rect.x1 - 1.0 &&
                p.imag() >= mask.grid.rect.y0 + 1.0 && p.imag() <= mask.grid.rect.y1 - 1.0,
            "accessible_poles: pole outside mask rect (margin 1)");

  // BFS with parents for witness reconstruction.
  int w = mask.grid.width, h = mask.grid.height;
  std::vector<int> parent(std::size_t(w) * h, -2);
  int srow, scol;
  if (!mask.cell_of(comp.seed, srow, scol)) fail(errc::precondition, "seed outside mask");
  if (mask.at(srow, scol).fate != comp.fate)
    fail(errc::precondition, "seed cell does not carry the component fate");
  std::queue<int> q;
  int sidx = srow * w + scol;
  parent[sidx] = -1;
  q.push(sidx);
  while (!q.empty()) {
    int idx = q.front();
    q.pop();
    int r = idx / w, c = idx % w;
    const int dr[4] = {1, -1, 0, 0};
    const int dc[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int nr = r + dr[k], nc = c + dc[k];
      if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
      int nidx = nr * w + nc;
      if (parent[nidx] != -2 || mask.at(nr, nc).fate != comp.fate) continue;
      parent[nidx] = idx;
      q.push(nidx);
    }
  }

  PoleAccessReport report;
  for (cplx p : poles) {
    PoleAccess pa;
    pa.pole = p;
    int prow, pcol;
    mask.cell_of(p, prow, pcol);
    int best = -1;
    for (int dr = -1; dr <= 1 && best < 0; ++dr) {
      for (int dc = -1; dc <= 1 && best < 0; ++dc) {
        if (dr == 0 && dc == 0) continue;
        int nr = prow + dr, nc = pcol + dc;
        if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
        if (parent[std::size_t(nr) * w + nc] != -2) best = nr * w + nc;
      }
    }
    if (best >= 0) {
      pa.accessible = true;
      for (int idx = best; idx >= 0; idx = parent[idx]) pa.witness.emplace_back(idx / w, idx % w);
      std::reverse(pa.witness.begin(), pa.witness.end());
    } else if (channels) {
      for (const ChannelChain& chain : channels->chains) {
        std::vector<cplx> path{comp.seed};
        for (std::size_t i = 0; i < channels->radii.size(); ++i)
          if (chain.arc[i] >= 0) path.push_back(channels->sections[i][chain.arc[i]].midpoint);
        if (path.size() < 3) continue;
        auto branch = detail::pull_back_branch(m, p, path, channels->radii.front());
        if (!branch) continue;
        cplx endpoint = branch->back();
        int er, ec;
        if (!mask.cell_of(endpoint, er, ec)) continue;
        if (mask.at(er, ec).fate != comp.fate) continue;
        if (parent[std::size_t(er) * w + ec] == -2) continue;  // endpoint not in the component
        pa.accessible = true;
        for (cplx bz : *branch) {
          int br, bc;
          if (mask.cell_of(bz, br, bc)) pa.witness.emplace_back(br, bc);
        }
        break;
      }
    }
    report.poles.push_back(pa);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Singularity count from preimage accumulation.
// ---------------------------------------------------------------------------

/// Estimates the number of inner-function singularities of f on the component
/// by clustering escaping in-component preimages of w along the channel
/// chains (or at boundary poles); clusters need at least 5 members.
inline int singularity_count_estimate(const MeromorphicMap& m, const std::vector<cplx>& targets,
                                      const OrbitParams& params, const ComponentRef& comp,
                                      const SpherePoint& w, const std::vector<Rect>& windows,
                                      const DegreeEstimate& degree, const AccessEstimate& access,
                                      const ClassificationMask* connectivity = nullptr) {
  require(degree.value == kDegreeInfinite,
          "singularity_count_estimate: requires an infinite-degree component");
  require(!access.sections.empty(), "singularity_count_estimate: requires channel data");

  std::vector<std::uint8_t> reach;
  if (connectivity) reach = component_cells(m, *connectivity, comp);

  std::vector<cplx> pre;
  for (const Rect& window : windows) {
    auto batch = preimages_in_window(m, w, window);
    for (cplx z : batch.points) {
      bool dup = false;
      for (cplx known : pre)
        if (std::abs(known - z) <= 1e-7) dup = true;
      if (dup) continue;
      OrbitResult r = classify_point(m, SpherePoint(z), targets, params);
      if (r.fate != comp.fate) continue;
      if (connectivity) {
        int row, col;
        if (!connectivity->cell_of(z, row, col)) continue;
        if (!reach[std::size_t(row) * connectivity->grid.width + col]) continue;
      }
      pre.push_back(z);
    }
  }
  if (pre.size() < 10)
    fail(errc::inconclusive, "singularity_count_estimate: fewer than 10 in-component preimages");

  // Root of the chain through each arc: earliest ancestor under parent links.
  auto chain_root = [&](int i, int j) -> std::pair<int, int> {
    while (i > 0 && access.parent[i][j] >= 0) {
      j = access.parent[i][j];
      --i;
    }
    return {i, j};
  };

  std::map<std::pair<int, int>, int> channel_clusters;  // root arc -> count
  std::map<int, int> pole_clusters;                     // pole index -> count
  auto poles = m.poles_in_rect(windows.back().expanded(1.0));

  for (cplx z : pre) {
    double az = std::abs(z);
    if (az < access.radii.front()) continue;  // not escaping yet
    int at = -1;
    for (std::size_t i = 0; i < access.radii.size(); ++i)
      if (access.radii[i] <= az) at = int(i);
    bool assigned = false;
    if (at >= 0) {
      double theta = std::arg(z);
      for (std::size_t j = 0; j < access.sections[at].size(); ++j) {
        if (access.sections[at][j].contains_angle(theta)) {
          ++channel_clusters[chain_root(at, int(j))];
          assigned = true;
          break;
        }
      }
    }
    if (!assigned) {
      for (std::size_t pi = 0; pi < poles.size(); ++pi) {
        if (std::abs(z - poles[pi].value()) <= 1.0) {
          ++pole_clusters[int(pi)];
          break;
        }
      }
    }
  }

  int clusters = 0;
  for (const auto& [key, count] : channel_clusters)
    if (count >= 5) ++clusters;
  for (const auto& [key, count] : pole_clusters)
    if (count >= 5) ++clusters;
  return clusters;
}

}  // namespace fatou
