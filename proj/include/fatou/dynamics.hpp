#pragma once

#include <cstdio>
#include <cstring>
#include <deque>
#include <fstream>
#include <queue>
#include <thread>
#include <vector>

#include "fatou/core.hpp"
#include "fatou/maps.hpp"
#include "fatou/sphere.hpp"

namespace fatou {

struct OrbitParams {
  int max_iter = 200;
  double attraction_tol = 1e-8;
  double escape_modulus = 1e12;
  int baker_window = 20;
  double baker_drift_tol = 0.1;

  void validate() const {
    require(max_iter > 0 && attraction_tol > 0 && escape_modulus > 0 && baker_window > 0 &&
                baker_drift_tol > 0,
            "OrbitParams: all fields must be positive");
    require(baker_window < max_iter, "OrbitParams: baker_window must be < max_iter");
  }
};

enum class FateKind { Unresolved, JuliaHit, Baker, Attracted };

/// 16-bit cell code: 0 unresolved, 1 julia hit, 2..5 baker directions,
/// 8+t attracted to target t.
using FateCode = std::uint16_t;

inline constexpr FateCode kFateUnresolved = 0;
inline constexpr FateCode kFateJuliaHit = 1;
inline constexpr FateCode kFateAttractedBase = 8;

inline FateCode baker_fate(Direction d) { return FateCode(2 + int(d)); }
inline FateCode attracted_fate(int target_index) { return FateCode(kFateAttractedBase + target_index); }

inline bool is_baker_fate(FateCode f) { return f >= 2 && f <= 5; }
inline bool is_attracted_fate(FateCode f) { return f >= kFateAttractedBase; }

inline std::string fate_name(FateCode f) {
  if (f == kFateUnresolved) return "unresolved";
  if (f == kFateJuliaHit) return "julia";
  if (is_baker_fate(f)) return std::string("baker:") + direction_name(Direction(f - 2));
  return "attracted:" + std::to_string(int(f - kFateAttractedBase));
}

struct OrbitResult {
  FateCode fate = kFateUnresolved;
  int steps = 0;
  bool eval_error = false;  // NaN or evaluation failure, reported not thrown
};

/// Identifies one Fatou component: its fate code plus a seed point inside it.
/// The seed disambiguates components sharing a fate code (several Baker
/// domains of equal direction).
struct ComponentRef {
  FateCode fate;
  cplx seed;
};

// ---------------------------------------------------------------------------
// Point classification.
// ---------------------------------------------------------------------------

inline OrbitResult classify_point(const MeromorphicMap& m, const SpherePoint& start,
                                  const std::vector<cplx>& targets, const OrbitParams& p) {
  p.validate();
  OrbitResult res;
  if (start.is_inf()) {
    res.fate = kFateJuliaHit;
    return res;
  }

  const auto& signatures = m.escape_signatures();
  std::vector<cplx> window;
  window.reserve(p.baker_window);
  std::size_t wpos = 0;

  cplx z = start.value();
  for (int n = 0; n < p.max_iter; ++n) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (std::abs(z - targets[t]) <= p.attraction_tol) {
        res.fate = attracted_fate(int(t));
        res.steps = n;
        return res;
      }
    }
    StepEval e;
    try {
      e = m.step(z);
    } catch (const error&) {
      res.eval_error = true;
      res.steps = n;
      return res;
    }
    if (e.value.is_inf() || (!e.value.is_inf() && std::abs(e.value.value()) > p.escape_modulus)) {
      res.fate = kFateJuliaHit;
      res.steps = n + 1;
      return res;
    }
    if (int(window.size()) < p.baker_window) {
      window.push_back(e.increment);
    } else {
      window[wpos] = e.increment;
      wpos = (wpos + 1) % window.size();
    }
    z = e.value.value();
    res.steps = n + 1;
  }

  if (int(window.size()) < p.baker_window) return res;

  for (const auto& sig : signatures) {
    bool match = true;
    double tol = p.baker_drift_tol * std::max(std::abs(sig.drift), 0.5);
    for (cplx inc : window) {
      if (std::abs(inc - sig.drift) > tol) {
        match = false;
        break;
      }
      double axis = 0;
      switch (sig.direction) {
        case Direction::Up: axis = inc.imag(); break;
        case Direction::Down: axis = -inc.imag(); break;
        case Direction::Right: axis = inc.real(); break;
        case Direction::Left: axis = -inc.real(); break;
      }
      if (!(axis > 0.0)) {  // strict: frozen zero increments resolve nothing
        match = false;
        break;
      }
    }
    if (match) {
      res.fate = baker_fate(sig.direction);
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Grid classification.
// ---------------------------------------------------------------------------

struct GridSpec {
  Rect rect;
  int width = 0;
  int height = 0;

  /// Cell centers, row-major from top-left.
  cplx center(int row, int col) const {
    double x = rect.x0 + rect.width() * (col + 0.5) / width;
    double y = rect.y1 - rect.height() * (row + 0.5) / height;
    return {x, y};
  }
};

struct MaskCell {
  FateCode fate;
  std::uint16_t steps;
};

struct ClassificationMask {
  GridSpec grid;
  std::string map_spec;
  OrbitParams params;
  std::vector<cplx> targets;
  std::vector<MaskCell> cells;  // row-major from top-left

  const MaskCell& at(int row, int col) const { return cells[std::size_t(row) * grid.width + col]; }

  bool cell_of(cplx z, int& row, int& col) const {
    const Rect& r = grid.rect;
    if (z.real() < r.x0 || z.real() > r.x1 || z.imag() < r.y0 || z.imag() > r.y1) return false;
    col = std::min(grid.width - 1, int((z.real() - r.x0) / r.width() * grid.width));
    row = std::min(grid.height - 1, int((r.y1 - z.imag()) / r.height() * grid.height));
    return true;
  }
};

inline ClassificationMask classify_grid(const MeromorphicMap& m, const GridSpec& grid,
                                        const std::vector<cplx>& targets, const OrbitParams& p,
                                        int workers = 0) {
  require(grid.width >= 1 && grid.height >= 1, "classify_grid: need at least one cell");
  p.validate();
  if (workers <= 0) workers = int(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;
  workers = std::min(workers, grid.height);

  ClassificationMask mask;
  mask.grid = grid;
  mask.map_spec = m.spec();
  mask.params = p;
  mask.targets = targets;
  mask.cells.assign(std::size_t(grid.width) * grid.height, MaskCell{kFateUnresolved, 0});

  auto run_rows = [&](int row_begin, int row_end) {
    for (int r = row_begin; r < row_end; ++r) {
      for (int c = 0; c < grid.width; ++c) {
        OrbitResult res = classify_point(m, SpherePoint(grid.center(r, c)), targets, p);
        mask.cells[std::size_t(r) * grid.width + c] = {
            res.fate, std::uint16_t(std::min(res.steps, 65535))};
      }
    }
  };

  if (workers == 1) {
    run_rows(0, grid.height);
  } else {
    std::vector<std::thread> pool;
    int chunk = (grid.height + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      int lo = w * chunk, hi = std::min(grid.height, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_rows, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  return mask;
}

// ---------------------------------------------------------------------------
// Mask file format: one ASCII header line, then width*height little-endian
// 32-bit records (low 16 bits fate, high 16 bits steps), row-major from the
// top-left cell.
// ---------------------------------------------------------------------------

inline void write_mask(const ClassificationMask& mask, std::ostream& os) {
  char header[256];
  std::snprintf(header, sizeof header, "FAM %s RECT %.17g %.17g %.17g %.17g DIM %d %d\n",
                mask.map_spec.c_str(), mask.grid.rect.x0, mask.grid.rect.y0, mask.grid.rect.x1,
                mask.grid.rect.y1, mask.grid.width, mask.grid.height);
  os << header;
  for (const MaskCell& cell : mask.cells) {
    std::uint32_t rec = std::uint32_t(cell.fate) | (std::uint32_t(cell.steps) << 16);
    unsigned char bytes[4] = {static_cast<unsigned char>(rec & 0xff),
                              static_cast<unsigned char>((rec >> 8) & 0xff),
                              static_cast<unsigned char>((rec >> 16) & 0xff),
                              static_cast<unsigned char>((rec >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(bytes), 4);
  }
}

inline void save_mask(const ClassificationMask& mask, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(errc::io, "cannot open mask file for writing: " + path);
  write_mask(mask, os);
  if (!os) fail(errc::io, "mask write failed: " + path);
}

inline ClassificationMask load_mask(std::istream& is) {
  std::string header;
  std::getline(is, header);
  ClassificationMask mask;
  char spec[128] = {0};
  int w = 0, h = 0;
  Rect r;
  if (std::sscanf(header.c_str(), "FAM %127s RECT %lg %lg %lg %lg DIM %d %d", spec, &r.x0, &r.y0,
                  &r.x1, &r.y1, &w, &h) != 7)
    fail(errc::io, "bad mask header");
  mask.map_spec = spec;
  mask.grid = {r, w, h};
  mask.cells.resize(std::size_t(w) * h);
  for (auto& cell : mask.cells) {
    unsigned char bytes[4];
    is.read(reinterpret_cast<char*>(bytes), 4);
    if (!is) fail(errc::io, "truncated mask file");
    std::uint32_t rec = std::uint32_t(bytes[0]) | (std::uint32_t(bytes[1]) << 8) |
                        (std::uint32_t(bytes[2]) << 16) | (std::uint32_t(bytes[3]) << 24);
    cell.fate = FateCode(rec & 0xffff);
    cell.steps = std::uint16_t(rec >> 16);
  }
  return mask;
}

inline ClassificationMask load_mask(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(errc::io, "cannot open mask file: " + path);
  return load_mask(is);
}

// ---------------------------------------------------------------------------
// Preimages: solves f(z) = w by damped Newton from pole-adjacent seeds plus a
// coarse grid, deduplicates, and keeps chordal residuals below 1e-9.
// ---------------------------------------------------------------------------

struct PreimageResult {
  std::vector<cplx> points;
  bool empty_warning = false;
};

inline PreimageResult preimages_in_window(const MeromorphicMap& m, const SpherePoint& target,
                                          const Rect& window) {
  require(window.finite(), "preimages_in_window: window must be finite");
  require(!target.is_inf(), "preimages_in_window: finite target required");
  cplx w = target.value();

  auto h = [&](cplx z) -> std::pair<cplx, cplx> {
    StepEval e = m.step(z);
    if (e.value.is_inf() || e.derivative.is_inf())
      return {cplx(1e30, 0), cplx(1, 0)};  // off-seed; Newton will back away
    return {e.value.value() - w, e.derivative.value()};
  };

  std::vector<cplx> seeds;
  for (const auto& p : m.poles_in_rect(window.expanded(1.0))) {
    cplx pole = p.value();
    // Preimages of far targets cluster next to poles.
    if (std::abs(pole - w) > 1.0) {
      seeds.push_back(pole + 1.0 / (pole - w));
      seeds.push_back(pole - 1.0 / (pole - w));
    }
    for (int k = 0; k < 4; ++k) seeds.push_back(pole + std::polar(0.05, kPi / 4 + k * kPi / 2));
  }
  double spacing = 1.2;
  int nx = std::max(12, int(window.width() / spacing));
  int ny = std::max(12, int(window.height() / spacing));
  nx = std::min(nx, 160);
  ny = std::min(ny, 160);
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      seeds.emplace_back(window.x0 + window.width() * i / nx,
                         window.y0 + window.height() * j / ny);

  std::vector<cplx> hits;
  for (cplx seed : seeds) {
    auto root = detail::newton_zero(h, seed, 1e-11, 50);
    if (!root) continue;
    cplx z = *root;
    if (!window.contains(z)) continue;
    // Chordal residual check.
    SpherePoint img = m.evaluate(SpherePoint(z));
    if (img.is_inf() || sphere_distance(img, target) > 1e-9) continue;
    bool dup = false;
    for (cplx known : hits)
      if (std::abs(known - z) <= 1e-7) dup = true;
    if (!dup) hits.push_back(z);
  }
  std::sort(hits.begin(), hits.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return {hits, hits.empty()};
}

// ---------------------------------------------------------------------------
// Mask connectivity and the degree estimate.
// ---------------------------------------------------------------------------

/// Modulus of the one-step increment above which a cell sits in the
/// pole-adjacent pinwheel, where the center's fate says nothing about the
/// cell; such cells are kept out of component flood fills.
inline constexpr double kPinwheelJumpCut = 5.0;

/// 4-connected flood fill over cells carrying `fate`, from the component
/// seed's cell. Pole-adjacent pinwheel cells do not conduct: their fates are
/// sampling noise and would bridge distinct components across the chaotic
/// belt near the real axis. Returns a reachability bitmap.
inline std::vector<std::uint8_t> component_cells(const MeromorphicMap& m,
                                                 const ClassificationMask& mask,
                                                 const ComponentRef& comp) {
  std::vector<std::uint8_t> reach(mask.cells.size(), 0);
  auto conducts = [&](int r, int c) {
    if (mask.at(r, c).fate != comp.fate) return false;
    try {
      StepEval e = m.step(mask.grid.center(r, c));
      return e.increment_valid && std::abs(e.increment) <= kPinwheelJumpCut;
    } catch (const error&) {
      return false;
    }
  };
  int row, col;
  if (!mask.cell_of(comp.seed, row, col)) fail(errc::precondition, "component seed outside mask");
  if (mask.at(row, col).fate != comp.fate)
    fail(errc::precondition, "component seed cell does not carry the component fate");
  std::queue<std::pair<int, int>> q;
  q.push({row, col});
  reach[std::size_t(row) * mask.grid.width + col] = 1;
  while (!q.empty()) {
    auto [r, c] = q.front();
    q.pop();
    const int dr[4] = {1, -1, 0, 0};
    const int dc[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int nr = r + dr[k], nc = c + dc[k];
      if (nr < 0 || nr >= mask.grid.height || nc < 0 || nc >= mask.grid.width) continue;
      std::size_t idx = std::size_t(nr) * mask.grid.width + nc;
      if (reach[idx] || !conducts(nr, nc)) continue;
      reach[idx] = 1;
      q.push({nr, nc});
    }
  }
  return reach;
}

inline constexpr int kDegreeInfinite = -1;

struct DegreeEstimate {
  int value = 0;  // kDegreeInfinite when still growing
  std::vector<int> window_counts;
};

inline std::vector<Rect> default_window_schedule() {
  return {{-10, -10, 10, 10}, {-20, -20, 20, 20}, {-40, -40, 40, 40}, {-80, -80, 80, 80}};
}

/// Counts preimages of the probe whose own orbit fate matches the component
/// and whose cell is flood-connected to the probe, over a growing window
/// schedule. Equal counts on the last two windows give the degree; growth at
/// the largest window reports infinite degree.
inline DegreeEstimate degree_on_component(const MeromorphicMap& m, const ClassificationMask& mask,
                                          const ComponentRef& comp, const SpherePoint& probe,
                                          const std::vector<Rect>& windows = default_window_schedule()) {
  require(windows.size() >= 2, "degree_on_component: need at least two windows");
  require(!probe.is_inf(), "degree_on_component: finite probe required");
  OrbitResult probe_fate = classify_point(m, probe, mask.targets, mask.params);
  if (probe_fate.fate != comp.fate)
    fail(errc::precondition, "degree_on_component: probe does not lie in the component");

  auto reach = component_cells(m, mask, ComponentRef{comp.fate, probe.value()});

  DegreeEstimate est;
  for (const Rect& window : windows) {
    auto pre = preimages_in_window(m, probe, window);
    int count = 0;
    for (cplx z : pre.points) {
      OrbitResult r = classify_point(m, SpherePoint(z), mask.targets, mask.params);
      if (r.fate != comp.fate) continue;
      int row, col;
      if (!mask.cell_of(z, row, col)) continue;
      if (!reach[std::size_t(row) * mask.grid.width + col]) continue;
      ++count;
    }
    est.window_counts.push_back(count);
  }
  std::size_t n = est.window_counts.size();
  int last = est.window_counts[n - 1], prev = est.window_counts[n - 2];
  if (last == prev)
    est.value = last;
  else if (last > prev)
    est.value = kDegreeInfinite;
  else
    fail(errc::inconsistency, "degree estimate shrank between growing windows");
  return est;
}

}  // namespace fatou
