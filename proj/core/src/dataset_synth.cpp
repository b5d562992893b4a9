// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/dataset_synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hrwarp/counter_rng.hpp"
#include "hrwarp/tensor_io.hpp"

namespace hrwarp {
namespace {

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

Region floodfill_component(const LabelMap& c, int row, int col) {
  if (!c.contains(row, col)) throw ArgumentError("floodfill seed out of bounds");
  Region g;
  g.pixels = Mask(c.height(), c.width());
  g.label = c.id(row, col);
  std::vector<std::array<int, 2>> stack{{row, col}};
  g.pixels.set(row, col);
  double sum_r = 0.0;
  double sum_c = 0.0;
  while (!stack.empty()) {
    const auto [r, k] = stack.back();
    stack.pop_back();
    ++g.area;
    sum_r += r;
    sum_c += k;
    constexpr std::array<std::array<int, 2>, 4> steps = {{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
    for (const auto& [dr, dc] : steps) {
      const int nr = r + dr;
      const int nc = k + dc;
      if (!c.contains(nr, nc) || g.pixels.test(nr, nc) || c.id(nr, nc) != g.label) continue;
      g.pixels.set(nr, nc);
      stack.push_back({nr, nc});
    }
  }
  g.centroid = {sum_r / static_cast<double>(g.area), sum_c / static_cast<double>(g.area)};
  return g;
}

double convex_hull_area(std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return 0.0;
  std::vector<std::array<double, 2>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  double twice = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice += a[0] * b[1] - b[0] * a[1];
  }
  return std::abs(twice) * 0.5;
}

double region_hull_area(const Mask& pixels) {
  // Only the outermost pixel of each row can contribute hull corners.
  std::vector<std::array<double, 2>> corners;
  for (int r = 0; r < pixels.height(); ++r) {
    int first = -1;
    int last = -1;
    for (int c = 0; c < pixels.width(); ++c) {
      if (!pixels.test(r, c)) continue;
      if (first < 0) first = c;
      last = c;
    }
    if (first < 0) continue;
    corners.push_back({double(first), double(r)});
    corners.push_back({double(first), double(r + 1)});
    corners.push_back({double(last + 1), double(r)});
    corners.push_back({double(last + 1), double(r + 1)});
  }
  return convex_hull_area(std::move(corners));
}

double solidity(const Region& g) {
  if (g.area == 0) throw ArgumentError("solidity of an empty region");
  return static_cast<double>(g.area) / region_hull_area(g.pixels);
}

Coord AffineSample::inverse(Coord target) const noexcept {
  const double theta = rotation_deg * std::numbers::pi / 180.0;
  const double dy = target.y - pivot.y;
  const double dx = target.x - pivot.x;
  // Forward: p' = pivot + s * R(theta) (p - pivot), R acting on (x, y).
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  const double sx = (cs * dx + sn * dy) / scale;
  const double sy = (-sn * dx + cs * dy) / scale;
  return {pivot.y + sy, pivot.x + sx};
}

Mask transform_region(const Region& g, const AffineSample& affine) {
  const int h = g.pixels.height();
  const int w = g.pixels.width();
  Mask out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const Coord src = affine.inverse({double(r), double(c)});
      const int sr = static_cast<int>(std::floor(src.y + 0.5));
      const int sc = static_cast<int>(std::floor(src.x + 0.5));
      if (g.pixels.contains(sr, sc) && g.pixels.test(sr, sc)) out.set(r, c);
    }
  }
  return out;
}

std::optional<SynthResult> synth_manipulation_pair(const Image& x, const LabelMap& c,
                                                   std::uint64_t seed,
                                                   const SynthOptions& options) {
  if (!x.same_extent(c)) throw ArgumentError("image and label map extents differ");
  if (c.pixel_count() == 0) throw ArgumentError("empty label map");
  if (options.positions < 1) throw ArgumentError("positions must be >= 1");
  CounterStream rng(seed, 0x5157u);

  for (int attempt = 0; attempt < options.max_iters; ++attempt) {
    SynthRecord record;
    record.attempt = attempt;
    std::optional<Region> best;
    for (int i = 0; i < options.positions; ++i) {
      const int r = static_cast<int>(rng.uniform_int(0, c.height() - 1));
      const int k = static_cast<int>(rng.uniform_int(0, c.width() - 1));
      record.positions.push_back({r, k});
      if (best && best->pixels.test(r, k)) continue;
      Region g = floodfill_component(c, r, k);
      if (!best || g.area > best->area) best = std::move(g);
    }
    const Region& g = *best;
    const double hull = region_hull_area(g.pixels);
    record.solidity = static_cast<double>(g.area) / hull;
    if (options.literal_hull_gate ? hull / static_cast<double>(g.area) > 0.2
                                  : record.solidity < options.min_solidity) {
      continue;
    }

    record.affine.scale = rng.uniform(options.min_scale, options.max_scale);
    record.affine.rotation_deg = rng.uniform(-options.max_rotation_deg, options.max_rotation_deg);
    record.affine.pivot = g.centroid;
    Mask grown = transform_region(g, record.affine);

    bool covers = true;
    for (std::size_t p = 0; p < g.pixels.pixel_count() && covers; ++p) {
      covers = g.pixels.values()[p] == 0 || grown.values()[p] != 0;
    }
    if (!covers) continue;

    SynthResult out;
    out.image = x;
    out.labels = c;
    std::vector<double> sample(3);
    for (int r = 0; r < c.height(); ++r) {
      for (int k = 0; k < c.width(); ++k) {
        if (!grown.test(r, k)) continue;
        const Coord src = clamp_coord(record.affine.inverse({double(r), double(k)}), c.height(),
                                      c.width());
        const int nr = static_cast<int>(std::floor(src.y + 0.5));
        const int nk = static_cast<int>(std::floor(src.x + 0.5));
        out.labels.at(r, k) = c.id(nr, nk);
        bilinear_sample(x, src, sample);
        for (int ch = 0; ch < 3; ++ch) out.image.at(r, k, ch) = static_cast<float>(sample[ch]);
      }
    }
    record.label = g.label;
    record.area = g.area;
    record.transformed_area = grown.count();
    out.component = g.pixels;
    out.transformed = std::move(grown);
    out.record = std::move(record);
    return out;
  }
  return std::nullopt;
}

}  // namespace hrwarp
