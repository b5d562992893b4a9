// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force region geometry used to cross-check the library's hull code.

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "hrwarp/grid.hpp"

namespace hrwarp::testing {

using Point = std::array<long long, 2>;

inline long long cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline long long dist2(const Point& a, const Point& b) {
  return (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
}

/// Gift-wrapping hull, counter-clockwise, collinear points dropped.
inline std::vector<Point> jarvis_hull(const std::set<Point>& unique) {
  const std::vector<Point> pts(unique.begin(), unique.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull;
  const Point start = pts.front();  // lexicographically smallest: on the hull
  Point current = start;
  do {
    hull.push_back(current);
    Point next = pts[0] == current ? pts[1] : pts[0];
    for (const Point& cand : pts) {
      if (cand == current) continue;
      const long long turn = cross(current, next, cand);
      if (turn < 0 || (turn == 0 && dist2(current, cand) > dist2(current, next))) next = cand;
    }
    current = next;
  } while (current != start && hull.size() <= pts.size());
  return hull;
}

inline double shoelace(const std::vector<Point>& poly) {
  long long twice = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % poly.size()];
    twice += a[0] * b[1] - b[0] * a[1];
  }
  return std::abs(static_cast<double>(twice)) / 2.0;
}

/// Pixel count over the hull area of every pixel's four corners.
inline double pixel_solidity(const Mask& pixels) {
  std::set<Point> corners;
  long long area = 0;
  for (int y = 0; y < pixels.height(); ++y) {
    for (int x = 0; x < pixels.width(); ++x) {
      if (!pixels.test(y, x)) continue;
      ++area;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) corners.insert({x + dx, y + dy});
      }
    }
  }
  return static_cast<double>(area) / shoelace(jarvis_hull(corners));
}

}  // namespace hrwarp::testing
