// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hrwarp/grid.hpp"

namespace hrwarp {

/// A 4-connected same-label component.
struct Region {
  Mask pixels;
  std::size_t area = 0;
  Coord centroid;  // mean pixel position
  int label = 0;
};

Region floodfill_component(const LabelMap& c, int row, int col);

/// Convex hull area of a point set (x, y pairs), monotone chain + shoelace.
double convex_hull_area(std::vector<std::array<double, 2>> points);

/// Convex hull area of the union of unit pixel squares in `pixels`.
double region_hull_area(const Mask& pixels);

/// area(g) / area(convex(g)) over pixel-corner polygons, in (0, 1].
double solidity(const Region& g);

struct AffineSample {
  double scale = 1.0;
  double rotation_deg = 0.0;
  Coord pivot;

  /// Source position that maps onto `target` (inverse transform).
  Coord inverse(Coord target) const noexcept;
};

/// g': pixels whose inverse-mapped nearest neighbour lies in g.
Mask transform_region(const Region& g, const AffineSample& affine);

struct SynthOptions {
  int max_iters = 20;
  int positions = 10;           // seed positions sampled per attempt
  double min_solidity = 0.8;    // attempts below this are skipped
  bool literal_hull_gate = false;  // skip when hull/area > 0.2 (always true)
  double min_scale = 1.2;
  double max_scale = 1.5;
  double max_rotation_deg = 15.0;
};

struct SynthRecord {
  int attempt = 0;  // zero-based loop index that succeeded
  std::vector<std::array<int, 2>> positions;  // (row, col) samples of that attempt
  int label = 0;
  std::size_t area = 0;
  std::size_t transformed_area = 0;
  double solidity = 0.0;
  AffineSample affine;
};

struct SynthResult {
  Image image;        // x'
  LabelMap labels;    // c'
  Mask component;     // g
  Mask transformed;   // g'
  SynthRecord record;
};

/// Enlarges one convex-enough component of `c` (and the matching image
/// content) by a random scale/rotation about its centroid. Returns nothing
/// if no attempt succeeds within max_iters.
std::optional<SynthResult> synth_manipulation_pair(const Image& x, const LabelMap& c,
                                                   std::uint64_t seed,
                                                   const SynthOptions& options = {});

}  // namespace hrwarp
