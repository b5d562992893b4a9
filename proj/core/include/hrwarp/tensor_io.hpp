// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "hrwarp/grid.hpp"

namespace hrwarp {

// HRT1 layout: "HRT1", u32le H, u32le W, u32le C, then H*W*C f32le values,
// row-major over (row, col) with the channel fastest.
inline constexpr std::array<char, 4> kTensorMagic = {'H', 'R', 'T', '1'};
inline constexpr std::size_t kTensorHeaderBytes = 16;

std::vector<std::byte> encode_tensor(const Grid<float>& map);
FeatureMap decode_tensor(std::span<const std::byte> bytes);

void save_tensor(const Grid<float>& map, const std::filesystem::path& path);
FeatureMap load_tensor(const std::filesystem::path& path);

/// Clamps `t` into [0, height-1] x [0, width-1].
Coord clamp_coord(Coord t, int height, int width) noexcept;

/// Integer pixels carrying non-zero bilinear weight at `t` (1, 2 or 4 of them).
struct Footprint {
  std::array<int, 4> rows{};
  std::array<int, 4> cols{};
  std::array<double, 4> weights{};
  int size = 0;
};
Footprint bilinear_footprint(Coord t, int height, int width);

/// Four-neighbour bilinear interpolation. `t` must already lie inside the grid.
void bilinear_sample(const Grid<float>& map, Coord t, std::span<double> out);
std::vector<double> bilinear_sample(const Grid<float>& map, Coord t);

/// <query, sample(map, t)> without materialising the sampled vector.
double bilinear_dot(const Grid<float>& map, Coord t, std::span<const float> query);

/// Per location: subtract the channel mean, then scale to unit l2 norm.
/// Locations whose centred norm is below 1e-12 become the zero vector.
FeatureMap normalize_location_wise(const Grid<float>& map);

inline constexpr double kDegenerateNorm = 1e-12;

}  // namespace hrwarp
