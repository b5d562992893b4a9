// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hrwarp/grid.hpp"

namespace hrwarp {

/// Raw PNG pixel payload. 16-bit samples are stored big-endian, two bytes each.
struct PngBuffer {
  int width = 0;
  int height = 0;
  int channels = 0;   // 1 gray, 2 gray+alpha, 3 rgb, 4 rgba
  int bit_depth = 8;  // 8 or 16
  std::vector<std::uint8_t> bytes;
};

PngBuffer read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const PngBuffer& png);

/// 8-bit RGB (gray is expanded, alpha is dropped). Values scaled to [0,1].
Image load_image(const std::filesystem::path& path);
/// 8-bit single-channel PNG; pixel value is the class id.
LabelMap load_label_map(const std::filesystem::path& path);
/// 8-bit single-channel PNG; any non-zero value marks the pixel.
Mask load_mask(const std::filesystem::path& path);

void save_image(const Image& image, const std::filesystem::path& path);
void save_label_map(const LabelMap& labels, const std::filesystem::path& path);
void save_mask(const Mask& mask, const std::filesystem::path& path);

/// Quantises [0,1] to 8 bits with round-half-up, clamping out-of-range values.
std::uint8_t quantize_unit(float v) noexcept;

}  // namespace hrwarp
