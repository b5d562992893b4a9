// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <variant>
#include <vector>

#include "hrwarp/grid.hpp"

namespace hrwarp {

/// Non-learned stand-ins for the image and layout feature extractors.
struct ProviderConfig {
  int patch_radius = 2;
  int descriptor_dims = 16;
  int class_count = 2;

  void validate() const;
};

/// Number of raw per-location statistics before projection: 3 centred color
/// means, 3 vertical-gradient means, 3 |dx| means, 3 |dy| means (mirror-even)
/// followed by 3 horizontal-gradient means (mirror-odd).
inline constexpr int kRawEvenFeatures = 12;
inline constexpr int kRawOddFeatures = 3;

/// Output channels reserved for the mirror-odd block, i.e. channels
/// [descriptor_dims - odd, descriptor_dims) flip sign under horizontal mirroring.
int odd_descriptor_channels(int descriptor_dims) noexcept;

/// Deterministic mixing table (descriptor_dims x 15, row-major). Every column
/// sums to zero and the even/odd blocks do not mix.
std::vector<double> descriptor_mixing_table(int descriptor_dims);

/// Patch color/gradient descriptor per pixel, projected to descriptor_dims
/// channels and normalized location-wise. Patches use replicate padding.
FeatureMap handcrafted_image_features(const Image& x, const ProviderConfig& cfg);

/// One-hot class encoding followed by location-wise normalization.
FeatureMap label_onehot_features(const LabelMap& c, const ProviderConfig& cfg);

/// Align-corners bilinear resize of every channel; no normalization.
FeatureMap bilinear_resize(const Grid<float>& lowres, int target_h, int target_w);

/// Guidance for `upsample_features`: none, an image, or a label map.
using Guidance = std::variant<std::monostate, const Image*, const LabelMap*>;

/// Bilinear upsample of `lowres`, concatenated with guidance-derived channels
/// computed at the target resolution, then normalized location-wise.
FeatureMap upsample_features(const Grid<float>& lowres, Guidance guidance, int target_h,
                             int target_w, const ProviderConfig& cfg);

/// Channel-wise concatenation of two maps with equal extent.
FeatureMap concat_channels(const Grid<float>& a, const Grid<float>& b);

/// Default layout-aware descriptor: one-hot(labels) ++ image descriptor,
/// normalized. Used for both branches so the channel spaces line up.
FeatureMap layout_image_features(const LabelMap& labels, const Image& guide,
                                 const ProviderConfig& cfg);

}  // namespace hrwarp
