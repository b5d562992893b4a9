// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "hrwarp/attention_core.hpp"
#include "hrwarp/feature_provider.hpp"
#include "hrwarp/grid.hpp"
#include "hrwarp/key_sampler.hpp"
#include "hrwarp/sparse_warp.hpp"

namespace hrwarp {

struct PipelineConfig {
  SamplerConfig sampler = SamplerConfig::local_edit_preset();
  AttentionConfig attention;
  ProviderConfig provider;
  bool label_penalty_enabled = true;
  double penalty_value = 1e4;
  bool reconstruction_mode = false;  // keys may not touch masked source pixels
  bool dedupe_keys = true;
  // Externally computed features replace the built-in provider when set.
  std::optional<FeatureMap> source_features;
  std::optional<FeatureMap> target_features;
};

struct LocalEditResult {
  WarpResult warp;        // r_{x0 -> c1} with keys and weights
  Image composited;       // r * m + x0 * (1 - m)
  SamplingResult sampling;
  std::uint64_t evaluations = 0;  // sampling + final attention
};

/// x_warp = r where m is set, x0 elsewhere.
Image composite_local(const Image& r, const Image& x0, const Mask& m);

struct AugmentRecord {
  int dy = 0;
  int dx = 0;
  bool flip = false;
};

/// out(y, x) = in(y - dy, x' - dx) with x' = W-1-x when flipping; indices are
/// clamped (replicate padding).
template <typename G>
G apply_augmentation(const G& in, const AugmentRecord& t);

extern template Image apply_augmentation(const Image&, const AugmentRecord&);
extern template LabelMap apply_augmentation(const LabelMap&, const AugmentRecord&);
extern template FeatureMap apply_augmentation(const FeatureMap&, const AugmentRecord&);
extern template Mask apply_augmentation(const Mask&, const AugmentRecord&);

struct AugmentedPair {
  Image image;
  LabelMap labels;
  AugmentRecord transform;
};

/// Random integer translation within +-quarter extent and a horizontal flip
/// coin, applied identically to the image and its labels.
AugmentedPair augment_pair(const Image& x1, const LabelMap& c1, std::uint64_t seed,
                           double max_shift_fraction = 0.25);

/// Builds features, samples keys under the local-edit constraints, warps x0
/// to layout c1 and composites inside m.
LocalEditResult warp_full(const Image& x0, const LabelMap& c0, const LabelMap& c1, const Mask& m,
                          const PipelineConfig& cfg);

struct Metrics {
  double l1 = 0.0;
  double psnr = 0.0;  // +infinity when the inputs agree exactly
  std::size_t samples = 0;
};

/// Mean absolute error and 10*log10(1/MSE) over `region` (all pixels when absent).
Metrics eval_metrics(const Image& a, const Image& b, const Mask* region = nullptr);

}  // namespace hrwarp
