// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/local_edit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrwarp/counter_rng.hpp"
#include "hrwarp/tensor_io.hpp"

namespace hrwarp {

Image composite_local(const Image& r, const Image& x0, const Mask& m) {
  if (!r.same_extent(x0) || !m.same_extent(x0)) {
    throw ArgumentError("composite_local: extent mismatch");
  }
  Image out = x0;
  for (std::size_t p = 0; p < out.pixel_count(); ++p) {
    if (m.values()[p] == 0) continue;
    const auto src = r.pixel(p);
    std::copy(src.begin(), src.end(), out.pixel(p).begin());
  }
  return out;
}

template <typename G>
G apply_augmentation(const G& in, const AugmentRecord& t) {
  G out = in;
  const int h = in.height();
  const int w = in.width();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int xs = t.flip ? w - 1 - x : x;
      const int sy = std::clamp(y - t.dy, 0, h - 1);
      const int sx = std::clamp(xs - t.dx, 0, w - 1);
      const auto src = in.pixel(sy, sx);
      std::copy(src.begin(), src.end(), out.pixel(y, x).begin());
    }
  }
  return out;
}

template Image apply_augmentation(const Image&, const AugmentRecord&);
template LabelMap apply_augmentation(const LabelMap&, const AugmentRecord&);
template FeatureMap apply_augmentation(const FeatureMap&, const AugmentRecord&);
template Mask apply_augmentation(const Mask&, const AugmentRecord&);

AugmentedPair augment_pair(const Image& x1, const LabelMap& c1, std::uint64_t seed,
                           double max_shift_fraction) {
  if (!x1.same_extent(c1)) throw ArgumentError("augment_pair: extent mismatch");
  if (!(max_shift_fraction >= 0.0)) throw ArgumentError("max_shift_fraction must be >= 0");
  CounterStream rng(seed, 0xa5a5u);
  const auto max_dy = static_cast<int>(std::floor(x1.height() * max_shift_fraction));
  const auto max_dx = static_cast<int>(std::floor(x1.width() * max_shift_fraction));
  AugmentRecord t;
  t.dy = static_cast<int>(rng.uniform_int(-max_dy, max_dy));
  t.dx = static_cast<int>(rng.uniform_int(-max_dx, max_dx));
  t.flip = rng.uniform() < 0.5;
  return {apply_augmentation(x1, t), apply_augmentation(c1, t), t};
}

LocalEditResult warp_full(const Image& x0, const LabelMap& c0, const LabelMap& c1, const Mask& m,
                          const PipelineConfig& cfg) {
  if (!x0.same_extent(c0) || !x0.same_extent(c1) || !x0.same_extent(m)) {
    throw ArgumentError("x0, c0, c1 and m must share one extent");
  }
  const FeatureMap u_x = cfg.source_features
                             ? normalize_location_wise(*cfg.source_features)
                             : layout_image_features(c0, x0, cfg.provider);
  const FeatureMap u_c = cfg.target_features
                             ? normalize_location_wise(*cfg.target_features)
                             : layout_image_features(c1, x0, cfg.provider);
  if (!u_x.same_extent(x0) || !u_c.same_extent(x0)) {
    throw ArgumentError("feature maps must match the image extent");
  }

  ScoreConstraints sc;
  sc.label_penalty_enabled = cfg.label_penalty_enabled;
  sc.penalty_value = cfg.penalty_value;
  sc.source_labels = &c0;
  sc.target_labels = &c1;
  sc.excluded_mask = cfg.reconstruction_mode ? &m : nullptr;

  SamplerConfig sampler = cfg.sampler;
  sampler.threads = cfg.attention.threads;

  LocalEditResult result;
  result.sampling = sample_key_indices(u_x, u_c, sampler, sc);
  SparseKeySet keys = gather_keys(result.sampling.keys, cfg.dedupe_keys);
  if (cfg.reconstruction_mode) keys = drop_excluded_keys(keys, m);
  result.warp = sparse_warp(x0, u_x, u_c, keys, cfg.attention, sc);
  result.composited = composite_local(result.warp.warped, x0, m);
  result.evaluations = result.sampling.evaluations + result.warp.evaluations;
  return result;
}

Metrics eval_metrics(const Image& a, const Image& b, const Mask* region) {
  if (!a.same_extent(b)) throw ArgumentError("eval_metrics: extent mismatch");
  if (region != nullptr && !region->same_extent(a)) {
    throw ArgumentError("eval_metrics: region extent mismatch");
  }
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  std::size_t count = 0;
  for (std::size_t p = 0; p < a.pixel_count(); ++p) {
    if (region != nullptr && region->values()[p] == 0) continue;
    const auto pa = a.pixel(p);
    const auto pb = b.pixel(p);
    for (int c = 0; c < 3; ++c) {
      const double d = static_cast<double>(pa[c]) - pb[c];
      abs_sum += std::abs(d);
      sq_sum += d * d;
    }
    count += 3;
  }
  if (count == 0) throw ArgumentError("eval_metrics: empty region");
  Metrics m;
  m.samples = count / 3;
  m.l1 = abs_sum / static_cast<double>(count);
  const double mse = sq_sum / static_cast<double>(count);
  m.psnr = mse == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(1.0 / mse);
  return m;
}

}  // namespace hrwarp
