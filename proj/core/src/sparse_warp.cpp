// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/sparse_warp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "hrwarp/parallel.hpp"
#include "hrwarp/tensor_io.hpp"

namespace hrwarp {
namespace {

std::uint64_t eighth_pixel_key(Coord c) {
  const auto y = static_cast<std::int64_t>(std::llround(c.y * 8.0));
  const auto x = static_cast<std::int64_t>(std::llround(c.x * 8.0));
  return (static_cast<std::uint64_t>(y) << 32) ^ static_cast<std::uint32_t>(x);
}

}  // namespace

std::vector<Coord> dedupe_keys(std::span<const Coord> keys) {
  std::vector<Coord> out;
  out.reserve(keys.size());
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(keys.size() * 2);
  for (const Coord& c : keys) {
    if (seen.insert(eighth_pixel_key(c)).second) out.push_back(c);
  }
  return out;
}

std::vector<Coord> dedupe_keys(std::span<const Coord> keys, std::span<const double> scores) {
  if (scores.size() != keys.size()) throw ArgumentError("scores are not aligned with keys");
  std::vector<Coord> out;
  std::vector<double> best;
  out.reserve(keys.size());
  std::unordered_map<std::uint64_t, std::size_t> slot;
  slot.reserve(keys.size() * 2);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto [it, fresh] = slot.try_emplace(eighth_pixel_key(keys[i]), out.size());
    if (fresh) {
      out.push_back(keys[i]);
      best.push_back(scores[i]);
    } else if (scores[i] > best[it->second]) {
      out[it->second] = keys[i];
      best[it->second] = scores[i];
    }
  }
  return out;
}

SparseKeySet gather_keys(const KeyIndexSets& keys, bool dedupe) {
  SparseKeySet out;
  out.height = keys.height;
  out.width = keys.width;
  const std::size_t n = static_cast<std::size_t>(keys.height) * keys.width;
  out.offsets.reserve(n + 1);
  out.coords.reserve(n * keys.per_query);
  for (std::size_t q = 0; q < n; ++q) {
    const auto list = keys.keys_of(q);
    if (dedupe) {
      const auto unique = dedupe_keys(list, keys.scores_of(q));
      out.coords.insert(out.coords.end(), unique.begin(), unique.end());
    } else {
      out.coords.insert(out.coords.end(), list.begin(), list.end());
    }
    out.offsets.push_back(out.coords.size());
  }
  return out;
}

SparseKeySet drop_excluded_keys(const SparseKeySet& keys, const Mask& excluded) {
  SparseKeySet out;
  out.height = keys.height;
  out.width = keys.width;
  out.coords.reserve(keys.coords.size());
  auto touches = [&](Coord t) {
    const Footprint fp = bilinear_footprint(t, excluded.height(), excluded.width());
    for (int i = 0; i < fp.size; ++i) {
      if (excluded.test(fp.rows[i], fp.cols[i])) return true;
    }
    return false;
  };
  for (std::size_t q = 0; q < keys.queries(); ++q) {
    const auto list = keys.keys_of(q);
    const std::size_t start = out.coords.size();
    for (const Coord& t : list) {
      if (!touches(t)) out.coords.push_back(t);
    }
    if (out.coords.size() == start) out.coords.insert(out.coords.end(), list.begin(), list.end());
    out.offsets.push_back(out.coords.size());
  }
  return out;
}

SparseKeySet exhaustive_keys(int query_h, int query_w, int source_h, int source_w) {
  SparseKeySet out;
  out.height = query_h;
  out.width = query_w;
  const std::size_t n = static_cast<std::size_t>(query_h) * query_w;
  const std::size_t m = static_cast<std::size_t>(source_h) * source_w;
  out.coords.reserve(n * m);
  for (std::size_t q = 0; q < n; ++q) {
    for (int r = 0; r < source_h; ++r) {
      for (int c = 0; c < source_w; ++c) out.coords.push_back({double(r), double(c)});
    }
    out.offsets.push_back(out.coords.size());
  }
  return out;
}

std::vector<double> sparse_attention_weights(const FeatureMap& u_c, const FeatureMap& u_x,
                                             std::span<const Coord> keys, int q_row, int q_col,
                                             const AttentionConfig& cfg,
                                             const ScoreConstraints& sc) {
  if (keys.empty()) throw ArgumentError("sparse attention over an empty key set");
  if (u_c.channels() != u_x.channels()) throw ArgumentError("feature channel mismatch");
  std::vector<double> scores(keys.size());
  const auto query = u_c.pixel(q_row, q_col);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    scores[k] = constrained_score(bilinear_dot(u_x, keys[k], query), q_row, q_col, keys[k], sc);
  }
  return scaled_softmax(scores, cfg.gamma);
}

Image sparse_attentive_warp(const Image& x, const SparseKeySet& keys,
                            std::span<const double> weights, unsigned threads) {
  if (weights.size() != keys.coords.size()) {
    throw ArgumentError("weights are not aligned with keys");
  }
  if (keys.queries() != static_cast<std::size_t>(keys.height) * keys.width) {
    throw ArgumentError("key set does not cover its query grid");
  }
  Image out(keys.height, keys.width);
  parallel_for(keys.queries(), threads, [&](std::size_t q) {
    double acc[3] = {0.0, 0.0, 0.0};
    double sample[3];
    for (std::size_t k = keys.offsets[q]; k < keys.offsets[q + 1]; ++k) {
      bilinear_sample(x, keys.coords[k], sample);
      for (int c = 0; c < 3; ++c) acc[c] += weights[k] * sample[c];
    }
    auto dst = out.pixel(q);
    for (int c = 0; c < 3; ++c) dst[c] = static_cast<float>(acc[c]);
  });
  return out;
}

WarpResult sparse_warp(const Image& x, const FeatureMap& u_x, const FeatureMap& u_c,
                       const SparseKeySet& keys, const AttentionConfig& cfg,
                       const ScoreConstraints& sc) {
  cfg.validate();
  if (!x.same_extent(u_x)) throw ArgumentError("image and u_x extents differ");
  if (!u_c.same_extent(keys.height, keys.width)) {
    throw ArgumentError("key set does not match the u_c extent");
  }
  sc.validate(u_x.height(), u_x.width(), u_c.height(), u_c.width());

  WarpResult result;
  result.key_offsets = keys.offsets;
  result.key_coords = keys.coords;
  result.key_weights.assign(keys.coords.size(), 0.0);
  result.weight_sums.assign(keys.queries(), 0.0);
  result.evaluations = keys.coords.size();

  parallel_for(keys.queries(), cfg.threads, [&](std::size_t q) {
    const int qr = static_cast<int>(q / keys.width);
    const int qc = static_cast<int>(q % keys.width);
    const auto w = sparse_attention_weights(u_c, u_x, keys.keys_of(q), qr, qc, cfg, sc);
    double total = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      result.key_weights[keys.offsets[q] + k] = w[k];
      total += w[k];
    }
    result.weight_sums[q] = total;
  });
  result.warped = sparse_attentive_warp(x, keys, result.key_weights, cfg.threads);
  return result;
}

FeatureMap keys_to_tensor(const WarpResult& warp) {
  const std::size_t n = warp.key_offsets.empty() ? 0 : warp.key_offsets.size() - 1;
  if (n != warp.warped.pixel_count() || n == 0) {
    throw ArgumentError("warp result carries no per-query keys");
  }
  std::size_t longest = 0;
  for (std::size_t q = 0; q < n; ++q) {
    longest = std::max(longest, warp.key_offsets[q + 1] - warp.key_offsets[q]);
  }
  longest = std::max<std::size_t>(longest, 1);
  FeatureMap out(warp.warped.height(), warp.warped.width(), static_cast<int>(3 * longest));
  for (std::size_t q = 0; q < n; ++q) {
    auto dst = out.pixel(q);
    const auto coords = warp.keys_of(q);
    const auto weights = warp.weights_of(q);
    for (std::size_t k = 0; k < longest; ++k) {
      const bool real = k < coords.size();
      dst[3 * k] = real ? static_cast<float>(coords[k].y) : -1.0f;
      dst[3 * k + 1] = real ? static_cast<float>(coords[k].x) : -1.0f;
      dst[3 * k + 2] = real ? static_cast<float>(weights[k]) : 0.0f;
    }
  }
  return out;
}

}  // namespace hrwarp
