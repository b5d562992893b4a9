// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hrwarp/attention_core.hpp"
#include "hrwarp/grid.hpp"
#include "hrwarp/key_sampler.hpp"

namespace hrwarp {

/// Variable-length key lists per query (CSR). `height` x `width` is the query grid.
struct SparseKeySet {
  int height = 0;
  int width = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<Coord> coords;

  std::size_t queries() const noexcept { return offsets.size() - 1; }
  std::span<const Coord> keys_of(std::size_t q) const {
    return std::span(coords).subspan(offsets[q], offsets[q + 1] - offsets[q]);
  }
};

/// Drops keys that repeat an earlier one at 1/8-pixel resolution; first
/// occurrence wins and the remaining order is preserved.
std::vector<Coord> dedupe_keys(std::span<const Coord> keys);

/// As above, but each 1/8-pixel bin is represented by its highest-scoring
/// member (earliest on ties), placed at the bin's first position.
std::vector<Coord> dedupe_keys(std::span<const Coord> keys, std::span<const double> scores);

/// Per-query key lists from a sampling run, optionally deduplicated.
SparseKeySet gather_keys(const KeyIndexSets& keys, bool dedupe = true);

/// Removes keys whose bilinear footprint touches `excluded`. A query whose
/// keys are all excluded keeps its list unchanged.
SparseKeySet drop_excluded_keys(const SparseKeySet& keys, const Mask& excluded);

/// Every integer source pixel for every query, in linear order.
SparseKeySet exhaustive_keys(int query_h, int query_w, int source_h, int source_w);

/// softmax(gamma * constrained_score) over the query's keys.
std::vector<double> sparse_attention_weights(const FeatureMap& u_c, const FeatureMap& u_x,
                                             std::span<const Coord> keys, int q_row, int q_col,
                                             const AttentionConfig& cfg,
                                             const ScoreConstraints& sc = {});

/// r(q) = sum_k A_qk * bilinear(x, key_k), keys summed in stored order.
/// `weights` is aligned with keys.coords.
Image sparse_attentive_warp(const Image& x, const SparseKeySet& keys,
                            std::span<const double> weights, unsigned threads = 1);

/// Weights + gather in one pass; fills the CSR fields of WarpResult.
WarpResult sparse_warp(const Image& x, const FeatureMap& u_x, const FeatureMap& u_c,
                       const SparseKeySet& keys, const AttentionConfig& cfg,
                       const ScoreConstraints& sc = {});

/// H x W x 3K tensor of (y, x, weight) triples per query, K = longest key
/// list. Shorter lists are padded with (-1, -1, 0).
FeatureMap keys_to_tensor(const WarpResult& warp);

}  // namespace hrwarp
