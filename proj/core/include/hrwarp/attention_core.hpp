// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hrwarp/grid.hpp"

namespace hrwarp {

struct AttentionConfig {
  double gamma = 100.0;               // softmax temperature: weights = softmax(gamma * s)
  std::size_t dense_size_cap = 16384; // max pixels for all-pairs routines
  bool force_dense = false;           // bypass dense_size_cap
  unsigned threads = 1;

  void validate() const;
};

/// Warped image plus the keys and modulation weights that produced it, in a
/// CSR layout over queries. Dense warps leave the key arrays empty.
struct WarpResult {
  Image warped;
  std::vector<std::size_t> key_offsets;
  std::vector<Coord> key_coords;
  std::vector<double> key_weights;
  std::vector<double> weight_sums;
  std::uint64_t evaluations = 0;

  std::span<const Coord> keys_of(std::size_t q) const {
    return std::span(key_coords).subspan(key_offsets[q], key_offsets[q + 1] - key_offsets[q]);
  }
  std::span<const double> weights_of(std::size_t q) const {
    return std::span(key_weights).subspan(key_offsets[q], key_offsets[q + 1] - key_offsets[q]);
  }
};

/// Exact best integer match per query.
struct CorrespondenceField {
  int height = 0;
  int width = 0;
  std::vector<int> match_row;
  std::vector<int> match_col;
  std::vector<double> scores;
  std::uint64_t evaluations = 0;
};

/// s = <u_c(q), bilinear(u_x, t)>.
double similarity(const FeatureMap& u_c, const FeatureMap& u_x, int q_row, int q_col, Coord t);

/// Numerically stable softmax(gamma * scores); the per-query max is
/// subtracted before exponentiation.
std::vector<double> scaled_softmax(std::span<const double> scores, double gamma);

/// Throws SizeCapError when an all-pairs problem exceeds the configured cap.
void check_dense_cap(std::size_t pixels, const AttentionConfig& cfg);

/// Attention weights of one query over every source pixel (linear order).
std::vector<double> dense_attention_row(const FeatureMap& u_x, const FeatureMap& u_c,
                                        std::size_t query, const AttentionConfig& cfg);

/// Full attention warp: r(q) = sum_p softmax_p(gamma * s_qp) x(p).
/// `x` shares u_x's extent; the result has u_c's extent.
WarpResult dense_warp(const Image& x, const FeatureMap& u_x, const FeatureMap& u_c,
                      const AttentionConfig& cfg);

/// Double-precision dense warp of an arbitrary channel count (values laid out
/// like a Grid, channel fastest). Returns u_c.pixel_count() * channels values.
std::vector<double> dense_warp_values(std::span<const double> values, int channels,
                                      const FeatureMap& u_x, const FeatureMap& u_c,
                                      const AttentionConfig& cfg);

/// Exact argmax over integer source pixels; ties go to the smallest linear index.
CorrespondenceField dense_argmax_field(const FeatureMap& u_x, const FeatureMap& u_c,
                                       const AttentionConfig& cfg = {});

/// ||r_forward - r_cycle||^2 where r_forward warps x_low with s'_qp and
/// r_cycle warps r_forward back with the transposed similarities s'_pq.
double cycle_loss(const Image& x_low, const FeatureMap& u_x_low, const FeatureMap& u_c_low,
                  const AttentionConfig& cfg);

}  // namespace hrwarp
