// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/attention_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hrwarp/parallel.hpp"
#include "hrwarp/tensor_io.hpp"

namespace hrwarp {
namespace {

double dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += static_cast<double>(a[c]) * b[c];
  return s;
}

void check_channels(const FeatureMap& u_x, const FeatureMap& u_c) {
  if (u_x.channels() != u_c.channels()) {
    throw ArgumentError("feature channel mismatch: u_x has " + std::to_string(u_x.channels()) +
                        ", u_c has " + std::to_string(u_c.channels()));
  }
  if (u_x.pixel_count() == 0 || u_c.pixel_count() == 0) {
    throw ArgumentError("empty feature map");
  }
}

void dense_scores(const FeatureMap& u_x, std::span<const float> query, std::span<double> out) {
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = dot(query, u_x.pixel(p));
}

}  // namespace

void AttentionConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ArgumentError("gamma must be > 0");
  if (dense_size_cap < 1) throw ArgumentError("dense_size_cap must be >= 1");
}

double similarity(const FeatureMap& u_c, const FeatureMap& u_x, int q_row, int q_col, Coord t) {
  if (u_c.channels() != u_x.channels()) throw ArgumentError("feature channel mismatch");
  if (!u_c.contains(q_row, q_col)) throw ArgumentError("query out of bounds");
  return bilinear_dot(u_x, t, u_c.pixel(q_row, q_col));
}

std::vector<double> scaled_softmax(std::span<const double> scores, double gamma) {
  if (scores.empty()) throw ArgumentError("softmax over an empty set");
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> w(scores.size());
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    w[i] = std::exp(gamma * (scores[i] - top));
    z += w[i];
  }
  for (double& v : w) v /= z;
  return w;
}

void check_dense_cap(std::size_t pixels, const AttentionConfig& cfg) {
  if (!cfg.force_dense && pixels > cfg.dense_size_cap) {
    throw SizeCapError(pixels, cfg.dense_size_cap);
  }
}

std::vector<double> dense_attention_row(const FeatureMap& u_x, const FeatureMap& u_c,
                                        std::size_t query, const AttentionConfig& cfg) {
  cfg.validate();
  check_channels(u_x, u_c);
  check_dense_cap(std::max(u_x.pixel_count(), u_c.pixel_count()), cfg);
  if (query >= u_c.pixel_count()) throw ArgumentError("query out of bounds");
  std::vector<double> scores(u_x.pixel_count());
  dense_scores(u_x, u_c.pixel(query), scores);
  return scaled_softmax(scores, cfg.gamma);
}

std::vector<double> dense_warp_values(std::span<const double> values, int channels,
                                      const FeatureMap& u_x, const FeatureMap& u_c,
                                      const AttentionConfig& cfg) {
  cfg.validate();
  check_channels(u_x, u_c);
  check_dense_cap(std::max(u_x.pixel_count(), u_c.pixel_count()), cfg);
  const std::size_t keys = u_x.pixel_count();
  if (values.size() != keys * static_cast<std::size_t>(channels)) {
    throw ArgumentError("warp source does not match u_x extent");
  }
  std::vector<double> out(u_c.pixel_count() * channels, 0.0);
  parallel_for(u_c.pixel_count(), cfg.threads, [&](std::size_t q) {
    std::vector<double> scores(keys);
    dense_scores(u_x, u_c.pixel(q), scores);
    const auto w = scaled_softmax(scores, cfg.gamma);
    double* dst = out.data() + q * channels;
    for (std::size_t p = 0; p < keys; ++p) {
      for (int c = 0; c < channels; ++c) dst[c] += w[p] * values[p * channels + c];
    }
  });
  return out;
}

WarpResult dense_warp(const Image& x, const FeatureMap& u_x, const FeatureMap& u_c,
                      const AttentionConfig& cfg) {
  cfg.validate();
  check_channels(u_x, u_c);
  if (!x.same_extent(u_x)) throw ArgumentError("image and u_x extents differ");
  check_dense_cap(std::max(u_x.pixel_count(), u_c.pixel_count()), cfg);

  const std::size_t keys = u_x.pixel_count();
  WarpResult result;
  result.warped = Image(u_c.height(), u_c.width());
  result.weight_sums.assign(u_c.pixel_count(), 0.0);
  result.evaluations = static_cast<std::uint64_t>(keys) * u_c.pixel_count();

  parallel_for(u_c.pixel_count(), cfg.threads, [&](std::size_t q) {
    std::vector<double> scores(keys);
    dense_scores(u_x, u_c.pixel(q), scores);
    const auto w = scaled_softmax(scores, cfg.gamma);
    double acc[3] = {0.0, 0.0, 0.0};
    double total = 0.0;
    for (std::size_t p = 0; p < keys; ++p) {
      const auto src = x.pixel(p);
      for (int c = 0; c < 3; ++c) acc[c] += w[p] * src[c];
      total += w[p];
    }
    auto dst = result.warped.pixel(q);
    for (int c = 0; c < 3; ++c) dst[c] = static_cast<float>(acc[c]);
    result.weight_sums[q] = total;
  });
  return result;
}

CorrespondenceField dense_argmax_field(const FeatureMap& u_x, const FeatureMap& u_c,
                                       const AttentionConfig& cfg) {
  check_channels(u_x, u_c);
  check_dense_cap(std::max(u_x.pixel_count(), u_c.pixel_count()), cfg);
  CorrespondenceField field;
  field.height = u_c.height();
  field.width = u_c.width();
  field.match_row.assign(u_c.pixel_count(), 0);
  field.match_col.assign(u_c.pixel_count(), 0);
  field.scores.assign(u_c.pixel_count(), 0.0);
  field.evaluations = static_cast<std::uint64_t>(u_x.pixel_count()) * u_c.pixel_count();

  parallel_for(u_c.pixel_count(), cfg.threads, [&](std::size_t q) {
    const auto query = u_c.pixel(q);
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < u_x.pixel_count(); ++p) {
      const double s = dot(query, u_x.pixel(p));
      if (s > best_score) {
        best_score = s;
        best = p;
      }
    }
    field.match_row[q] = static_cast<int>(best / u_x.width());
    field.match_col[q] = static_cast<int>(best % u_x.width());
    field.scores[q] = best_score;
  });
  return field;
}

double cycle_loss(const Image& x_low, const FeatureMap& u_x_low, const FeatureMap& u_c_low,
                  const AttentionConfig& cfg) {
  if (!u_x_low.same_extent(u_c_low)) {
    throw ArgumentError("cycle loss needs u_x and u_c with the same extent");
  }
  if (!x_low.same_extent(u_x_low)) throw ArgumentError("image and u_x extents differ");
  std::vector<double> x(x_low.values().begin(), x_low.values().end());
  const auto forward = dense_warp_values(x, 3, u_x_low, u_c_low, cfg);
  // Backward pass: the roles of the two feature maps swap, giving weights
  // softmax_p(gamma * <u_c(p), u_x(q)>) for output location q.
  const auto cycle = dense_warp_values(forward, 3, u_c_low, u_x_low, cfg);
  double loss = 0.0;
  for (std::size_t i = 0; i < forward.size(); ++i) {
    const double d = forward[i] - cycle[i];
    loss += d * d;
  }
  return loss;
}

}  // namespace hrwarp
