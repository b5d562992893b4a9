// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrwarp/attention_core.hpp"
#include "hrwarp/key_sampler.hpp"

namespace hrwarp::cli {

enum class BenchMode { sparse, dense };

struct BenchOptions {
  std::vector<int> sizes;
  std::vector<BenchMode> modes{BenchMode::sparse};
  int channels = 16;
  int shift_y = 2;
  int shift_x = 3;
  SamplerConfig sampler;
  AttentionConfig attention;
};

struct BenchEntry {
  BenchMode mode = BenchMode::sparse;
  int size = 0;
  std::uint64_t pixels = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t dense_evaluations = 0;  // analytic all-pairs count, (H*W)^2
  double seconds = 0.0;
};

using BenchReport = std::vector<BenchEntry>;

/// Square instance with per-pixel distinct unit features; the target is the
/// source translated by (shift_y, shift_x). Deterministic in `seed`.
struct BenchInstance {
  FeatureMap source;
  FeatureMap target;
};
BenchInstance make_bench_instance(int size, int channels, int shift_y, int shift_x,
                                  std::uint64_t seed);

/// Runs every (size, mode) pair in order. Dense entries respect the size cap
/// unless the attention config forces dense evaluation.
BenchReport run_bench(const BenchOptions& options);

std::string to_string(BenchMode mode);
std::string to_json_line(const BenchEntry& entry);

}  // namespace hrwarp::cli
