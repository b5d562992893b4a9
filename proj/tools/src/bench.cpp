// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "bench.hpp"

#include <algorithm>
#include <chrono>

#include "hrwarp/counter_rng.hpp"
#include "hrwarp/tensor_io.hpp"
#include "json.hpp"

namespace hrwarp::cli {

BenchInstance make_bench_instance(int size, int channels, int shift_y, int shift_x,
                                  std::uint64_t seed) {
  if (size < 1) throw ArgumentError("bench sizes must be positive");
  if (channels < 2) throw ArgumentError("bench needs at least two feature channels");
  CounterStream rng(seed, 0xbe4c);
  FeatureMap raw(size, size, channels);
  for (auto& v : raw.values()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  BenchInstance inst;
  inst.source = normalize_location_wise(raw);
  inst.target = FeatureMap(size, size, channels);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const auto src = inst.source.pixel(std::clamp(y - shift_y, 0, size - 1),
                                         std::clamp(x - shift_x, 0, size - 1));
      std::copy(src.begin(), src.end(), inst.target.pixel(y, x).begin());
    }
  }
  return inst;
}

BenchReport run_bench(const BenchOptions& options) {
  options.sampler.validate();
  options.attention.validate();
  if (options.sizes.empty()) throw ArgumentError("bench needs at least one size");
  BenchReport report;
  for (int size : options.sizes) {
    const BenchInstance inst = make_bench_instance(size, options.channels, options.shift_y,
                                                   options.shift_x, options.sampler.seed);
    for (BenchMode mode : options.modes) {
      BenchEntry e;
      e.mode = mode;
      e.size = size;
      e.pixels = inst.source.pixel_count();
      e.dense_evaluations = e.pixels * e.pixels;
      const auto start = std::chrono::steady_clock::now();
      if (mode == BenchMode::sparse) {
        e.evaluations = sample_key_indices(inst.source, inst.target, options.sampler).evaluations;
      } else {
        e.evaluations = dense_argmax_field(inst.source, inst.target, options.attention).evaluations;
      }
      e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report.push_back(e);
    }
  }
  return report;
}

std::string to_string(BenchMode mode) { return mode == BenchMode::sparse ? "sparse" : "dense"; }

std::string to_json_line(const BenchEntry& e) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(e.mode);
  j["size"] = e.size;
  j["pixels"] = e.pixels;
  j["evaluations"] = e.evaluations;
  j["dense_evaluations"] = e.dense_evaluations;
  j["seconds"] = e.seconds;
  return j.dump();
}

}  // namespace hrwarp::cli
