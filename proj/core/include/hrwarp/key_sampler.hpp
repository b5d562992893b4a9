// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hrwarp/grid.hpp"

namespace hrwarp {

enum class PropagationMode {
  adjusted,  // neighbour candidates are shifted by (q - q'), PatchMatch style
  raw,       // neighbour candidates are copied unchanged
};

struct SamplerConfig {
  int iterations = 15;     // N
  int particle_slots = 2;  // M
  int init_samples = 4;    // k random candidates per pool
  std::optional<double> window_w0;  // defaults to max(H, W)
  double decay_lambda = 0.8;
  std::optional<int> decay_cutoff;  // window is zero for iterations >= cutoff; defaults to N - 2
  int extra_propagations = 0;
  PropagationMode propagation_mode = PropagationMode::adjusted;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
  /// Copy with window_w0 and decay_cutoff filled in for an H x W source.
  SamplerConfig resolved(int height, int width) const;
  /// Defaults tuned for local layout editing: two extra propagate-evaluate
  /// passes per iteration.
  static SamplerConfig local_edit_preset();
};

/// Score modifiers applied during evaluation and again inside the final
/// softmax. The referenced maps are not owned and must outlive every call.
struct ScoreConstraints {
  bool label_penalty_enabled = false;
  double penalty_value = 1e4;
  const LabelMap* source_labels = nullptr;  // labels of the u_x grid
  const LabelMap* target_labels = nullptr;  // labels of the u_c grid
  const Mask* excluded_mask = nullptr;      // source pixels that may not be used

  void validate(int source_h, int source_w, int target_h, int target_w) const;
};

/// w = w0 * exp(-lambda * i) while i < cutoff, else 0. Iterations are numbered
/// 1..N-1 by the sampler. Requires a resolved config.
double window_schedule(int iteration, const SamplerConfig& cfg);

/// `base` minus penalty_value for a label mismatch between target(q) and
/// source(round(t)), and minus it again when t's bilinear footprint touches
/// the excluded mask.
double constrained_score(double base, int q_row, int q_col, Coord t,
                         const ScoreConstraints& sc);

/// Accumulated keys: per query, M*N coordinates ordered iteration-major
/// (entry i*M + m is slot m after iteration i) with their constrained scores.
struct KeyIndexSets {
  int height = 0;
  int width = 0;
  int per_query = 0;
  std::vector<Coord> coords;
  std::vector<double> scores;

  std::span<const Coord> keys_of(std::size_t q) const {
    return std::span(coords).subspan(q * per_query, per_query);
  }
  std::span<const double> scores_of(std::size_t q) const {
    return std::span(scores).subspan(q * per_query, per_query);
  }
};

/// Live particles t_q for every slot, slot-major.
struct ParticleField {
  int slots = 0;
  int height = 0;
  int width = 0;
  std::vector<Coord> coords;
  std::vector<double> scores;

  const Coord& at(int slot, std::size_t q) const {
    return coords[static_cast<std::size_t>(slot) * height * width + q];
  }
  double score(int slot, std::size_t q) const {
    return scores[static_cast<std::size_t>(slot) * height * width + q];
  }
};

struct SamplingResult {
  KeyIndexSets keys;
  ParticleField particles;
  std::uint64_t evaluations = 0;  // similarity calls
};

/// Initialize-propagate-evaluate-accumulate search for sparse key sets.
/// Output is a pure function of the inputs and cfg.seed.
SamplingResult sample_key_indices(const FeatureMap& u_x, const FeatureMap& u_c,
                                  const SamplerConfig& cfg, const ScoreConstraints& sc = {});

}  // namespace hrwarp
