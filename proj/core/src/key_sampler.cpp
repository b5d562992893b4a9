// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/key_sampler.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <string>

#include "hrwarp/attention_core.hpp"
#include "hrwarp/counter_rng.hpp"
#include "hrwarp/parallel.hpp"
#include "hrwarp/tensor_io.hpp"

namespace hrwarp {
namespace {

// Neighbour visiting order defines pool order after the query's own entries.
constexpr std::array<std::array<int, 2>, 8> kNeighbours = {{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1},
}};

struct Best {
  Coord coord;
  double score;
  double first_score;  // score of pool entry 0
};

}  // namespace

void SamplerConfig::validate() const {
  if (iterations < 1) throw ArgumentError("iterations must be >= 1");
  if (particle_slots < 1) throw ArgumentError("particle_slots must be >= 1");
  if (init_samples < 0) throw ArgumentError("init_samples must be >= 0");
  if (window_w0 && !(*window_w0 >= 0.0)) throw ArgumentError("window_w0 must be >= 0");
  if (!(decay_lambda >= 0.0)) throw ArgumentError("decay_lambda must be >= 0");
  if (decay_cutoff && (*decay_cutoff < 0 || *decay_cutoff > iterations)) {
    throw ArgumentError("decay_cutoff must be in [0, iterations]");
  }
  if (extra_propagations < 0) throw ArgumentError("extra_propagations must be >= 0");
}

SamplerConfig SamplerConfig::resolved(int height, int width) const {
  SamplerConfig out = *this;
  if (!out.window_w0) out.window_w0 = static_cast<double>(std::max(height, width));
  if (!out.decay_cutoff) out.decay_cutoff = std::max(0, iterations - 2);
  return out;
}

SamplerConfig SamplerConfig::local_edit_preset() {
  SamplerConfig cfg;
  cfg.extra_propagations = 2;
  return cfg;
}

void ScoreConstraints::validate(int source_h, int source_w, int target_h, int target_w) const {
  if (!(penalty_value > 0.0)) throw ArgumentError("penalty_value must be > 0");
  if (label_penalty_enabled) {
    if (source_labels == nullptr || target_labels == nullptr) {
      throw ArgumentError("label penalty needs both source and target label maps");
    }
    if (!source_labels->same_extent(source_h, source_w) ||
        !target_labels->same_extent(target_h, target_w)) {
      throw ArgumentError("label maps do not match feature extents");
    }
  }
  if (excluded_mask != nullptr && !excluded_mask->same_extent(source_h, source_w)) {
    throw ArgumentError("excluded mask does not match the source extent");
  }
}

double window_schedule(int iteration, const SamplerConfig& cfg) {
  if (!cfg.window_w0 || !cfg.decay_cutoff) {
    throw ArgumentError("window_schedule needs a resolved config");
  }
  if (iteration >= *cfg.decay_cutoff) return 0.0;
  return *cfg.window_w0 * std::exp(-cfg.decay_lambda * iteration);
}

double constrained_score(double base, int q_row, int q_col, Coord t, const ScoreConstraints& sc) {
  double score = base;
  if (sc.label_penalty_enabled) {
    const LabelMap& src = *sc.source_labels;
    const int r = std::clamp(static_cast<int>(std::floor(t.y + 0.5)), 0, src.height() - 1);
    const int c = std::clamp(static_cast<int>(std::floor(t.x + 0.5)), 0, src.width() - 1);
    if (sc.target_labels->id(q_row, q_col) != src.id(r, c)) score -= sc.penalty_value;
  }
  if (sc.excluded_mask != nullptr) {
    const Mask& mask = *sc.excluded_mask;
    const Footprint fp = bilinear_footprint(t, mask.height(), mask.width());
    for (int i = 0; i < fp.size; ++i) {
      if (mask.test(fp.rows[i], fp.cols[i])) {
        score -= sc.penalty_value;
        break;
      }
    }
  }
  return score;
}

SamplingResult sample_key_indices(const FeatureMap& u_x, const FeatureMap& u_c,
                                  const SamplerConfig& config, const ScoreConstraints& sc) {
  config.validate();
  if (!u_x.same_extent(u_c) || u_x.channels() != u_c.channels()) {
    throw ArgumentError("u_x and u_c must share extent and channel count");
  }
  if (u_x.pixel_count() == 0) throw ArgumentError("empty feature map");
  sc.validate(u_x.height(), u_x.width(), u_c.height(), u_c.width());

  const int h = u_c.height();
  const int w = u_c.width();
  const std::size_t n = u_c.pixel_count();
  const SamplerConfig cfg = config.resolved(u_x.height(), u_x.width());
  const int slots = cfg.particle_slots;
  const int iters = cfg.iterations;
  const int k = cfg.init_samples;
  const std::size_t local = static_cast<std::size_t>(k) + 1;
  const bool adjusted = cfg.propagation_mode == PropagationMode::adjusted;

  SamplingResult result;
  result.keys.height = h;
  result.keys.width = w;
  result.keys.per_query = slots * iters;
  result.keys.coords.resize(n * result.keys.per_query);
  result.keys.scores.resize(n * result.keys.per_query);
  result.particles.slots = slots;
  result.particles.height = h;
  result.particles.width = w;
  result.particles.coords.resize(n * slots);
  result.particles.scores.resize(n * slots);

  std::atomic<std::uint64_t> evaluations{0};
  auto score_at = [&](std::size_t q, Coord t) {
    const int qr = static_cast<int>(q / w);
    const int qc = static_cast<int>(q % w);
    return constrained_score(bilinear_dot(u_x, t, u_c.pixel(q)), qr, qc, t, sc);
  };
  auto key_slot = [&](std::size_t q, int iteration, int slot) {
    return q * result.keys.per_query + static_cast<std::size_t>(iteration) * slots + slot;
  };

  std::vector<Coord> live(n);
  std::vector<double> live_score(n);
  std::vector<Coord> next(n);
  std::vector<double> next_score(n);
  std::vector<Coord> pools(n * local);

  // Evaluates the union of the query's own pool and its 8 neighbours' pools
  // (each `stride` long) and returns the first maximiser.
  auto evaluate = [&](std::size_t q, const std::vector<Coord>& src, std::size_t stride,
                      std::uint64_t& count) {
    const int qr = static_cast<int>(q / w);
    const int qc = static_cast<int>(q % w);
    const double first = score_at(q, src[q * stride]);
    Best best{src[q * stride], first, first};
    ++count;
    for (std::size_t j = 1; j < stride; ++j) {
      const Coord c = src[q * stride + j];
      const double s = score_at(q, c);
      ++count;
      if (s > best.score) best = {c, s, first};
    }
    for (const auto& [dy, dx] : kNeighbours) {
      const int nr = qr + dy;
      const int nc = qc + dx;
      if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
      const std::size_t nq = static_cast<std::size_t>(nr) * w + nc;
      for (std::size_t j = 0; j < stride; ++j) {
        Coord c = src[nq * stride + j];
        if (adjusted) c = clamp_coord({c.y - dy, c.x - dx}, u_x.height(), u_x.width());
        const double s = score_at(q, c);
        ++count;
        if (s > best.score) best = {c, s, first};
      }
    }
    return best;
  };

  const auto chunked = [&](auto&& body) {
    // Per-query work; evaluation counts are reduced once per worker chunk.
    parallel_for(n, cfg.threads, [&](std::size_t q) {
      std::uint64_t count = 0;
      body(q, count);
      if (count) evaluations.fetch_add(count, std::memory_order_relaxed);
    });
  };

  for (int slot = 0; slot < slots; ++slot) {
    const auto slot_id = static_cast<std::uint32_t>(slot);
    chunked([&](std::size_t q, std::uint64_t&) {
      const auto u = uniform_pair(cfg.seed, static_cast<std::uint32_t>(q), 0u, 0u, slot_id);
      live[q] = clamp_coord({u.first * (u_x.height() - 1), u.second * (u_x.width() - 1)},
                            u_x.height(), u_x.width());
      result.keys.coords[key_slot(q, 0, slot)] = live[q];
    });
    if (iters == 1) {
      chunked([&](std::size_t q, std::uint64_t& count) {
        live_score[q] = score_at(q, live[q]);
        result.keys.scores[key_slot(q, 0, slot)] = live_score[q];
        ++count;
      });
    }

    for (int it = 1; it < iters; ++it) {
      const double window = window_schedule(it, cfg);
      // Initialize: own particle plus k jittered copies inside the window.
      chunked([&](std::size_t q, std::uint64_t&) {
        Coord* pool = pools.data() + q * local;
        pool[0] = live[q];
        for (int j = 0; j < k; ++j) {
          const auto u = uniform_pair(cfg.seed, static_cast<std::uint32_t>(q),
                                      static_cast<std::uint32_t>(it),
                                      static_cast<std::uint32_t>(j), slot_id);
          pool[j + 1] = clamp_coord({live[q].y + window * (2.0 * u.first - 1.0),
                                     live[q].x + window * (2.0 * u.second - 1.0)},
                                    u_x.height(), u_x.width());
        }
      });
      // Propagate + evaluate.
      chunked([&](std::size_t q, std::uint64_t& count) {
        const Best best = evaluate(q, pools, local, count);
        next[q] = best.coord;
        next_score[q] = best.score;
        if (it == 1) {
          // Pool entry 0 is the untouched initial particle.
          result.keys.scores[key_slot(q, 0, slot)] = best.first_score;
        }
      });
      std::swap(live, next);
      std::swap(live_score, next_score);

      for (int extra = 0; extra < cfg.extra_propagations; ++extra) {
        chunked([&](std::size_t q, std::uint64_t& count) {
          const Best best = evaluate(q, live, 1, count);
          next[q] = best.coord;
          next_score[q] = best.score;
        });
        std::swap(live, next);
        std::swap(live_score, next_score);
      }

      // Accumulate.
      for (std::size_t q = 0; q < n; ++q) {
        result.keys.coords[key_slot(q, it, slot)] = live[q];
        result.keys.scores[key_slot(q, it, slot)] = live_score[q];
      }
    }

    for (std::size_t q = 0; q < n; ++q) {
      result.particles.coords[static_cast<std::size_t>(slot) * n + q] = live[q];
      result.particles.scores[static_cast<std::size_t>(slot) * n + q] = live_score[q];
    }
  }
  result.evaluations = evaluations.load();
  return result;
}

}  // namespace hrwarp
