// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace hrwarp {

/// Philox4x32-10 (Salmon et al., SC'11). A pure function of (counter, key):
/// no state, so draws can be addressed directly by their logical position.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

  static Key key_from_seed(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static Counter single_round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Uniform double in [0, 1) from 53 bits of two 32-bit words.
inline double unit_double(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits =
      ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

/// Two independent uniforms in [0,1) addressed by a four-word counter.
struct UniformPair {
  double first;
  double second;
};

inline UniformPair uniform_pair(std::uint64_t seed, std::uint32_t a, std::uint32_t b,
                                std::uint32_t c, std::uint32_t d) noexcept {
  const auto out = Philox4x32::generate({a, b, c, d}, Philox4x32::key_from_seed(seed));
  return {unit_double(out[0], out[1]), unit_double(out[2], out[3])};
}

/// Sequential convenience stream over Philox, for procedures whose draw
/// count is data-dependent (dataset synthesis, augmentation).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint32_t stream) noexcept
      : key_(Philox4x32::key_from_seed(seed)), stream_(stream) {}

  double uniform() noexcept {
    if (cursor_ == 2) refill();
    return cached_[cursor_++];
  }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    const auto span = static_cast<double>(hi - lo + 1);
    auto v = lo + static_cast<std::int64_t>(uniform() * span);
    return v > hi ? hi : v;
  }

 private:
  void refill() noexcept {
    const auto out = Philox4x32::generate(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
         stream_, 0x5eedu},
        key_);
    ++block_;
    cached_[0] = unit_double(out[0], out[1]);
    cached_[1] = unit_double(out[2], out[3]);
    cursor_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t stream_;
  std::uint64_t block_ = 0;
  std::array<double, 2> cached_{};
  int cursor_ = 2;
};

}  // namespace hrwarp
