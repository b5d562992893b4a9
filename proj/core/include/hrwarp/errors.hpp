// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hrwarp {

/// Invalid caller input: bad dimensions, out-of-range ids, empty sets.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or unsupported file content. `offset` is the byte position
/// where decoding stopped, when it is known.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what, std::uint64_t offset = 0)
      : std::runtime_error(what + " (offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

/// Raised by the all-pairs attention routines when the problem exceeds the
/// configured pixel cap.
class SizeCapError : public std::runtime_error {
 public:
  SizeCapError(std::size_t pixels, std::size_t cap)
      : std::runtime_error("dense attention over " + std::to_string(pixels) +
                           " pixels exceeds dense_size_cap=" +
                           std::to_string(cap)),
        pixels_(pixels),
        cap_(cap) {}

  std::size_t pixels() const noexcept { return pixels_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t pixels_;
  std::size_t cap_;
};

}  // namespace hrwarp
