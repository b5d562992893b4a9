// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hrwarp/errors.hpp"

namespace hrwarp {

/// Fractional pixel position, row first.
struct Coord {
  double y = 0.0;
  double x = 0.0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Dense row-major H x W x C storage, channel index fastest.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int height, int width, int channels, T fill = T{})
      : height_(height), width_(width), channels_(channels) {
    if (height < 0 || width < 0 || channels < 0) {
      throw ArgumentError("grid dimensions must be non-negative");
    }
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * width_;
  }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int row, int col) const noexcept {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }
  bool same_extent(int height, int width) const noexcept {
    return height_ == height && width_ == width;
  }
  template <typename U>
  bool same_extent(const Grid<U>& other) const noexcept {
    return same_extent(other.height(), other.width());
  }

  std::size_t offset(int row, int col, int ch = 0) const noexcept {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
  }

  T& at(int row, int col, int ch = 0) noexcept { return data_[offset(row, col, ch)]; }
  const T& at(int row, int col, int ch = 0) const noexcept {
    return data_[offset(row, col, ch)];
  }

  std::span<T> pixel(int row, int col) noexcept {
    return {data_.data() + offset(row, col), static_cast<std::size_t>(channels_)};
  }
  std::span<const T> pixel(int row, int col) const noexcept {
    return {data_.data() + offset(row, col), static_cast<std::size_t>(channels_)};
  }
  std::span<const T> pixel(std::size_t linear) const noexcept {
    return {data_.data() + linear * channels_, static_cast<std::size_t>(channels_)};
  }
  std::span<T> pixel(std::size_t linear) noexcept {
    return {data_.data() + linear * channels_, static_cast<std::size_t>(channels_)};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

/// Location-wise feature vectors (u_x, u_c and their low-resolution forms).
class FeatureMap : public Grid<float> {
 public:
  using Grid<float>::Grid;
};

/// RGB image with values in [0, 1].
class Image : public Grid<float> {
 public:
  Image() = default;
  Image(int height, int width, float fill = 0.0f) : Grid<float>(height, width, 3, fill) {}
};

/// Integer semantic class per pixel.
class LabelMap : public Grid<std::uint8_t> {
 public:
  LabelMap() = default;
  LabelMap(int height, int width, std::uint8_t fill = 0)
      : Grid<std::uint8_t>(height, width, 1, fill) {}

  std::uint8_t id(int row, int col) const noexcept { return at(row, col); }
};

/// Binary region marker; true means the pixel is editable / excluded.
class Mask : public Grid<std::uint8_t> {
 public:
  Mask() = default;
  Mask(int height, int width, bool fill = false)
      : Grid<std::uint8_t>(height, width, 1, fill ? 1 : 0) {}

  bool test(int row, int col) const noexcept { return at(row, col) != 0; }
  void set(int row, int col, bool on = true) noexcept { at(row, col) = on ? 1 : 0; }
  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto v : values()) n += v != 0;
    return n;
  }
};

}  // namespace hrwarp
