// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstring>
#include <string>

namespace hrwarp {
namespace {

struct ImageGuard {
  png_image image;
  ImageGuard() {
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
  }
  ~ImageGuard() { png_image_free(&image); }
  ImageGuard(const ImageGuard&) = delete;
  ImageGuard& operator=(const ImageGuard&) = delete;
};

int channels_of(png_uint_32 format) {
  int n = (format & PNG_FORMAT_FLAG_COLOR) ? 3 : 1;
  if (format & PNG_FORMAT_FLAG_ALPHA) ++n;
  return n;
}

png_uint_32 format_for(int channels, int bit_depth) {
  png_uint_32 format = 0;
  switch (channels) {
    case 1: format = PNG_FORMAT_GRAY; break;
    case 2: format = PNG_FORMAT_GA; break;
    case 3: format = PNG_FORMAT_RGB; break;
    case 4: format = PNG_FORMAT_RGBA; break;
    default: throw ArgumentError("unsupported PNG channel count " + std::to_string(channels));
  }
  if (bit_depth == 16) {
    format |= PNG_FORMAT_FLAG_LINEAR;
  } else if (bit_depth != 8) {
    throw ArgumentError("unsupported PNG bit depth " + std::to_string(bit_depth));
  }
  return format;
}

PngBuffer read_gray8(const std::filesystem::path& path, const char* what) {
  PngBuffer png = read_png(path);
  if (png.bit_depth != 8) {
    throw FormatError(std::string(what) + " must be 8-bit, got " +
                      std::to_string(png.bit_depth) + "-bit: " + path.string());
  }
  if (png.channels != 1) {
    throw FormatError(std::string(what) + " must be single-channel, got " +
                      std::to_string(png.channels) + " channels: " + path.string());
  }
  return png;
}

}  // namespace

PngBuffer read_png(const std::filesystem::path& path) {
  ImageGuard guard;
  png_image& image = guard.image;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw FormatError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_COLORMAP) {
    // Palette files decode to their expanded colors.
    image.format &= ~PNG_FORMAT_FLAG_COLORMAP;
  }
  PngBuffer png;
  png.width = static_cast<int>(image.width);
  png.height = static_cast<int>(image.height);
  png.channels = channels_of(image.format);
  png.bit_depth = (image.format & PNG_FORMAT_FLAG_LINEAR) ? 16 : 8;

  const std::size_t sample_bytes = png.bit_depth / 8;
  png.bytes.resize(static_cast<std::size_t>(png.width) * png.height * png.channels *
                   sample_bytes);
  if (png.bit_depth == 16) {
    std::vector<png_uint_16> wide(png.bytes.size() / 2);
    if (!png_image_finish_read(&image, nullptr, wide.data(), 0, nullptr)) {
      throw FormatError("cannot decode PNG " + path.string() + ": " + image.message);
    }
    for (std::size_t i = 0; i < wide.size(); ++i) {
      png.bytes[2 * i] = static_cast<std::uint8_t>(wide[i] >> 8);
      png.bytes[2 * i + 1] = static_cast<std::uint8_t>(wide[i] & 0xff);
    }
  } else if (!png_image_finish_read(&image, nullptr, png.bytes.data(), 0, nullptr)) {
    throw FormatError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  return png;
}

void write_png(const std::filesystem::path& path, const PngBuffer& png) {
  if (png.width <= 0 || png.height <= 0) throw ArgumentError("cannot write an empty PNG");
  ImageGuard guard;
  png_image& image = guard.image;
  image.width = static_cast<png_uint_32>(png.width);
  image.height = static_cast<png_uint_32>(png.height);
  image.format = format_for(png.channels, png.bit_depth);
  const std::size_t expected = static_cast<std::size_t>(png.width) * png.height *
                               png.channels * (png.bit_depth / 8);
  if (png.bytes.size() != expected) throw ArgumentError("PNG payload size mismatch");

  int ok = 0;
  if (png.bit_depth == 16) {
    std::vector<png_uint_16> wide(expected / 2);
    for (std::size_t i = 0; i < wide.size(); ++i) {
      wide[i] = static_cast<png_uint_16>((png.bytes[2 * i] << 8) | png.bytes[2 * i + 1]);
    }
    ok = png_image_write_to_file(&image, path.string().c_str(), 0, wide.data(), 0, nullptr);
  } else {
    ok = png_image_write_to_file(&image, path.string().c_str(), 0, png.bytes.data(), 0,
                                 nullptr);
  }
  if (!ok) throw ArgumentError("cannot write PNG " + path.string() + ": " + image.message);
}

std::uint8_t quantize_unit(float v) noexcept {
  if (!(v > 0.0f)) return 0;
  if (v >= 1.0f) return 255;
  return static_cast<std::uint8_t>(std::floor(static_cast<double>(v) * 255.0 + 0.5));
}

Image load_image(const std::filesystem::path& path) {
  const PngBuffer png = read_png(path);
  if (png.bit_depth != 8) {
    throw FormatError("image must be 8-bit: " + path.string());
  }
  Image image(png.height, png.width);
  const bool color = png.channels >= 3;
  for (std::size_t p = 0; p < image.pixel_count(); ++p) {
    const std::uint8_t* src = png.bytes.data() + p * png.channels;
    auto dst = image.pixel(p);
    for (int c = 0; c < 3; ++c) dst[c] = static_cast<float>((color ? src[c] : src[0]) / 255.0);
  }
  return image;
}

LabelMap load_label_map(const std::filesystem::path& path) {
  const PngBuffer png = read_gray8(path, "label map");
  LabelMap labels(png.height, png.width);
  std::copy(png.bytes.begin(), png.bytes.end(), labels.values().begin());
  return labels;
}

Mask load_mask(const std::filesystem::path& path) {
  const PngBuffer png = read_gray8(path, "mask");
  Mask mask(png.height, png.width);
  auto dst = mask.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = png.bytes[i] != 0 ? 1 : 0;
  return mask;
}

void save_image(const Image& image, const std::filesystem::path& path) {
  PngBuffer png{image.width(), image.height(), 3, 8, {}};
  png.bytes.reserve(image.values().size());
  for (float v : image.values()) png.bytes.push_back(quantize_unit(v));
  write_png(path, png);
}

void save_label_map(const LabelMap& labels, const std::filesystem::path& path) {
  PngBuffer png{labels.width(), labels.height(), 1, 8, {}};
  png.bytes.assign(labels.values().begin(), labels.values().end());
  write_png(path, png);
}

void save_mask(const Mask& mask, const std::filesystem::path& path) {
  PngBuffer png{mask.width(), mask.height(), 1, 8, {}};
  png.bytes.reserve(mask.values().size());
  for (auto v : mask.values()) png.bytes.push_back(v != 0 ? 255 : 0);
  write_png(path, png);
}

}  // namespace hrwarp
