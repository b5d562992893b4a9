// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace hrwarp {
namespace {

void put_u32le(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xffu));
  }
}

std::uint32_t get_u32le(std::span<const std::byte> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  }
  return v;
}

}  // namespace

std::vector<std::byte> encode_tensor(const Grid<float>& map) {
  if (map.height() <= 0 || map.width() <= 0 || map.channels() <= 0) {
    throw ArgumentError("cannot encode a tensor with a zero dimension");
  }
  std::vector<std::byte> out;
  out.reserve(kTensorHeaderBytes + map.values().size() * 4);
  for (char c : kTensorMagic) out.push_back(static_cast<std::byte>(c));
  put_u32le(out, static_cast<std::uint32_t>(map.height()));
  put_u32le(out, static_cast<std::uint32_t>(map.width()));
  put_u32le(out, static_cast<std::uint32_t>(map.channels()));
  for (float v : map.values()) put_u32le(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

FeatureMap decode_tensor(std::span<const std::byte> bytes) {
  if (bytes.size() < 4) throw FormatError("truncated header", bytes.size());
  for (std::size_t i = 0; i < 4; ++i) {
    if (static_cast<char>(bytes[i]) != kTensorMagic[i]) throw FormatError("bad magic", i);
  }
  if (bytes.size() < kTensorHeaderBytes) throw FormatError("truncated header", bytes.size());
  const std::uint32_t h = get_u32le(bytes, 4);
  const std::uint32_t w = get_u32le(bytes, 8);
  const std::uint32_t c = get_u32le(bytes, 12);
  if (h == 0) throw FormatError("zero dimension H", 4);
  if (w == 0) throw FormatError("zero dimension W", 8);
  if (c == 0) throw FormatError("zero dimension C", 12);
  constexpr auto kMaxDim = static_cast<std::uint32_t>(std::numeric_limits<int>::max());
  if (h > kMaxDim || w > kMaxDim || c > kMaxDim) throw FormatError("dimension too large", 4);

  const std::uint64_t count = std::uint64_t{h} * w * c;
  const std::uint64_t payload = bytes.size() - kTensorHeaderBytes;
  if (count > payload / 4) {
    throw FormatError("truncated payload: expected " + std::to_string(count * 4) + " bytes",
                      bytes.size());
  }
  if (payload != count * 4) {
    throw FormatError("trailing bytes after payload", kTensorHeaderBytes + count * 4);
  }

  FeatureMap map(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
  auto values = map.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<float>(get_u32le(bytes, kTensorHeaderBytes + 4 * i));
  }
  return map;
}

void save_tensor(const Grid<float>& map, const std::filesystem::path& path) {
  const auto bytes = encode_tensor(map);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ArgumentError("failed writing " + path.string());
}

FeatureMap load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_tensor(std::as_bytes(std::span(raw)));
}

Coord clamp_coord(Coord t, int height, int width) noexcept {
  return {std::clamp(t.y, 0.0, static_cast<double>(height - 1)),
          std::clamp(t.x, 0.0, static_cast<double>(width - 1))};
}

Footprint bilinear_footprint(Coord t, int height, int width) {
  if (!std::isfinite(t.y) || !std::isfinite(t.x)) {
    throw ArgumentError("non-finite sample coordinate");
  }
  const int y0 = std::clamp(static_cast<int>(std::floor(t.y)), 0, height - 1);
  const int x0 = std::clamp(static_cast<int>(std::floor(t.x)), 0, width - 1);
  const double fy = std::clamp(t.y - y0, 0.0, 1.0);
  const double fx = std::clamp(t.x - x0, 0.0, 1.0);
  const int y1 = std::min(y0 + 1, height - 1);
  const int x1 = std::min(x0 + 1, width - 1);

  Footprint fp;
  auto add = [&](int r, int c, double weight) {
    if (weight == 0.0) return;
    fp.rows[fp.size] = r;
    fp.cols[fp.size] = c;
    fp.weights[fp.size] = weight;
    ++fp.size;
  };
  add(y0, x0, (1.0 - fy) * (1.0 - fx));
  add(y0, x1, (1.0 - fy) * fx);
  add(y1, x0, fy * (1.0 - fx));
  add(y1, x1, fy * fx);
  return fp;
}

void bilinear_sample(const Grid<float>& map, Coord t, std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(map.channels())) {
    throw ArgumentError("output span does not match channel count");
  }
  const Footprint fp = bilinear_footprint(t, map.height(), map.width());
  std::fill(out.begin(), out.end(), 0.0);
  for (int i = 0; i < fp.size; ++i) {
    const auto v = map.pixel(fp.rows[i], fp.cols[i]);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += fp.weights[i] * v[c];
  }
}

std::vector<double> bilinear_sample(const Grid<float>& map, Coord t) {
  std::vector<double> out(static_cast<std::size_t>(map.channels()));
  bilinear_sample(map, t, out);
  return out;
}

double bilinear_dot(const Grid<float>& map, Coord t, std::span<const float> query) {
  const Footprint fp = bilinear_footprint(t, map.height(), map.width());
  double total = 0.0;
  for (int i = 0; i < fp.size; ++i) {
    const auto v = map.pixel(fp.rows[i], fp.cols[i]);
    double dot = 0.0;
    for (std::size_t c = 0; c < query.size(); ++c) {
      dot += static_cast<double>(query[c]) * v[c];
    }
    total += fp.weights[i] * dot;
  }
  return total;
}

FeatureMap normalize_location_wise(const Grid<float>& map) {
  FeatureMap out(map.height(), map.width(), map.channels());
  const auto channels = static_cast<std::size_t>(map.channels());
  if (channels == 0) return out;
  std::vector<double> centred(channels);
  for (std::size_t p = 0; p < map.pixel_count(); ++p) {
    const auto in = map.pixel(p);
    double mean = 0.0;
    for (float v : in) mean += v;
    mean /= static_cast<double>(channels);
    double norm2 = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      centred[c] = in[c] - mean;
      norm2 += centred[c] * centred[c];
    }
    const double norm = std::sqrt(norm2);
    auto dst = out.pixel(p);
    if (norm < kDegenerateNorm) {
      std::fill(dst.begin(), dst.end(), 0.0f);
      continue;
    }
    for (std::size_t c = 0; c < channels; ++c) {
      dst[c] = static_cast<float>(centred[c] / norm);
    }
  }
  return out;
}

}  // namespace hrwarp
