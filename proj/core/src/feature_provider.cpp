// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/feature_provider.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <variant>

#include "hrwarp/tensor_io.hpp"

namespace hrwarp {
namespace {

constexpr int kRawFeatures = kRawEvenFeatures + kRawOddFeatures;
constexpr std::uint64_t kMixingSeed = 0x48525431'6d697821ull;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Separable box mean over a (2r+1)^2 window with replicate padding.
std::vector<double> box_mean(const std::vector<double>& plane, int h, int w, int r) {
  std::vector<double> tmp(plane.size());
  std::vector<double> out(plane.size());
  const double inv = 1.0 / (2 * r + 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int d = -r; d <= r; ++d) {
        s += plane[static_cast<std::size_t>(y) * w + std::clamp(x + d, 0, w - 1)];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = s * inv;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int d = -r; d <= r; ++d) {
        s += tmp[static_cast<std::size_t>(std::clamp(y + d, 0, h - 1)) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = s * inv;
    }
  }
  return out;
}

}  // namespace

void ProviderConfig::validate() const {
  if (patch_radius < 0) throw ArgumentError("patch_radius must be >= 0");
  if (descriptor_dims < 3) throw ArgumentError("descriptor_dims must be >= 3");
  if (class_count < 1 || class_count > 256) {
    throw ArgumentError("class_count must be in [1, 256]");
  }
}

int odd_descriptor_channels(int descriptor_dims) noexcept {
  if (descriptor_dims < 4) return 1;
  return std::max(2, descriptor_dims / 4);
}

std::vector<double> descriptor_mixing_table(int descriptor_dims) {
  const int odd_rows = odd_descriptor_channels(descriptor_dims);
  const int even_rows = descriptor_dims - odd_rows;
  std::vector<double> table(static_cast<std::size_t>(descriptor_dims) * kRawFeatures, 0.0);
  std::uint64_t state = kMixingSeed;
  auto entry = [&](int row, int col) -> double& {
    return table[static_cast<std::size_t>(row) * kRawFeatures + col];
  };

  auto fill_block = [&](int row0, int rows, int col0, int cols) {
    for (int c = col0; c < col0 + cols; ++c) {
      double mean = 0.0;
      for (int r = row0; r < row0 + rows; ++r) {
        // Uniform in [-1, 1) from the top 53 bits.
        const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
        entry(r, c) = u;
        mean += u;
      }
      mean /= rows;
      double norm2 = 0.0;
      for (int r = row0; r < row0 + rows; ++r) {
        entry(r, c) -= mean;
        norm2 += entry(r, c) * entry(r, c);
      }
      const double norm = std::sqrt(norm2);
      for (int r = row0; r < row0 + rows; ++r) {
        entry(r, c) = norm > 0.0 ? entry(r, c) / norm : 0.0;
      }
    }
  };
  fill_block(0, even_rows, 0, kRawEvenFeatures);
  fill_block(even_rows, odd_rows, kRawEvenFeatures, kRawOddFeatures);
  return table;
}

FeatureMap handcrafted_image_features(const Image& x, const ProviderConfig& cfg) {
  cfg.validate();
  const int h = x.height();
  const int w = x.width();
  const auto n = x.pixel_count();
  if (n == 0) throw ArgumentError("empty image");

  std::vector<std::vector<double>> raw(kRawFeatures, std::vector<double>(n));
  for (int c = 0; c < 3; ++c) {
    double global = 0.0;
    for (std::size_t p = 0; p < n; ++p) global += x.pixel(p)[c];
    global /= static_cast<double>(n);

    std::vector<double> color(n), gx(n), gy(n), agx(n), agy(n);
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < w; ++xx) {
        const std::size_t p = static_cast<std::size_t>(yy) * w + xx;
        color[p] = x.at(yy, xx, c) - global;
        gx[p] = 0.5 * (static_cast<double>(x.at(yy, std::min(xx + 1, w - 1), c)) -
                       x.at(yy, std::max(xx - 1, 0), c));
        gy[p] = 0.5 * (static_cast<double>(x.at(std::min(yy + 1, h - 1), xx, c)) -
                       x.at(std::max(yy - 1, 0), xx, c));
        agx[p] = std::abs(gx[p]);
        agy[p] = std::abs(gy[p]);
      }
    }
    raw[c] = box_mean(color, h, w, cfg.patch_radius);
    raw[3 + c] = box_mean(gy, h, w, cfg.patch_radius);
    raw[6 + c] = box_mean(agx, h, w, cfg.patch_radius);
    raw[9 + c] = box_mean(agy, h, w, cfg.patch_radius);
    raw[kRawEvenFeatures + c] = box_mean(gx, h, w, cfg.patch_radius);
  }

  const auto table = descriptor_mixing_table(cfg.descriptor_dims);
  FeatureMap projected(h, w, cfg.descriptor_dims);
  for (std::size_t p = 0; p < n; ++p) {
    auto dst = projected.pixel(p);
    for (int d = 0; d < cfg.descriptor_dims; ++d) {
      double s = 0.0;
      for (int f = 0; f < kRawFeatures; ++f) {
        s += table[static_cast<std::size_t>(d) * kRawFeatures + f] * raw[f][p];
      }
      dst[d] = static_cast<float>(s);
    }
  }
  return normalize_location_wise(projected);
}

FeatureMap label_onehot_features(const LabelMap& c, const ProviderConfig& cfg) {
  cfg.validate();
  FeatureMap onehot(c.height(), c.width(), cfg.class_count, 0.0f);
  for (std::size_t p = 0; p < c.pixel_count(); ++p) {
    const int id = c.values()[p];
    if (id >= cfg.class_count) {
      throw ArgumentError("class id " + std::to_string(id) + " >= class_count " +
                          std::to_string(cfg.class_count));
    }
    onehot.pixel(p)[id] = 1.0f;
  }
  return normalize_location_wise(onehot);
}

FeatureMap bilinear_resize(const Grid<float>& lowres, int target_h, int target_w) {
  if (lowres.height() < 1 || lowres.width() < 1) throw ArgumentError("empty feature map");
  if (target_h < 1 || target_w < 1) throw ArgumentError("target size must be positive");
  FeatureMap out(target_h, target_w, lowres.channels());
  const double sy = target_h > 1 ? static_cast<double>(lowres.height() - 1) / (target_h - 1) : 0.0;
  const double sx = target_w > 1 ? static_cast<double>(lowres.width() - 1) / (target_w - 1) : 0.0;
  std::vector<double> sample(static_cast<std::size_t>(lowres.channels()));
  for (int y = 0; y < target_h; ++y) {
    for (int x = 0; x < target_w; ++x) {
      const Coord t = clamp_coord({y * sy, x * sx}, lowres.height(), lowres.width());
      bilinear_sample(lowres, t, sample);
      auto dst = out.pixel(y, x);
      for (std::size_t c = 0; c < sample.size(); ++c) dst[c] = static_cast<float>(sample[c]);
    }
  }
  return out;
}

FeatureMap concat_channels(const Grid<float>& a, const Grid<float>& b) {
  if (!a.same_extent(b)) throw ArgumentError("concat_channels: extent mismatch");
  FeatureMap out(a.height(), a.width(), a.channels() + b.channels());
  for (std::size_t p = 0; p < a.pixel_count(); ++p) {
    auto dst = out.pixel(p);
    const auto pa = a.pixel(p);
    const auto pb = b.pixel(p);
    std::copy(pa.begin(), pa.end(), dst.begin());
    std::copy(pb.begin(), pb.end(), dst.begin() + pa.size());
  }
  return out;
}

FeatureMap upsample_features(const Grid<float>& lowres, Guidance guidance, int target_h,
                             int target_w, const ProviderConfig& cfg) {
  if (target_h < lowres.height() || target_w < lowres.width()) {
    throw ArgumentError("upsample target must not be smaller than the input");
  }
  FeatureMap up = bilinear_resize(lowres, target_h, target_w);
  FeatureMap guide = std::visit(
      [&](auto g) -> FeatureMap {
        using G = decltype(g);
        if constexpr (std::is_same_v<G, std::monostate>) {
          return FeatureMap(target_h, target_w, 0);
        } else {
          if (g == nullptr) return FeatureMap(target_h, target_w, 0);
          if (!g->same_extent(target_h, target_w)) {
            throw ArgumentError("guidance extent does not match the upsample target");
          }
          if constexpr (std::is_same_v<G, const Image*>) {
            return handcrafted_image_features(*g, cfg);
          } else {
            return label_onehot_features(*g, cfg);
          }
        }
      },
      guidance);
  return normalize_location_wise(concat_channels(up, guide));
}

FeatureMap layout_image_features(const LabelMap& labels, const Image& guide,
                                 const ProviderConfig& cfg) {
  if (!labels.same_extent(guide)) {
    throw ArgumentError("label map and guide image extents differ");
  }
  return normalize_location_wise(
      concat_channels(label_onehot_features(labels, cfg), handcrafted_image_features(guide, cfg)));
}

}  // namespace hrwarp
