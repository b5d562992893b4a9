// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/png_io.hpp"

#include <gtest/gtest.h>

#include <fstream>

#include "test_support.hpp"

namespace hrwarp {
namespace {

using testing::TempDir;

TEST(LabelMapPng, AllZero) {
  TempDir dir("png");
  write_png(dir / "z.png", PngBuffer{4, 4, 1, 8, std::vector<std::uint8_t>(16, 0)});
  const LabelMap labels = load_label_map(dir / "z.png");
  ASSERT_EQ(labels.height(), 4);
  ASSERT_EQ(labels.width(), 4);
  for (auto v : labels.values()) EXPECT_EQ(v, 0);
}

TEST(LabelMapPng, CheckerboardIdsUnmodified) {
  TempDir dir("png");
  PngBuffer png{5, 3, 1, 8, {}};
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 5; ++x) png.bytes.push_back((x + y) % 2);
  }
  write_png(dir / "c.png", png);
  const LabelMap labels = load_label_map(dir / "c.png");
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 5; ++x) EXPECT_EQ(labels.id(y, x), (x + y) % 2);
  }
}

TEST(LabelMapPng, SixteenBitIsRejected) {
  TempDir dir("png");
  write_png(dir / "w.png", PngBuffer{2, 2, 1, 16, std::vector<std::uint8_t>(8, 0)});
  EXPECT_THROW(load_label_map(dir / "w.png"), FormatError);
}

TEST(LabelMapPng, MultiChannelIsRejected) {
  TempDir dir("png");
  write_png(dir / "rgb.png", PngBuffer{2, 2, 3, 8, std::vector<std::uint8_t>(12, 1)});
  EXPECT_THROW(load_label_map(dir / "rgb.png"), FormatError);
  EXPECT_THROW(load_mask(dir / "rgb.png"), FormatError);
}

TEST(LabelMapPng, GarbageIsAFormatError) {
  TempDir dir("png");
  {
    std::ofstream out(dir / "bad.png", std::ios::binary);
    out << "not a png";
  }
  EXPECT_THROW(load_label_map(dir / "bad.png"), FormatError);
}

TEST(ImagePng, RoundTripsQuantisedValues) {
  TempDir dir("png");
  Image img(3, 4);
  for (std::size_t i = 0; i < img.values().size(); ++i) {
    img.values()[i] = static_cast<float>((i * 37) % 256) / 255.0f;
  }
  save_image(img, dir / "i.png");
  const Image back = load_image(dir / "i.png");
  ASSERT_TRUE(back.same_extent(img));
  for (std::size_t i = 0; i < img.values().size(); ++i) {
    EXPECT_EQ(quantize_unit(back.values()[i]), quantize_unit(img.values()[i]));
  }
}

TEST(MaskPng, NonZeroIsEditable) {
  TempDir dir("png");
  write_png(dir / "m.png", PngBuffer{3, 1, 1, 8, {0, 1, 200}});
  const Mask m = load_mask(dir / "m.png");
  EXPECT_FALSE(m.test(0, 0));
  EXPECT_TRUE(m.test(0, 1));
  EXPECT_TRUE(m.test(0, 2));
}

}  // namespace
}  // namespace hrwarp
