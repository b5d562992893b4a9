// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/tensor_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>

#include "test_support.hpp"

namespace hrwarp {
namespace {

using testing::TempDir;

FeatureMap scalar_map(int h, int w, std::initializer_list<float> values) {
  FeatureMap m(h, w, 1);
  std::copy(values.begin(), values.end(), m.values().begin());
  return m;
}

std::vector<std::byte> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto bytes = std::as_bytes(std::span(raw));
  return {bytes.begin(), bytes.end()};
}

TEST(TensorFormat, SaveLoadIsBitIdentical) {
  TempDir dir("tensor");
  std::mt19937 rng(7);
  std::uniform_real_distribution<float> dist(-1e3f, 1e3f);
  FeatureMap m(5, 7, 3);
  for (auto& v : m.values()) v = dist(rng);
  m.at(0, 0, 0) = -0.0f;
  m.at(4, 6, 2) = std::numeric_limits<float>::denorm_min();

  save_tensor(m, dir / "m.hrt");
  const FeatureMap back = load_tensor(dir / "m.hrt");
  ASSERT_EQ(back.height(), 5);
  ASSERT_EQ(back.width(), 7);
  ASSERT_EQ(back.channels(), 3);
  EXPECT_EQ(std::memcmp(back.values().data(), m.values().data(), m.values().size_bytes()), 0);
}

TEST(TensorFormat, GoldenHeaderBytes) {
  const FeatureMap m = scalar_map(2, 1, {1.0f, -2.0f});
  const auto bytes = encode_tensor(m);
  const std::vector<unsigned> expected = {
      'H', 'R', 'T', '1',           // magic
      0x02, 0x00, 0x00, 0x00,       // H
      0x01, 0x00, 0x00, 0x00,       // W
      0x01, 0x00, 0x00, 0x00,       // C
      0x00, 0x00, 0x80, 0x3f,       // 1.0f
      0x00, 0x00, 0x00, 0xc0,       // -2.0f
  };
  ASSERT_EQ(bytes.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(static_cast<unsigned>(bytes[i]), expected[i]) << "byte " << i;
  }
}

TEST(TensorFormat, RejectsBadMagic) {
  auto bytes = encode_tensor(scalar_map(1, 1, {0.5f}));
  bytes[3] = static_cast<std::byte>('0');
  try {
    decode_tensor(bytes);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("bad magic"), std::string::npos);
    EXPECT_EQ(e.offset(), 3u);
  }
}

TEST(TensorFormat, RejectsTruncatedPayload) {
  auto bytes = encode_tensor(scalar_map(2, 2, {1, 2, 3, 4}));
  bytes.resize(bytes.size() - 1);
  try {
    decode_tensor(bytes);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
    EXPECT_EQ(e.offset(), bytes.size());
  }
  bytes.resize(10);
  EXPECT_THROW(decode_tensor(bytes), FormatError);
}

TEST(TensorFormat, RejectsZeroDimension) {
  auto bytes = encode_tensor(scalar_map(1, 1, {0.5f}));
  bytes[8] = std::byte{0};  // W = 0
  try {
    decode_tensor(bytes);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 8u);
  }
}

TEST(TensorFormat, FileOnDiskMatchesEncoding) {
  TempDir dir("tensor");
  const FeatureMap m = scalar_map(2, 3, {1, 2, 3, 4, 5, 6});
  save_tensor(m, dir / "a.hrt");
  EXPECT_EQ(read_file(dir / "a.hrt"), encode_tensor(m));
}

TEST(Bilinear, IntegerCoordinateReturnsStoredVector) {
  const auto m = testing::random_unit_features(3, 4, 5, 11);
  const auto v = bilinear_sample(m, {1.0, 2.0});
  for (int c = 0; c < 5; ++c) EXPECT_EQ(v[c], static_cast<double>(m.at(1, 2, c)));
}

TEST(Bilinear, CentreOfTwoByTwoIsTheMean) {
  const auto m = scalar_map(2, 2, {0, 1, 2, 3});
  EXPECT_DOUBLE_EQ(bilinear_sample(m, {0.5, 0.5})[0], 1.5);
}

TEST(Bilinear, RowLerpMatchesHandEvaluation) {
  const auto m = scalar_map(1, 4, {0, 3, 6, 9});
  // Two-tap lerp between columns 1 and 2 at fraction 0.25.
  const double oracle = 3.0 + 0.25 * (6.0 - 3.0);
  EXPECT_DOUBLE_EQ(oracle, 3.75);
  EXPECT_DOUBLE_EQ(bilinear_sample(m, {0.0, 1.25})[0], oracle);
}

TEST(Bilinear, NonFiniteCoordinateIsRejected) {
  const auto m = scalar_map(2, 2, {0, 1, 2, 3});
  EXPECT_THROW(bilinear_sample(m, {std::nan(""), 0.0}), ArgumentError);
  EXPECT_THROW(bilinear_sample(m, {0.0, std::numeric_limits<double>::infinity()}), ArgumentError);
}

TEST(Bilinear, IsLinearInTheMapValues) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testing::random_unit_features(4, 5, 3, 100 + trial);
    const auto b = testing::random_unit_features(4, 5, 3, 200 + trial);
    const double alpha = unit(rng) * 4 - 2;
    const double beta = unit(rng) * 4 - 2;
    FeatureMap mix(4, 5, 3);
    for (std::size_t i = 0; i < mix.values().size(); ++i) {
      mix.values()[i] = static_cast<float>(alpha * a.values()[i] + beta * b.values()[i]);
    }
    const Coord t{unit(rng) * 3, unit(rng) * 4};
    const auto sa = bilinear_sample(a, t);
    const auto sb = bilinear_sample(b, t);
    const auto sm = bilinear_sample(mix, t);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(sm[c], alpha * sa[c] + beta * sb[c], 1e-6);
  }
}

TEST(Bilinear, FootprintSizes) {
  EXPECT_EQ(bilinear_footprint({1.0, 1.0}, 3, 3).size, 1);
  EXPECT_EQ(bilinear_footprint({1.0, 1.5}, 3, 3).size, 2);
  EXPECT_EQ(bilinear_footprint({0.5, 1.5}, 3, 3).size, 4);
  EXPECT_EQ(bilinear_footprint({2.0, 2.0}, 3, 3).size, 1);
}

TEST(Normalize, ConstantVectorBecomesZero) {
  FeatureMap m(1, 1, 3, 2.0f);
  const auto n = normalize_location_wise(m);
  for (float v : n.values()) EXPECT_EQ(v, 0.0f);
}

TEST(Normalize, ZeroMeanPairIsScaled) {
  FeatureMap m(1, 1, 2);
  m.at(0, 0, 0) = 1.0f;
  m.at(0, 0, 1) = -1.0f;
  const auto n = normalize_location_wise(m);
  EXPECT_NEAR(n.at(0, 0, 0), 1.0 / std::sqrt(2.0), 1e-7);
  EXPECT_NEAR(n.at(0, 0, 1), -1.0 / std::sqrt(2.0), 1e-7);
}

TEST(Normalize, MeanIsRemovedBeforeScaling) {
  FeatureMap m(1, 1, 2);
  m.at(0, 0, 0) = 3.0f;
  m.at(0, 0, 1) = 1.0f;
  // By hand: mean 2 -> (1, -1) -> norm sqrt(2).
  const double e0 = (3.0 - 2.0) / std::sqrt(2.0);
  const double e1 = (1.0 - 2.0) / std::sqrt(2.0);
  const auto n = normalize_location_wise(m);
  EXPECT_NEAR(n.at(0, 0, 0), e0, 1e-7);
  EXPECT_NEAR(n.at(0, 0, 1), e1, 1e-7);
  EXPECT_NEAR(std::hypot(n.at(0, 0, 0), n.at(0, 0, 1)), 1.0, 1e-6);
}

TEST(Normalize, InvariantAndIdempotentOnRandomMaps) {
  std::mt19937 rng(5);
  std::normal_distribution<float> normal(0.5f, 3.0f);
  FeatureMap raw(6, 6, 9);
  for (auto& v : raw.values()) v = normal(rng);
  const auto once = normalize_location_wise(raw);
  const auto twice = normalize_location_wise(once);
  for (std::size_t p = 0; p < once.pixel_count(); ++p) {
    double mean = 0.0;
    double norm = 0.0;
    for (float v : once.pixel(p)) {
      mean += v;
      norm += double(v) * v;
    }
    EXPECT_LT(std::abs(mean / 9.0), 1e-6);
    EXPECT_NEAR(std::sqrt(norm), 1.0, 1e-5);
    for (int c = 0; c < 9; ++c) EXPECT_NEAR(twice.pixel(p)[c], once.pixel(p)[c], 1e-6);
  }
}

}  // namespace
}  // namespace hrwarp
