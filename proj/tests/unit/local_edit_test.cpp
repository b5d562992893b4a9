// Copyright 2026 The hrwarp Authors
// SPDX-License-Identifier: Apache-2.0
#include "hrwarp/local_edit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hrwarp/tensor_io.hpp"
#include "test_support.hpp"

namespace hrwarp {
namespace {

Image constant_image(int h, int w, float r, float g, float b) {
  Image img(h, w);
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    img.pixel(p)[0] = r;
    img.pixel(p)[1] = g;
    img.pixel(p)[2] = b;
  }
  return img;
}

LabelMap two_region_layout(int h, int w) {
  LabelMap c(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) c.at(y, x) = (x + y) > (h + w) / 2;
  }
  return c;
}

TEST(Composite, EmptyAndFullMasks) {
  const auto r = testing::random_image(5, 6, 1);
  const auto x0 = testing::random_image(5, 6, 2);
  EXPECT_EQ(composite_local(r, x0, Mask(5, 6, false)), x0);
  EXPECT_EQ(composite_local(r, x0, Mask(5, 6, true)), r);
}

TEST(Composite, CheckerboardInterleave) {
  const auto r = constant_image(4, 4, 1.0f, 0.0f, 0.0f);
  const auto x0 = constant_image(4, 4, 0.0f, 0.0f, 1.0f);
  Mask m(4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) m.set(y, x, (x + y) % 2 == 0);
  }
  const auto out = composite_local(r, x0, m);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      const Image& expected = (x + y) % 2 == 0 ? r : x0;
      for (int c = 0; c < 3; ++c) EXPECT_EQ(out.at(y, x, c), expected.at(y, x, c));
    }
  }
}

TEST(Augment, ZeroShiftIsIdentity) {
  const auto img = testing::random_image(6, 7, 3);
  EXPECT_EQ(apply_augmentation(img, AugmentRecord{0, 0, false}), img);
}

TEST(Augment, FlipTwiceRestores) {
  const auto img = testing::random_image(6, 7, 4);
  const AugmentRecord flip{0, 0, true};
  EXPECT_EQ(apply_augmentation(apply_augmentation(img, flip), flip), img);
}

TEST(Augment, KnownShiftMatchesIndexShift) {
  const auto img = testing::random_image(10, 12, 5);
  const auto out = apply_augmentation(img, AugmentRecord{2, 3, false});
  for (int y = 2; y < 10; ++y) {
    for (int x = 3; x < 12; ++x) {
      for (int c = 0; c < 3; ++c) EXPECT_EQ(out.at(y, x, c), img.at(y - 2, x - 3, c));
    }
  }
}

TEST(Augment, PairIsSeededAndBounded) {
  const auto img = testing::random_image(16, 20, 6);
  const auto labels = two_region_layout(16, 20);
  bool saw_flip = false;
  bool saw_plain = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto a = augment_pair(img, labels, seed);
    const auto b = augment_pair(img, labels, seed);
    EXPECT_EQ(a.image, b.image);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_LE(std::abs(a.transform.dy), 4);
    EXPECT_LE(std::abs(a.transform.dx), 5);
    EXPECT_EQ(a.image, apply_augmentation(img, a.transform));
    EXPECT_EQ(a.labels, apply_augmentation(labels, a.transform));
    (a.transform.flip ? saw_flip : saw_plain) = true;
  }
  EXPECT_TRUE(saw_flip);
  EXPECT_TRUE(saw_plain);
}

TEST(WarpFull, EmptyMaskReturnsSource) {
  const auto x0 = testing::random_image(12, 12, 7);
  const auto c0 = two_region_layout(12, 12);
  const auto res = warp_full(x0, c0, c0, Mask(12, 12, false), PipelineConfig{});
  EXPECT_EQ(res.composited, x0);
  EXPECT_GT(res.evaluations, 0u);
}

// The source pair is an augmented copy of the target pair; features are known
// per-pixel-distinct descriptors carried along by the same translation.
TEST(WarpFull, RecoversAugmentedTranslation) {
  const int n = 32;
  const auto x1 = testing::random_image(n, n, 8);
  const auto c1 = two_region_layout(n, n);
  std::uint64_t seed = 0;
  AugmentedPair aug;
  do {
    aug = augment_pair(x1, c1, seed++);
  } while (aug.transform.flip || (aug.transform.dy == 0 && aug.transform.dx == 0));
  const int dy = aug.transform.dy;
  const int dx = aug.transform.dx;

  const auto f1 = testing::random_unit_features(n, n, 32, 9);
  PipelineConfig cfg;
  cfg.target_features = f1;
  cfg.source_features = apply_augmentation(f1, aug.transform);

  // Interior of the target whose preimage lies well inside the source.
  Mask m(n, n);
  for (int y = 4; y < n - 4; ++y) {
    for (int x = 4; x < n - 4; ++x) {
      const int sy = y + dy;
      const int sx = x + dx;
      m.set(y, x, sy >= 4 && sy < n - 4 && sx >= 4 && sx < n - 4);
    }
  }
  ASSERT_GT(m.count(), 50u);
  const auto res = warp_full(aug.image, aug.labels, c1, m, cfg);
  const auto metrics = eval_metrics(res.composited, x1, &m);
  EXPECT_LT(metrics.l1, 1e-3) << "shift (" << dy << "," << dx << ")";
}

TEST(WarpFull, ReconstructionKeysAvoidTheMask) {
  const int n = 24;
  const auto x0 = testing::random_image(n, n, 10);
  const auto c0 = two_region_layout(n, n);
  Mask m(n, n);
  for (int y = 6; y < 15; ++y) {
    for (int x = 8; x < 18; ++x) m.set(y, x);
  }
  PipelineConfig cfg;
  cfg.reconstruction_mode = true;
  const auto res = warp_full(x0, c0, c0, m, cfg);
  std::size_t touching = 0;
  for (const Coord& t : res.warp.key_coords) {
    const Footprint fp = bilinear_footprint(t, n, n);
    for (int i = 0; i < fp.size; ++i) {
      if (m.test(fp.rows[i], fp.cols[i])) {
        ++touching;
        break;
      }
    }
  }
  EXPECT_EQ(touching, 0u);
}

TEST(WarpFull, DeterministicAcrossThreads) {
  const auto x0 = testing::random_image(20, 20, 11);
  const auto c0 = two_region_layout(20, 20);
  auto c1 = c0;
  for (int y = 5; y < 10; ++y) {
    for (int x = 2; x < 8; ++x) c1.at(y, x) = 1;
  }
  Mask m(20, 20);
  for (int y = 4; y < 11; ++y) {
    for (int x = 1; x < 9; ++x) m.set(y, x);
  }
  PipelineConfig cfg;
  const auto a = warp_full(x0, c0, c1, m, cfg);
  cfg.attention.threads = 6;
  const auto b = warp_full(x0, c0, c1, m, cfg);
  EXPECT_EQ(a.composited, b.composited);
  EXPECT_EQ(a.warp.key_coords, b.warp.key_coords);
}

TEST(Metrics, IdenticalImages) {
  const auto a = testing::random_image(4, 4, 12);
  const auto m = eval_metrics(a, a);
  EXPECT_EQ(m.l1, 0.0);
  EXPECT_EQ(m.psnr, std::numeric_limits<double>::infinity());
}

TEST(Metrics, ConstantOffset) {
  const auto a = constant_image(3, 3, 0.2f, 0.3f, 0.4f);
  const auto b = constant_image(3, 3, 0.3f, 0.4f, 0.5f);
  const auto m = eval_metrics(a, b);
  EXPECT_NEAR(m.l1, 0.1, 1e-6);
  EXPECT_NEAR(m.psnr, 20.0, 1e-4);
}

TEST(Metrics, MatchesTwoPassOracle) {
  const auto a = testing::random_image(7, 9, 13);
  const auto b = testing::random_image(7, 9, 14);
  Mask region(7, 9);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 9; ++x) region.set(y, x, (y * 3 + x) % 4 != 0);
  }
  // Pass 1: collect differences. Pass 2: reduce.
  std::vector<double> diffs;
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 9; ++x) {
      if (!region.test(y, x)) continue;
      for (int c = 0; c < 3; ++c) diffs.push_back(double(a.at(y, x, c)) - b.at(y, x, c));
    }
  }
  double l1 = 0.0;
  double mse = 0.0;
  for (double d : diffs) {
    l1 += std::abs(d) / diffs.size();
    mse += d * d / diffs.size();
  }
  const auto m = eval_metrics(a, b, &region);
  EXPECT_NEAR(m.l1, l1, 1e-12);
  EXPECT_NEAR(m.psnr, -10.0 * std::log10(mse), 1e-9);
  EXPECT_EQ(m.samples, diffs.size() / 3);
}

TEST(Metrics, EmptyRegionIsRejected) {
  const auto a = testing::random_image(3, 3, 15);
  const Mask none(3, 3);
  EXPECT_THROW(eval_metrics(a, a, &none), ArgumentError);
}

}  // namespace
}  // namespace hrwarp
