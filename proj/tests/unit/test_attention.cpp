// Copyright 2026 The Brandnet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "brandnet/attention.hpp"

using namespace brandnet;

namespace {

RoiFeatures random_features(std::size_t R, std::size_t C, std::size_t M, std::uint64_t seed, double lo = -1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, 1);
  RoiFeatures f(R, C, M);
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) f.at(r, c, i, j) = u(rng);
  return f;
}

}  // namespace

TEST(SoftMaskStack, ValidatesShapeAndRange) {
  EXPECT_THROW(SoftMaskStack(1, 2, 2, std::vector<double>(8, 0.5)), std::invalid_argument);
  EXPECT_THROW(SoftMaskStack(1, 1, 2, std::vector<double>(3, 0.5)), std::invalid_argument);
  EXPECT_THROW(SoftMaskStack(1, 1, 2, {0.5, 1.2, 0, 0}), std::invalid_argument);
  EXPECT_THROW(SoftMaskStack(1, 1, 2, {0.5, -0.1, 0, 0}), std::invalid_argument);
  EXPECT_EQ(SoftMaskStack(2, kDefaultMaskSize, 1.0).size(), 28u);
}

TEST(Gate, IdentityAnnihilationAndHalfMask) {
  const RoiFeatures f = random_features(2, 3, 4, 1);
  EXPECT_EQ(gate_features(f, SoftMaskStack(2, 4, 1.0)).values(), f.values());
  const RoiFeatures zero = gate_features(f, SoftMaskStack(2, 4, 0.0));
  for (double v : zero.values()) EXPECT_EQ(v, 0.0);
  SoftMaskStack left(2, 4, 0.0);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 2; ++j) left.set(r, i, j, 1.0);
  const RoiFeatures g = gate_features(f, left);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(g.at(r, c, i, j), j < 2 ? f.at(r, c, i, j) : 0.0);
}

TEST(Gate, ShapeMismatchThrows) {
  EXPECT_THROW(gate_features(random_features(2, 1, 4, 1), SoftMaskStack(1, 4, 1.0)), std::invalid_argument);
  EXPECT_THROW(gate_features(random_features(1, 1, 4, 1), SoftMaskStack(1, 3, 1.0)), std::invalid_argument);
}

TEST(Gate, MonotoneForNonNegativeFeatures) {
  const RoiFeatures f = random_features(1, 2, 5, 3, 0.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> lo(25), hi(25);
  for (std::size_t i = 0; i < 25; ++i) {
    lo[i] = u(rng) * 0.5;
    hi[i] = lo[i] + u(rng) * 0.5;
  }
  const RoiFeatures a = gate_features(f, SoftMaskStack(1, 1, 5, lo)), b = gate_features(f, SoftMaskStack(1, 1, 5, hi));
  for (std::size_t i = 0; i < a.values().size(); ++i) EXPECT_LE(std::abs(a.values()[i]), std::abs(b.values()[i]));
}

TEST(Pool, UniformMaskIsMean) {
  const RoiFeatures f = random_features(2, 3, 28, 5);
  const auto p = pool_features(f, SoftMaskStack(2, 28, 0.6));
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      double mean = 0;
      for (std::size_t i = 0; i < 28; ++i)
        for (std::size_t j = 0; j < 28; ++j) mean += f.at(r, c, i, j);
      EXPECT_NEAR(p[r][c], mean / 784.0, 1e-12);
    }
}

TEST(Pool, PointMaskPicksPixel) {
  const RoiFeatures f = random_features(1, 4, 6, 6);
  SoftMaskStack m(1, 6, 0.0);
  m.set(0, 2, 5, 1.0);
  const auto p = pool_features(f, m);
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(p[0][c], f.at(0, c, 2, 5));
}

TEST(Pool, RandomFourByFourMatchesLoop) {
  const RoiFeatures f = random_features(3, 2, 4, 7);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> mv(3 * 16);
  for (double& v : mv) v = u(rng);
  const SoftMaskStack m(3, 1, 4, mv);
  const auto p = pool_features(f, m);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      double num = 0, den = 0;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
          num += m.at(r, i, j) * f.at(r, c, i, j);
          den += m.at(r, i, j);
        }
      EXPECT_NEAR(p[r][c], num / den, 1e-12);
    }
}

TEST(Pool, ScaleInvariant) {
  const RoiFeatures f = random_features(2, 3, 8, 9);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.01, 0.3);
  std::vector<double> a(2 * 64), b(2 * 64);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = u(rng);
    b[i] = 3.0 * a[i];
  }
  const auto pa = pool_features(f, SoftMaskStack(2, 1, 8, a)), pb = pool_features(f, SoftMaskStack(2, 1, 8, b));
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(pa[r][c], pb[r][c], 1e-12);
}

TEST(Pool, ZeroMaskNamesRegion) {
  SoftMaskStack m(3, 4, 1.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m.set(2, i, j, 0.0);
  try {
    pool_features(random_features(3, 1, 4, 1), m);
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("region 2"), std::string::npos) << e.what();
  }
}

TEST(Heatmap, ConstantMaskGivesConstantRegion) {
  const GrayImage h = heatmap_overlay(SoftMaskStack(1, 7, 0.4), 0, {10, 20, 30, 35}, 64, 48);
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x) {
      const bool inside = x >= 10 && x < 30 && y >= 20 && y < 35;
      EXPECT_NEAR(h.at(x, y), inside ? 0.4 : 0.0, 1e-15) << x << "," << y;
    }
}

TEST(Heatmap, SameSizeBoxIsExactCopy) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> mv(28 * 28);
  for (double& v : mv) v = u(rng);
  const SoftMaskStack m(1, 1, 28, mv);
  const GrayImage h = heatmap_overlay(m, 0, {5, 3, 33, 31}, 40, 40);
  for (std::size_t i = 0; i < 28; ++i)
    for (std::size_t j = 0; j < 28; ++j) EXPECT_NEAR(h.at(5 + static_cast<int>(j), 3 + static_cast<int>(i)), m.at(0, i, j), 1e-15);
}

TEST(Heatmap, TwoByTwoIntoFourByFour) {
  // Mask [[0, 1], [1, 0]] upsampled by 2 with half-pixel alignment: output
  // pixel centers map to mask coordinates -0.25, 0.25, 0.75, 1.25, clamped.
  const SoftMaskStack m(1, 1, 2, {0.0, 1.0, 1.0, 0.0});
  const GrayImage h = heatmap_overlay(m, 0, {0, 0, 4, 4}, 4, 4);
  EXPECT_NEAR(h.at(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(h.at(3, 0), 1.0, 1e-15);
  EXPECT_NEAR(h.at(0, 3), 1.0, 1e-15);
  EXPECT_NEAR(h.at(3, 3), 0.0, 1e-15);
  EXPECT_NEAR(h.at(1, 1), 0.375, 1e-15);  // (0.25,0.25): 0.75*0.25*2 = 0.375
  EXPECT_NEAR(h.at(1, 0), 0.25, 1e-15);   // y clamped to 0, x = 0.25
}

TEST(Heatmap, DegenerateBoxThrows) {
  EXPECT_THROW(heatmap_overlay(SoftMaskStack(1, 4, 1.0), 0, {5, 5, 5, 9}, 10, 10), std::invalid_argument);
}
