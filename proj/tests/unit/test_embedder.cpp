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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "brandnet/attention.hpp"
#include "brandnet/embedder.hpp"
#include "brandnet/error.hpp"
#include "brandnet/image.hpp"

namespace fs = std::filesystem;
using namespace brandnet;

namespace {

RoiPatch textured_patch(int size, std::uint64_t seed, double scale = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, scale);
  RoiPatch p{size, std::vector<double>(static_cast<std::size_t>(size) * size)};
  for (double& v : p.pixels) v = u(rng);
  return p;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST(GradientHistogram, DimsAndUnitNorm) {
  const GradientHistogramEmbedder e;
  EXPECT_EQ(e.dims(), kDefaultEmbeddingDims);
  const Embedding emb = e.embed(textured_patch(64, 1));
  ASSERT_EQ(emb.values.size(), 4096u);
  EXPECT_TRUE(emb.unit_norm);
  EXPECT_NEAR(norm(emb.values), 1.0, 1e-9);
}

TEST(GradientHistogram, Deterministic) {
  const GradientHistogramEmbedder e;
  EXPECT_EQ(e.embed(textured_patch(64, 2)).values, e.embed(textured_patch(64, 2)).values);
}

TEST(GradientHistogram, BrightnessScalingInvariant) {
  const GradientHistogramEmbedder e;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RoiPatch p = textured_patch(64, seed);
    RoiPatch q = p;
    for (double& v : q.pixels) v *= 2.0;
    const auto a = e.embed(p).values, b = e.embed(q).values;
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(GradientHistogram, ConstantPatchIsFlaggedZero) {
  const GradientHistogramEmbedder e;
  RoiPatch p{64, std::vector<double>(64 * 64, 0.7)};
  const Embedding emb = e.embed(p);
  EXPECT_FALSE(emb.unit_norm);
  EXPECT_EQ(emb.values.size(), 4096u);
  for (double v : emb.values) EXPECT_EQ(v, 0.0);
}

TEST(GradientHistogram, OrientationSeparatesEdges) {
  RoiPatch vertical{32, std::vector<double>(32 * 32)}, horizontal = vertical;
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) {
      vertical.pixels[y * 32 + x] = x < 16 ? 0.0 : 1.0;
      horizontal.pixels[y * 32 + x] = y < 16 ? 0.0 : 1.0;
    }
  const GradientHistogramEmbedder e({4, 8});
  const auto a = e.embed(vertical).values, b = e.embed(horizontal).values;
  double dot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  EXPECT_NEAR(dot, 0.0, 1e-12);
}

TEST(CropPatch, IdentityOnAlignedBox) {
  GrayImage img(40, 30);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 40; ++x) img.at(x, y) = (x * 7 + y * 3) % 11 / 10.0;
  const RoiPatch p = crop_patch(img, {5, 6, 21, 22}, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) EXPECT_NEAR(p.at(x, y), img.at(5 + x, 6 + y), 1e-12);
  EXPECT_THROW(crop_patch(img, {5, 5, 5, 9}, 16), std::invalid_argument);
}

TEST(CropPatch, StaysInsideBox) {
  // Background of 1, box content of 0: nothing outside the box may leak in.
  GrayImage img(50, 50, 1.0);
  for (int y = 10; y < 20; ++y)
    for (int x = 10; x < 25; ++x) img.at(x, y) = 0.0;
  const RoiPatch p = crop_patch(img, {10, 10, 25, 20}, 64);
  for (double v : p.pixels) EXPECT_EQ(v, 0.0);
}

TEST(Pnm, PgmRoundTripAndPpmLuma) {
  GrayImage img(5, 3);
  for (int i = 0; i < 15; ++i) img.pixels[i] = i / 14.0;
  const fs::path p = fs::temp_directory_path() / "brandnet_ut.pgm";
  write_pgm(img, p);
  const GrayImage back = read_pnm(p);
  ASSERT_EQ(back.width, 5);
  for (int i = 0; i < 15; ++i) EXPECT_NEAR(back.pixels[i], img.pixels[i], 0.5 / 255 + 1e-12);
  fs::remove(p);

  const fs::path ppm = fs::temp_directory_path() / "brandnet_ut.ppm";
  {
    std::ofstream f(ppm, std::ios::binary);
    f << "P6\n# comment\n1 1\n255\n";
    f.put(static_cast<char>(255)).put(0).put(0);
  }
  EXPECT_NEAR(read_pnm(ppm).pixels[0], 0.299, 1e-9);
  fs::remove(ppm);
  EXPECT_THROW(read_pnm("/nonexistent.pgm"), DataError);
}

TEST(RandomProjection, SeededAndStable) {
  const RandomProjection a(10, 4096, 5), b(10, 4096, 5), c(10, 4096, 6);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), c.fingerprint());
  const std::vector<double> x{1, 0, 0, 0, 0, 0, 0, 0, 0, 2};
  const auto y = a.apply(x);
  for (std::size_t o = 0; o < 4096; o += 97) EXPECT_DOUBLE_EQ(y[o], a.matrix()[o * 10] + 2 * a.matrix()[o * 10 + 9]);
}

TEST(EmbedWithAttention, UniformMaskEqualsProjectedMean) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::size_t R = 2, C = 6, M = 5;
  RoiFeatures f(R, C, M);
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) f.at(r, c, i, j) = u(rng);
  const RandomProjection proj(C, 64, 1);
  const auto embs = embed_with_attention(f, SoftMaskStack(R, M, 0.3), proj);
  ASSERT_EQ(embs.size(), R);
  for (std::size_t r = 0; r < R; ++r) {
    std::vector<double> mean(C, 0.0);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) mean[c] += f.at(r, c, i, j);
      mean[c] /= M * M;
    }
    // Matrix multiply oracle, then normalise.
    std::vector<double> y(64, 0.0);
    for (std::size_t o = 0; o < 64; ++o)
      for (std::size_t c = 0; c < C; ++c) y[o] += proj.matrix()[o * C + c] * mean[c];
    const double n = norm(y);
    EXPECT_TRUE(embs[r].unit_norm);
    for (std::size_t o = 0; o < 64; ++o) EXPECT_NEAR(embs[r].values[o], y[o] / n, 1e-12);
  }
  SoftMaskStack zero(R, M, 1.0);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) zero.set(1, i, j, 0.0);
  EXPECT_THROW(embed_with_attention(f, zero, proj), std::invalid_argument);
}
