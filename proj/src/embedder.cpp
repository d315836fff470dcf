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

#include "brandnet/embedder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace brandnet {

RoiPatch crop_patch(const GrayImage& image, const Box& box, int size) {
  if (size <= 0) throw std::invalid_argument("crop_patch: patch size must be positive");
  if (!(box.width() > 0.0) || !(box.height() > 0.0)) throw std::invalid_argument("crop_patch: degenerate box");
  if (image.width <= 0 || image.height <= 0) throw std::invalid_argument("crop_patch: empty image");
  RoiPatch patch{size, std::vector<double>(static_cast<std::size_t>(size) * size)};
  const double sx = box.width() / size;
  const double sy = box.height() / size;
  // Samples stay on pixel centers inside the box so nothing bleeds in from
  // the surroundings.
  const double x_lo = box.x1, x_hi = std::max(box.x1, box.x2 - 1.0);
  const double y_lo = box.y1, y_hi = std::max(box.y1, box.y2 - 1.0);
  for (int v = 0; v < size; ++v) {
    const double y = std::clamp(box.y1 + (v + 0.5) * sy - 0.5, y_lo, y_hi);
    for (int u = 0; u < size; ++u) {
      const double x = std::clamp(box.x1 + (u + 0.5) * sx - 0.5, x_lo, x_hi);
      patch.pixels[static_cast<std::size_t>(v) * size + u] = image.sample(x, y);
    }
  }
  return patch;
}

Embedding normalize_embedding(std::vector<double> values) {
  double norm2 = 0.0;
  for (double v : values) norm2 += v * v;
  if (!(norm2 > 0.0)) return {std::move(values), false};
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : values) v *= inv;
  return {std::move(values), true};
}

GradientHistogramEmbedder::GradientHistogramEmbedder(GradientHistogramConfig config) : config_(config) {
  if (config_.grid <= 0 || config_.bins <= 0) {
    throw std::invalid_argument("GradientHistogramEmbedder: grid and bins must be positive");
  }
}

std::size_t GradientHistogramEmbedder::dims() const {
  return static_cast<std::size_t>(config_.grid) * config_.grid * config_.bins;
}

Embedding GradientHistogramEmbedder::embed(const RoiPatch& patch) const {
  const int n = patch.size;
  if (n < config_.grid || patch.pixels.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("embed: patch must be square and at least grid pixels wide");
  }
  const int grid = config_.grid;
  const int bins = config_.bins;
  std::vector<double> hist(dims(), 0.0);
  const double bin_scale = bins / (2.0 * std::numbers::pi);

  for (int y = 0; y < n; ++y) {
    const int cy = y * grid / n;
    const int ym = std::max(y - 1, 0);
    const int yp = std::min(y + 1, n - 1);
    for (int x = 0; x < n; ++x) {
      const int xm = std::max(x - 1, 0);
      const int xp = std::min(x + 1, n - 1);
      const double gx = patch.at(xp, y) - patch.at(xm, y);
      const double gy = patch.at(x, yp) - patch.at(x, ym);
      const double mag = std::sqrt(gx * gx + gy * gy);
      if (mag == 0.0) continue;
      double angle = std::atan2(gy, gx);
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      double pos = angle * bin_scale - 0.5;
      if (pos < 0.0) pos += bins;
      const int b0 = static_cast<int>(std::floor(pos)) % bins;
      const int b1 = (b0 + 1) % bins;
      const double frac = pos - std::floor(pos);
      const int cx = x * grid / n;
      const std::size_t base = (static_cast<std::size_t>(cy) * grid + cx) * bins;
      hist[base + b0] += mag * (1.0 - frac);
      hist[base + b1] += mag * frac;
    }
  }
  return normalize_embedding(std::move(hist));
}

RandomProjection::RandomProjection(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed)
    : in_dim_(in_dim), out_dim_(out_dim), matrix_(in_dim * out_dim) {
  if (in_dim == 0 || out_dim == 0) throw std::invalid_argument("RandomProjection: dims must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(out_dim)));
  for (double& v : matrix_) v = gauss(rng);
}

std::vector<double> RandomProjection::apply(std::span<const double> x) const {
  if (x.size() != in_dim_) throw std::invalid_argument("RandomProjection: input dimension mismatch");
  std::vector<double> out(out_dim_, 0.0);
  for (std::size_t o = 0; o < out_dim_; ++o) {
    const double* row = matrix_.data() + o * in_dim_;
    double acc = 0.0;
    for (std::size_t i = 0; i < in_dim_; ++i) acc += row[i] * x[i];
    out[o] = acc;
  }
  return out;
}

std::uint64_t RandomProjection::fingerprint() const {
  std::uint64_t h = 14695981039346656037ull;
  for (double v : matrix_) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xFF;
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::vector<Embedding> embed_with_attention(const RoiFeatures& feat, const SoftMaskStack& masks,
                                            const RandomProjection& projector) {
  const auto pooled = pool_features(feat, masks);
  std::vector<Embedding> out;
  out.reserve(pooled.size());
  for (const auto& v : pooled) out.push_back(normalize_embedding(projector.apply(v)));
  return out;
}

}  // namespace brandnet
