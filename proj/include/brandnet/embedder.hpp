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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "brandnet/attention.hpp"
#include "brandnet/box.hpp"
#include "brandnet/image.hpp"

namespace brandnet {

inline constexpr std::size_t kDefaultEmbeddingDims = 4096;
inline constexpr int kDefaultPatchSize = 64;

// Descriptor vector. `unit_norm` is false only for the all-zero embedding
// of a patch without any gradient.
struct Embedding {
  std::vector<double> values;
  bool unit_norm = false;

  std::vector<float> as_floats() const { return {values.begin(), values.end()}; }
};

// Square grayscale patch with intensities in [0, 1].
struct RoiPatch {
  int size = 0;
  std::vector<double> pixels;

  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * size + x]; }
};

// Bilinear resample of `box` (image pixel coordinates) to size x size.
// Throws std::invalid_argument on a degenerate box.
RoiPatch crop_patch(const GrayImage& image, const Box& box, int size = kDefaultPatchSize);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dims() const = 0;
  virtual Embedding embed(const RoiPatch& patch) const = 0;
};

struct GradientHistogramConfig {
  int grid = 16;  // cells per side
  int bins = 16;  // signed orientation bins over [0, 2*pi)
};

// Orientation histograms of central-difference gradients over a grid x grid
// cell layout, magnitude-weighted with linear interpolation between
// neighbouring orientation bins, then L2-normalised as one vector. Default
// layout gives 16 * 16 * 16 = 4096 dims.
class GradientHistogramEmbedder : public Embedder {
 public:
  explicit GradientHistogramEmbedder(GradientHistogramConfig config = {});

  std::size_t dims() const override;
  Embedding embed(const RoiPatch& patch) const override;

 private:
  GradientHistogramConfig config_;
};

// Seeded Gaussian projection matrix (out x in), entries N(0, 1 / out).
class RandomProjection {
 public:
  RandomProjection(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  const std::vector<double>& matrix() const { return matrix_; }

  std::vector<double> apply(std::span<const double> x) const;

  // FNV-1a over the matrix bit patterns.
  std::uint64_t fingerprint() const;

 private:
  std::size_t in_dim_;
  std::size_t out_dim_;
  std::vector<double> matrix_;
};

// Mask-weighted pooling per region, projected and L2-normalised.
std::vector<Embedding> embed_with_attention(const RoiFeatures& feat, const SoftMaskStack& masks,
                                            const RandomProjection& projector);

// Scales to unit L2 norm; a zero vector is returned unchanged with
// unit_norm = false.
Embedding normalize_embedding(std::vector<double> values);

}  // namespace brandnet
