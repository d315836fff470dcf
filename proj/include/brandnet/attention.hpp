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
#include <vector>

#include "brandnet/box.hpp"
#include "brandnet/image.hpp"

namespace brandnet {

inline constexpr std::size_t kDefaultMaskSize = 28;

// RoI feature maps of shape (regions, channels, size, size), row-major.
class RoiFeatures {
 public:
  RoiFeatures(std::size_t regions, std::size_t channels, std::size_t size);
  RoiFeatures(std::size_t regions, std::size_t channels, std::size_t size, std::vector<double> values);

  std::size_t regions() const { return regions_; }
  std::size_t channels() const { return channels_; }
  std::size_t size() const { return size_; }

  double& at(std::size_t r, std::size_t c, std::size_t i, std::size_t j) {
    return values_[((r * channels_ + c) * size_ + i) * size_ + j];
  }
  double at(std::size_t r, std::size_t c, std::size_t i, std::size_t j) const {
    return values_[((r * channels_ + c) * size_ + i) * size_ + j];
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t regions_;
  std::size_t channels_;
  std::size_t size_;
  std::vector<double> values_;
};

// Class-agnostic soft masks of shape (regions, 1, size, size), entries in
// [0, 1]. Masks are consumed as probabilities; no squashing happens here.
class SoftMaskStack {
 public:
  // Throws std::invalid_argument when classes != 1, the value count is
  // wrong, or any entry falls outside [0, 1].
  SoftMaskStack(std::size_t regions, std::size_t classes, std::size_t size, std::vector<double> values);
  SoftMaskStack(std::size_t regions, std::size_t size, double fill);

  std::size_t regions() const { return regions_; }
  std::size_t size() const { return size_; }

  double at(std::size_t r, std::size_t i, std::size_t j) const { return values_[(r * size_ + i) * size_ + j]; }
  void set(std::size_t r, std::size_t i, std::size_t j, double v);
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t regions_;
  std::size_t size_;
  std::vector<double> values_;
};

// out[r, c, i, j] = feat[r, c, i, j] * mask[r, i, j]
RoiFeatures gate_features(const RoiFeatures& feat, const SoftMaskStack& masks);

// Mask-weighted spatial average per region and channel. Throws
// std::invalid_argument naming the region when a mask sums to zero.
std::vector<std::vector<double>> pool_features(const RoiFeatures& feat, const SoftMaskStack& masks);

// Bilinearly resamples one region's mask into `box` on an image-sized
// canvas; pixels whose centers fall outside the box stay 0.
GrayImage heatmap_overlay(const SoftMaskStack& masks, std::size_t region, const Box& box, int image_width,
                          int image_height);

}  // namespace brandnet
