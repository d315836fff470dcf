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

#include "brandnet/attention.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace brandnet {

RoiFeatures::RoiFeatures(std::size_t regions, std::size_t channels, std::size_t size)
    : RoiFeatures(regions, channels, size, std::vector<double>(regions * channels * size * size, 0.0)) {}

RoiFeatures::RoiFeatures(std::size_t regions, std::size_t channels, std::size_t size, std::vector<double> values)
    : regions_(regions), channels_(channels), size_(size), values_(std::move(values)) {
  if (size == 0 || channels == 0) throw std::invalid_argument("RoiFeatures: channels and size must be positive");
  if (values_.size() != regions * channels * size * size) {
    throw std::invalid_argument("RoiFeatures: value count does not match shape");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("RoiFeatures: non-finite value");
  }
}

SoftMaskStack::SoftMaskStack(std::size_t regions, std::size_t classes, std::size_t size, std::vector<double> values)
    : regions_(regions), size_(size), values_(std::move(values)) {
  if (classes != 1) {
    throw std::invalid_argument("SoftMaskStack: masks are class-agnostic, expected 1 class, got " +
                                std::to_string(classes));
  }
  if (size == 0) throw std::invalid_argument("SoftMaskStack: size must be positive");
  if (values_.size() != regions * size * size) {
    throw std::invalid_argument("SoftMaskStack: value count does not match shape");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("SoftMaskStack: entries must lie in [0, 1]");
  }
}

SoftMaskStack::SoftMaskStack(std::size_t regions, std::size_t size, double fill)
    : SoftMaskStack(regions, 1, size, std::vector<double>(regions * size * size, fill)) {}

void SoftMaskStack::set(std::size_t r, std::size_t i, std::size_t j, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("SoftMaskStack: entries must lie in [0, 1]");
  values_[(r * size_ + i) * size_ + j] = v;
}

namespace {
void check_shapes(const RoiFeatures& feat, const SoftMaskStack& masks) {
  if (feat.regions() != masks.regions() || feat.size() != masks.size()) {
    throw std::invalid_argument("soft mask attention: features are (" + std::to_string(feat.regions()) + " regions, " +
                                std::to_string(feat.size()) + "px) but masks are (" +
                                std::to_string(masks.regions()) + " regions, " + std::to_string(masks.size()) +
                                "px)");
  }
}
}  // namespace

RoiFeatures gate_features(const RoiFeatures& feat, const SoftMaskStack& masks) {
  check_shapes(feat, masks);
  RoiFeatures out(feat.regions(), feat.channels(), feat.size());
  const std::size_t m = feat.size();
  for (std::size_t r = 0; r < feat.regions(); ++r) {
    for (std::size_t c = 0; c < feat.channels(); ++c) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) out.at(r, c, i, j) = feat.at(r, c, i, j) * masks.at(r, i, j);
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> pool_features(const RoiFeatures& feat, const SoftMaskStack& masks) {
  check_shapes(feat, masks);
  const std::size_t m = feat.size();
  std::vector<std::vector<double>> out(feat.regions(), std::vector<double>(feat.channels(), 0.0));
  for (std::size_t r = 0; r < feat.regions(); ++r) {
    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) mass += masks.at(r, i, j);
    }
    if (!(mass > 0.0)) {
      throw std::invalid_argument("pool_features: mask of region " + std::to_string(r) + " is all zero");
    }
    for (std::size_t c = 0; c < feat.channels(); ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) acc += masks.at(r, i, j) * feat.at(r, c, i, j);
      }
      out[r][c] = acc / mass;
    }
  }
  return out;
}

GrayImage heatmap_overlay(const SoftMaskStack& masks, std::size_t region, const Box& box, int image_width,
                          int image_height) {
  if (region >= masks.regions()) throw std::invalid_argument("heatmap_overlay: region out of range");
  if (!(box.width() > 0.0) || !(box.height() > 0.0)) {
    throw std::invalid_argument("heatmap_overlay: degenerate box");
  }
  if (image_width <= 0 || image_height <= 0) throw std::invalid_argument("heatmap_overlay: empty image");

  const auto m = static_cast<double>(masks.size());
  const double scale_x = m / box.width();
  const double scale_y = m / box.height();
  const int last = static_cast<int>(masks.size()) - 1;
  GrayImage out(image_width, image_height, 0.0);
  const int px0 = std::max(0, static_cast<int>(std::floor(box.x1)));
  const int py0 = std::max(0, static_cast<int>(std::floor(box.y1)));
  const int px1 = std::min(image_width, static_cast<int>(std::ceil(box.x2)));
  const int py1 = std::min(image_height, static_cast<int>(std::ceil(box.y2)));
  for (int py = py0; py < py1; ++py) {
    const double cy = py + 0.5;
    if (cy < box.y1 || cy >= box.y2) continue;
    // Half-pixel aligned source coordinate, edge-clamped.
    const double sy = std::clamp((cy - box.y1) * scale_y - 0.5, 0.0, static_cast<double>(last));
    const int iy0 = static_cast<int>(std::floor(sy));
    const int iy1 = std::min(iy0 + 1, last);
    const double fy = sy - iy0;
    for (int px = px0; px < px1; ++px) {
      const double cx = px + 0.5;
      if (cx < box.x1 || cx >= box.x2) continue;
      const double sx = std::clamp((cx - box.x1) * scale_x - 0.5, 0.0, static_cast<double>(last));
      const int ix0 = static_cast<int>(std::floor(sx));
      const int ix1 = std::min(ix0 + 1, last);
      const double fx = sx - ix0;
      const double top = masks.at(region, iy0, ix0) * (1.0 - fx) + masks.at(region, iy0, ix1) * fx;
      const double bottom = masks.at(region, iy1, ix0) * (1.0 - fx) + masks.at(region, iy1, ix1) * fx;
      out.at(px, py) = top * (1.0 - fy) + bottom * fy;
    }
  }
  return out;
}

}  // namespace brandnet
