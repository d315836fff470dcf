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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "brandnet/box.hpp"

namespace brandnet {

// Intersection over union; 0 when the union is empty.
double iou(const Box& a, const Box& b);

struct AnchorLevel {
  int stride = 8;
  std::vector<double> scales;         // anchor side length in pixels at ratio 1
  std::vector<double> aspect_ratios;  // height / width
};

// Pyramid levels are stride metadata only (e.g. conv4_3 / fc7 / P2..P5 taps).
struct AnchorGrid {
  int image_width = 0;
  int image_height = 0;
  std::vector<AnchorLevel> levels;

  // Throws std::invalid_argument on non-increasing strides or non-positive
  // scales / ratios / image size.
  void validate() const;
};

// One anchor per (cell, scale, ratio), centered on the cell center, with
// ceil(W / stride) x ceil(H / stride) cells per level. Aspect ratios keep
// the anchor area equal to scale^2.
std::vector<std::vector<Box>> generate_anchors(const AnchorGrid& grid);

struct BoxDeltas {
  double dx = 0.0;
  double dy = 0.0;
  double dw = 0.0;
  double dh = 0.0;
};

// log(1000 / 16): keeps exp() of predicted size deltas finite.
inline constexpr double kMaxSizeDelta = 4.135166556742356;

BoxDeltas encode_deltas(const Box& anchor, const Box& target);
Box decode_deltas(const Box& anchor, const BoxDeltas& deltas);

struct RefinedAnchor {
  Box box;
  double objectness = 0.0;
  bool deltas_applied = false;
};

inline constexpr double kDefaultNegativeThreshold = 0.99;

// Drops anchors whose background probability (1 - objectness) exceeds
// negative_threshold, applies deltas to the survivors and clips them to the
// image. Input order is preserved.
std::vector<RefinedAnchor> refine_anchors(std::span<const Box> anchors,
                                          std::span<const double> objectness,
                                          std::span<const BoxDeltas> deltas,
                                          double negative_threshold,
                                          double image_width, double image_height);

// Greedy suppression in (score desc, index asc) order; a box is dropped when
// its IoU with an already kept box exceeds iou_threshold. Returns kept
// indices in that order.
std::vector<std::size_t> nms(std::span<const Box> boxes, std::span<const double> scores,
                             double iou_threshold);

}  // namespace brandnet
