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

#include "brandnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace brandnet {

double iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

void AnchorGrid::validate() const {
  if (image_width <= 0 || image_height <= 0) {
    throw std::invalid_argument("anchor grid: image size must be positive");
  }
  int prev_stride = 0;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const AnchorLevel& level = levels[l];
    if (level.stride <= prev_stride) {
      throw std::invalid_argument("anchor grid: strides must be positive and strictly increasing (level " +
                                  std::to_string(l) + ")");
    }
    prev_stride = level.stride;
    for (double s : level.scales) {
      if (!(s > 0.0)) throw std::invalid_argument("anchor grid: scales must be positive");
    }
    for (double r : level.aspect_ratios) {
      if (!(r > 0.0)) throw std::invalid_argument("anchor grid: aspect ratios must be positive");
    }
  }
}

std::vector<std::vector<Box>> generate_anchors(const AnchorGrid& grid) {
  grid.validate();
  std::vector<std::vector<Box>> out;
  out.reserve(grid.levels.size());
  for (const AnchorLevel& level : grid.levels) {
    const int cols = (grid.image_width + level.stride - 1) / level.stride;
    const int rows = (grid.image_height + level.stride - 1) / level.stride;
    std::vector<Box> anchors;
    anchors.reserve(static_cast<std::size_t>(cols) * rows * level.scales.size() *
                    level.aspect_ratios.size());
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double cx = (c + 0.5) * level.stride;
        const double cy = (r + 0.5) * level.stride;
        for (double scale : level.scales) {
          for (double ratio : level.aspect_ratios) {
            const double root = std::sqrt(ratio);
            const double w = scale / root;
            const double h = scale * root;
            anchors.push_back({cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h});
          }
        }
      }
    }
    out.push_back(std::move(anchors));
  }
  return out;
}

BoxDeltas encode_deltas(const Box& anchor, const Box& target) {
  const double wa = anchor.width();
  const double ha = anchor.height();
  if (!(wa > 0.0) || !(ha > 0.0)) {
    throw std::invalid_argument("encode_deltas: anchor must have positive size");
  }
  const double wt = target.width();
  const double ht = target.height();
  if (!(wt > 0.0) || !(ht > 0.0)) {
    throw std::invalid_argument("encode_deltas: target must have positive size");
  }
  return {(target.center_x() - anchor.center_x()) / wa,
          (target.center_y() - anchor.center_y()) / ha, std::log(wt / wa), std::log(ht / ha)};
}

Box decode_deltas(const Box& anchor, const BoxDeltas& d) {
  const double wa = anchor.width();
  const double ha = anchor.height();
  const double cx = anchor.center_x() + d.dx * wa;
  const double cy = anchor.center_y() + d.dy * ha;
  const double w = wa * std::exp(std::min(d.dw, kMaxSizeDelta));
  const double h = ha * std::exp(std::min(d.dh, kMaxSizeDelta));
  return {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
}

std::vector<RefinedAnchor> refine_anchors(std::span<const Box> anchors,
                                          std::span<const double> objectness,
                                          std::span<const BoxDeltas> deltas,
                                          double negative_threshold, double image_width,
                                          double image_height) {
  if (anchors.size() != objectness.size() || anchors.size() != deltas.size()) {
    throw std::invalid_argument("refine_anchors: anchors, scores and deltas differ in length");
  }
  if (!(negative_threshold > 0.0 && negative_threshold < 1.0)) {
    throw std::invalid_argument("refine_anchors: negative_threshold must lie in (0, 1)");
  }
  std::vector<RefinedAnchor> out;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double fg = std::clamp(objectness[i], 0.0, 1.0);
    if (1.0 - fg > negative_threshold) continue;
    const Box moved = decode_deltas(anchors[i], deltas[i]);
    out.push_back({clip_box(moved, image_width, image_height), fg, true});
  }
  return out;
}

std::vector<std::size_t> nms(std::span<const Box> boxes, std::span<const double> scores,
                             double iou_threshold) {
  if (boxes.size() != scores.size()) {
    throw std::invalid_argument("nms: boxes and scores differ in length");
  }
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<char> suppressed(boxes.size(), 0);
  std::vector<std::size_t> keep;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t i = order[oi];
    if (suppressed[i]) continue;
    keep.push_back(i);
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const std::size_t j = order[oj];
      if (!suppressed[j] && iou(boxes[i], boxes[j]) > iou_threshold) suppressed[j] = 1;
    }
  }
  return keep;
}

}  // namespace brandnet
