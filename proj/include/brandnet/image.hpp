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
#include <filesystem>
#include <vector>

#include "brandnet/box.hpp"

namespace brandnet {

// Row-major grayscale image with intensities in [0, 1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

  // Bilinear sample at continuous pixel-center coordinates, edge-clamped.
  double sample(double x, double y) const;
};

// Binary PGM (P5) or PPM (P6, converted with Rec. 601 luma). Throws
// DataError on unreadable or malformed files.
GrayImage read_pnm(const std::filesystem::path& path);

// 8-bit binary PGM, intensities clamped to [0, 1] and rounded.
void write_pgm(const GrayImage& image, const std::filesystem::path& path);

}  // namespace brandnet
