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
#include <filesystem>
#include <vector>

#include "brandnet/dataset.hpp"
#include "brandnet/image.hpp"
#include "brandnet/taxonomy.hpp"

namespace brandnet {

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t num_brands = 50;
  std::size_t instances_per_brand = 40;
  std::size_t first_brand = 0;  // brand ids are first_brand .. first_brand + num_brands - 1
  int image_size = 256;
  std::size_t instances_per_image = 4;
  double mean_scale_percent = 1.2;  // mean instance area / image area, in percent
  std::size_t num_types = 4;
};

struct SynthDataset {
  Taxonomy taxonomy;  // covers brands 0 .. first_brand + num_brands - 1
  std::vector<ImageRecord> records;
  std::vector<GrayImage> images;  // aligned with records
};

// Procedural logo of one brand: a few oriented gratings and Gaussian blobs
// squashed into [0, 1]. Depends only on (seed, brand), so datasets generated
// in pieces agree on every brand's appearance.
class BrandPattern {
 public:
  BrandPattern(std::uint64_t seed, std::size_t brand);

  // Intensity at normalised logo coordinates (u, v) in [0, 1]^2.
  double value(double u, double v) const;

 private:
  struct Grating {
    double fu, fv, phase, amplitude;
  };
  struct Blob {
    double cu, cv, inv_two_sigma2, amplitude;
  };
  std::vector<Grating> gratings_;
  std::vector<Blob> blobs_;
};

// Planted-logo images: each instance is an opaque rectangle of its brand's
// pattern on a smooth background, with area fraction drawn uniformly from
// [0.4, 1.6] x mean_scale_percent. Logo, brand and type ids are
// (b, b, b % num_types). Deterministic in config.
SynthDataset generate_synthetic_dataset(const SynthConfig& config);

// Writes images/<image_id>.pgm, annotations.csv and taxonomy.csv under dir.
void write_synthetic_dataset(const SynthDataset& dataset, const std::filesystem::path& dir);

}  // namespace brandnet
