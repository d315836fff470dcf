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

#include "brandnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "brandnet/geometry.hpp"

namespace brandnet {

BrandPattern::BrandPattern(std::uint64_t seed, std::size_t brand) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(brand), 0xB4A2D5u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> freq(-4.0, 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int g = 0; g < 5; ++g) {
    double fu = 0.0, fv = 0.0;
    do {
      fu = freq(rng);
      fv = freq(rng);
    } while (std::hypot(fu, fv) < 0.75);
    gratings_.push_back({fu, fv, 2.0 * std::numbers::pi * unit(rng), 0.4 + 0.8 * unit(rng)});
  }
  for (int b = 0; b < 3; ++b) {
    const double sigma = 0.08 + 0.17 * unit(rng);
    blobs_.push_back({0.15 + 0.7 * unit(rng), 0.15 + 0.7 * unit(rng), 1.0 / (2.0 * sigma * sigma),
                      (unit(rng) < 0.5 ? -1.0 : 1.0) * (1.0 + unit(rng))});
  }
}

double BrandPattern::value(double u, double v) const {
  double s = 0.0;
  for (const Grating& g : gratings_) {
    s += g.amplitude * std::sin(2.0 * std::numbers::pi * (g.fu * u + g.fv * v) + g.phase);
  }
  for (const Blob& b : blobs_) {
    const double du = u - b.cu;
    const double dv = v - b.cv;
    s += b.amplitude * std::exp(-(du * du + dv * dv) * b.inv_two_sigma2);
  }
  return 0.5 + 0.45 * std::tanh(0.6 * s);
}

SynthDataset generate_synthetic_dataset(const SynthConfig& config) {
  if (config.num_brands == 0 || config.instances_per_brand == 0 || config.instances_per_image == 0) {
    throw std::invalid_argument("generate_synthetic_dataset: counts must be >= 1");
  }
  if (config.image_size < 32) throw std::invalid_argument("generate_synthetic_dataset: image_size must be >= 32");
  if (!(config.mean_scale_percent > 0.0 && config.mean_scale_percent <= 10.0)) {
    throw std::invalid_argument("generate_synthetic_dataset: mean scale must lie in (0, 10] percent");
  }
  if (config.num_types == 0) throw std::invalid_argument("generate_synthetic_dataset: num_types must be >= 1");

  SynthDataset out;
  const std::size_t last_brand = config.first_brand + config.num_brands;
  for (std::size_t b = 0; b < last_brand; ++b) {
    const auto id = static_cast<LabelId>(b);
    out.taxonomy.add(id, id, static_cast<LabelId>(b % config.num_types));
    out.taxonomy.set_logo_name(id, "logo_" + std::to_string(b));
    out.taxonomy.set_brand_name(id, "brand_" + std::to_string(b));
    out.taxonomy.set_type_name(static_cast<LabelId>(b % config.num_types), "type_" + std::to_string(b % config.num_types));
  }

  std::vector<BrandPattern> patterns;
  for (std::size_t b = config.first_brand; b < last_brand; ++b) patterns.emplace_back(config.seed, b);

  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(config.first_brand), 0x5E7u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::size_t> slots;
  for (std::size_t b = config.first_brand; b < last_brand; ++b) {
    slots.insert(slots.end(), config.instances_per_brand, b);
  }
  std::shuffle(slots.begin(), slots.end(), rng);

  const int size = config.image_size;
  const double image_area = static_cast<double>(size) * size;
  const double mean_fraction = config.mean_scale_percent / 100.0;
  for (std::size_t start = 0, img = 0; start < slots.size(); start += config.instances_per_image, ++img) {
    ImageRecord rec;
    rec.image_id = "synth_" + std::to_string(config.first_brand) + "_" + std::to_string(img);
    rec.width = size;
    rec.height = size;

    // Smooth low-contrast background with faint pixel noise.
    GrayImage image(size, size);
    const double gx = unit(rng), gy = unit(rng), phase = 2.0 * std::numbers::pi * unit(rng);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double u = static_cast<double>(x) / size;
        const double v = static_cast<double>(y) / size;
        image.at(x, y) = 0.35 + 0.15 * (gx * u + gy * v) + 0.05 * std::sin(6.0 * u + 4.0 * v + phase) +
                         0.02 * (unit(rng) - 0.5);
      }
    }

    std::vector<Box> placed;
    const std::size_t end = std::min(slots.size(), start + config.instances_per_image);
    for (std::size_t s = start; s < end; ++s) {
      const std::size_t brand = slots[s];
      const double fraction = mean_fraction * (0.4 + 1.2 * unit(rng));
      const double ratio = 0.7 + 0.7 * unit(rng);  // height / width
      const double area = fraction * image_area;
      const int w = std::clamp(static_cast<int>(std::lround(std::sqrt(area / ratio))), 6, size - 2);
      const int h = std::clamp(static_cast<int>(std::lround(std::sqrt(area * ratio))), 6, size - 2);
      Box box;
      bool ok = false;
      for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
        const int x = static_cast<int>(unit(rng) * (size - w));
        const int y = static_cast<int>(unit(rng) * (size - h));
        box = {static_cast<double>(x), static_cast<double>(y), static_cast<double>(x + w), static_cast<double>(y + h)};
        const Box padded{box.x1 - 2, box.y1 - 2, box.x2 + 2, box.y2 + 2};
        ok = std::none_of(placed.begin(), placed.end(), [&](const Box& p) { return iou(padded, p) > 0.0; });
      }
      // Very crowded images fall back to overlapping placements.
      placed.push_back(box);

      const BrandPattern& pattern = patterns[brand - config.first_brand];
      for (int py = static_cast<int>(box.y1); py < static_cast<int>(box.y2); ++py) {
        for (int px = static_cast<int>(box.x1); px < static_cast<int>(box.x2); ++px) {
          image.at(px, py) = pattern.value((px + 0.5 - box.x1) / w, (py + 0.5 - box.y1) / h);
        }
      }
      const auto id = static_cast<LabelId>(brand);
      rec.annotations.push_back(
          {BoxXYWH::from_corners(box), LabelTriple{static_cast<LabelId>(brand % config.num_types), id, id}});
    }
    out.records.push_back(std::move(rec));
    out.images.push_back(std::move(image));
  }
  return out;
}

void write_synthetic_dataset(const SynthDataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "images");
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    write_pgm(dataset.images[i], dir / "images" / (dataset.records[i].image_id + ".pgm"));
  }
  save_annotations(dataset.records, dir / "annotations.csv");
  save_taxonomy(dataset.taxonomy, dir / "taxonomy.csv");
}

}  // namespace brandnet
