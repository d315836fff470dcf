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
#include <map>
#include <string>
#include <vector>

#include "brandnet/taxonomy.hpp"

namespace brandnet {

// Flat key=value configuration. Every key can also be given on the command
// line as --<key>; see config_keys().
struct PipelineConfig {
  // paths
  std::filesystem::path annotations;
  std::filesystem::path taxonomy;
  std::filesystem::path images;
  std::filesystem::path index;
  std::filesystem::path labels;  // defaults to <index>.labels
  std::filesystem::path results;
  std::filesystem::path report;
  std::filesystem::path output;

  // index
  std::size_t nlist = 256;
  std::size_t nprobe = 8;
  std::size_t m = 16;
  std::size_t ksub = 256;
  std::uint64_t seed = 0;
  std::size_t kmeans_iters = 25;
  std::size_t top_k = 5;

  // embedding
  int patch_size = 64;
  int grid = 16;
  int bins = 16;
  std::size_t threads = 1;

  // evaluation
  double confidence_threshold = 0.5;
  std::vector<double> iou_thresholds;  // empty = 0.50:0.05:0.95
  LabelLevel eval_level = LabelLevel::kLogo;

  // anchor refinement
  double negative_threshold = 0.99;

  // ingest
  bool allow_partial = false;

  // synthetic data
  std::size_t synth_brands = 50;
  std::size_t synth_instances = 40;
  std::size_t synth_first_brand = 0;
  int synth_image_size = 256;
  std::size_t synth_instances_per_image = 4;
  double synth_mean_scale = 1.2;

  std::size_t embedding_dims() const { return static_cast<std::size_t>(grid) * grid * bins; }
  std::filesystem::path labels_path() const;

  // Throws std::invalid_argument naming the key on an unknown key or a
  // value that does not parse.
  void set(const std::string& key, const std::string& value);

  // Throws std::invalid_argument when a value is outside its module's range.
  void validate() const;
};

const std::vector<std::string>& config_keys();

// Blank lines and '#' comments are ignored; later keys win.
PipelineConfig load_config(const std::filesystem::path& path);
void apply_config_text(PipelineConfig& config, std::string_view text);

std::string format_config(const PipelineConfig& config);

}  // namespace brandnet
