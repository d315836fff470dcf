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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "brandnet/box.hpp"
#include "brandnet/taxonomy.hpp"

namespace brandnet {

struct InstanceAnnotation {
  BoxXYWH box;
  LabelTriple label;

  friend bool operator==(const InstanceAnnotation&, const InstanceAnnotation&) = default;
};

struct ImageRecord {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<InstanceAnnotation> annotations;  // may be empty (brand-free image)

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct LoadIssue {
  std::size_t line = 0;
  std::string message;
};

struct LoadResult {
  std::vector<ImageRecord> records;
  std::vector<LoadIssue> rejected;
};

// Annotation file: UTF-8, one instance per line, comma separated
//   image_id,W,H,x,y,w,h,type_id,brand_id,logo_id
// A line with only image_id,W,H declares an image without instances.
// Blank lines and '#' comments are skipped. Lines that fail validation are
// reported in LoadResult::rejected and do not contribute an instance.
// Throws DataError when the file cannot be read.
LoadResult load_annotations(const std::filesystem::path& path, const Taxonomy& taxonomy);
LoadResult parse_annotations(std::string_view contents, const Taxonomy& taxonomy);

std::string format_annotations(std::span<const ImageRecord> records);
void save_annotations(std::span<const ImageRecord> records, const std::filesystem::path& path);

struct DatasetStats {
  std::size_t num_images = 0;
  std::size_t num_instances = 0;
  std::size_t num_categories = 0;  // distinct logo ids present
  double mean_scale_percent = 0.0;
  double mean_instances_per_category = 0.0;
};

// Throws std::invalid_argument on empty input.
DatasetStats dataset_stats(std::span<const ImageRecord> records);

// Flat key=value report, one pair per line.
std::string format_stats_text(const DatasetStats& stats);
std::string format_stats_json(const DatasetStats& stats);

struct QcResult {
  std::size_t chosen = 0;
  double score = 0.0;
  std::array<double, 3> scores{};
};

// For each pair of boxes lists, greedy one-to-one matching on descending
// IoU; returns, per box of `a`, the IoU of its match (0 when unmatched).
std::vector<double> greedy_match_ious(std::span<const Box> a, std::span<const Box> b);

// Three-annotator consensus: each candidate scores the mean matched IoU of
// its boxes against both other annotators; highest score wins, lowest index
// on ties. Throws std::invalid_argument when all three lists are empty.
QcResult qc_consensus(const std::array<std::vector<InstanceAnnotation>, 3>& candidates);

// Up to per_category images per logo id, deterministic in seed. Images are
// emitted once even when they hold several logos and count toward every
// logo they contain. Images without instances are never selected.
std::vector<ImageRecord> balanced_test_split(std::span<const ImageRecord> records,
                                             std::size_t per_category, std::uint64_t seed);

}  // namespace brandnet
