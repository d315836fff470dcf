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
#include <span>
#include <string>
#include <vector>

#include "brandnet/box.hpp"
#include "brandnet/dataset.hpp"
#include "brandnet/taxonomy.hpp"

namespace brandnet {

struct Detection {
  std::string image_id;
  Box box;
  LabelTriple label;
  double confidence = 0.0;
};

struct GroundTruth {
  std::string image_id;
  Box box;
  LabelTriple label;
};

std::vector<GroundTruth> ground_truth_from_records(std::span<const ImageRecord> records);

// Results file: one detection per line, comma separated
//   image_id,x,y,w,h,type_id,brand_id,logo_id,confidence
// Throws DataError naming the line on any malformed entry.
std::vector<Detection> load_detections(const std::filesystem::path& path);
std::vector<Detection> parse_detections(std::string_view contents);
std::string format_detections(std::span<const Detection> detections);

// Replaces brand and type of every detection with the taxonomy's parents of
// its logo. Throws DataError on an unknown logo.
void resolve_labels(std::span<Detection> detections, const Taxonomy& taxonomy);

struct MatchResult {
  std::vector<std::size_t> order;  // detection indices, descending confidence (stable)
  std::vector<char> true_positive;  // aligned with order
};

// Greedy COCO-style matching: in confidence order, each detection takes the
// still unmatched ground truth of the same image and class (at `level`)
// with the highest IoU >= iou_threshold, lowest index on ties.
MatchResult match_detections(std::span<const Detection> detections, std::span<const GroundTruth> ground_truth,
                             double iou_threshold, LabelLevel level = LabelLevel::kLogo);

// Area under the precision/recall curve with precision made monotone from
// the right, summed over every recall step. 0 when num_gt == 0.
double average_precision(std::span<const char> true_positive, std::size_t num_gt);

// 0.50, 0.55, ..., 0.95
std::vector<double> coco_iou_thresholds();

struct EvalOptions {
  double confidence_threshold = 0.5;
  std::vector<double> iou_thresholds = coco_iou_thresholds();
  LabelLevel level = LabelLevel::kLogo;
  bool include_rollups = true;  // also summarise the coarser label levels
};

struct ClassAp {
  LabelId class_id = 0;
  std::size_t num_gt = 0;
  std::vector<double> ap;  // one per IoU threshold
  double mean_ap = 0.0;
};

struct LevelSummary {
  LabelLevel level = LabelLevel::kLogo;
  std::size_t num_classes = 0;
  double map = 0.0;
};

struct EvalReport {
  LabelLevel level = LabelLevel::kLogo;
  std::vector<double> iou_thresholds;
  std::vector<ClassAp> classes;  // classes present in the ground truth, ascending id
  double map = 0.0;              // mean over classes and thresholds
  std::size_t detections_total = 0;
  std::size_t detections_kept = 0;  // at or above the confidence threshold
  std::size_t true_positives = 0;   // at IoU 0.5, all classes
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::vector<LevelSummary> levels;
  bool no_ground_truth = false;
};

// Drops detections below the confidence threshold, then evaluates every
// ground-truth class at every IoU threshold.
EvalReport evaluate(std::span<const Detection> detections, std::span<const GroundTruth> ground_truth,
                    const EvalOptions& options = {});

std::string format_report_text(const EvalReport& report);
std::string format_report_json(const EvalReport& report);

}  // namespace brandnet
