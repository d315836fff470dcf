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

#include "brandnet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "brandnet/error.hpp"
#include "brandnet/geometry.hpp"
#include "text_io.hpp"

namespace brandnet {

std::vector<GroundTruth> ground_truth_from_records(std::span<const ImageRecord> records) {
  std::vector<GroundTruth> out;
  for (const ImageRecord& rec : records) {
    for (const InstanceAnnotation& a : rec.annotations) out.push_back({rec.image_id, a.box.to_corners(), a.label});
  }
  return out;
}

std::vector<Detection> parse_detections(std::string_view contents) {
  std::vector<Detection> out;
  std::size_t line_no = 0;
  for (std::string_view raw : text::lines(contents)) {
    ++line_no;
    const std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& why) {
      throw DataError("detections line " + std::to_string(line_no) + ": " + why);
    };
    const auto f = text::split(line, ',');
    if (f.size() != 9) fail("expected 9 fields, got " + std::to_string(f.size()));
    double vals[4];
    for (int i = 0; i < 4; ++i) {
      const auto v = text::parse_double(f[1 + i]);
      if (!v || !std::isfinite(*v)) fail("box fields must be finite reals");
      vals[i] = *v;
    }
    if (!(vals[2] > 0.0) || !(vals[3] > 0.0)) fail("box width and height must be positive");
    LabelId ids[3];
    for (int i = 0; i < 3; ++i) {
      const auto v = text::parse_int(f[5 + i]);
      if (!v || *v < 0 || *v > 0xFFFFFFFFll) fail("label ids must be non-negative integers");
      ids[i] = static_cast<LabelId>(*v);
    }
    const auto conf = text::parse_double(f[8]);
    if (!conf || !(*conf >= 0.0 && *conf <= 1.0)) fail("confidence must lie in [0, 1]");
    out.push_back({std::string(f[0]), BoxXYWH{vals[0], vals[1], vals[2], vals[3]}.to_corners(),
                   LabelTriple{ids[0], ids[1], ids[2]}, *conf});
  }
  return out;
}

std::vector<Detection> load_detections(const std::filesystem::path& path) {
  return parse_detections(text::read_file(path));
}

std::string format_detections(std::span<const Detection> detections) {
  std::ostringstream out;
  for (const Detection& d : detections) {
    const BoxXYWH b = BoxXYWH::from_corners(d.box);
    out << d.image_id << ',' << text::format_double(b.x) << ',' << text::format_double(b.y) << ','
        << text::format_double(b.w) << ',' << text::format_double(b.h) << ',' << d.label.type_id << ','
        << d.label.brand_id << ',' << d.label.logo_id << ',' << text::format_double(d.confidence) << '\n';
  }
  return out.str();
}

void resolve_labels(std::span<Detection> detections, const Taxonomy& taxonomy) {
  for (Detection& d : detections) {
    const auto resolved = taxonomy.resolve(d.label.logo_id);
    if (!resolved) throw DataError("detection for image '" + d.image_id + "' has unknown logo " +
                                   std::to_string(d.label.logo_id));
    d.label = *resolved;
  }
}

MatchResult match_detections(std::span<const Detection> detections, std::span<const GroundTruth> ground_truth,
                             double iou_threshold, LabelLevel level) {
  MatchResult result;
  result.order.resize(detections.size());
  std::iota(result.order.begin(), result.order.end(), std::size_t{0});
  std::stable_sort(result.order.begin(), result.order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].confidence > detections[b].confidence;
  });

  std::unordered_map<std::string, std::vector<std::size_t>> gt_by_image;
  for (std::size_t g = 0; g < ground_truth.size(); ++g) gt_by_image[ground_truth[g].image_id].push_back(g);

  std::vector<char> taken(ground_truth.size(), 0);
  result.true_positive.assign(detections.size(), 0);
  for (std::size_t rank = 0; rank < result.order.size(); ++rank) {
    const Detection& det = detections[result.order[rank]];
    auto it = gt_by_image.find(det.image_id);
    if (it == gt_by_image.end()) continue;
    const LabelId cls = label_at(det.label, level);
    double best = -1.0;
    std::size_t best_g = 0;
    for (std::size_t g : it->second) {
      if (taken[g] || label_at(ground_truth[g].label, level) != cls) continue;
      const double v = iou(det.box, ground_truth[g].box);
      if (v >= iou_threshold && v > best) {
        best = v;
        best_g = g;
      }
    }
    if (best >= 0.0) {
      taken[best_g] = 1;
      result.true_positive[rank] = 1;
    }
  }
  return result;
}

double average_precision(std::span<const char> true_positive, std::size_t num_gt) {
  if (num_gt == 0 || true_positive.empty()) return 0.0;
  const std::size_t n = true_positive.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += true_positive[i] ? 1 : 0;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(num_gt);
  }
  for (std::size_t i = n - 1; i > 0; --i) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

std::vector<double> coco_iou_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back((50 + 5 * i) / 100.0);
  return t;
}

namespace {

struct LevelResult {
  std::vector<ClassAp> classes;
  double map = 0.0;
};

LevelResult evaluate_level(std::span<const Detection> kept, std::span<const GroundTruth> gts,
                           std::span<const double> thresholds, LabelLevel level) {
  std::map<LabelId, std::vector<GroundTruth>> gt_by_class;
  for (const GroundTruth& g : gts) gt_by_class[label_at(g.label, level)].push_back(g);
  std::map<LabelId, std::vector<Detection>> det_by_class;
  for (const Detection& d : kept) {
    const LabelId c = label_at(d.label, level);
    if (gt_by_class.contains(c)) det_by_class[c].push_back(d);
  }

  LevelResult out;
  double sum = 0.0;
  for (const auto& [cls, class_gts] : gt_by_class) {
    ClassAp entry{cls, class_gts.size(), {}, 0.0};
    const std::vector<Detection>& class_dets = det_by_class[cls];
    for (double t : thresholds) {
      const MatchResult m = match_detections(class_dets, class_gts, t, level);
      entry.ap.push_back(average_precision(m.true_positive, class_gts.size()));
    }
    entry.mean_ap = entry.ap.empty() ? 0.0 : std::accumulate(entry.ap.begin(), entry.ap.end(), 0.0) /
                                                 static_cast<double>(entry.ap.size());
    sum += std::accumulate(entry.ap.begin(), entry.ap.end(), 0.0);
    out.classes.push_back(std::move(entry));
  }
  const std::size_t cells = out.classes.size() * thresholds.size();
  out.map = cells == 0 ? 0.0 : sum / static_cast<double>(cells);
  return out;
}

}  // namespace

EvalReport evaluate(std::span<const Detection> detections, std::span<const GroundTruth> ground_truth,
                    const EvalOptions& options) {
  EvalReport report;
  report.level = options.level;
  report.iou_thresholds = options.iou_thresholds;
  report.detections_total = detections.size();
  report.no_ground_truth = ground_truth.empty();

  std::vector<Detection> kept;
  for (const Detection& d : detections) {
    if (d.confidence >= options.confidence_threshold) kept.push_back(d);
  }
  report.detections_kept = kept.size();

  LevelResult primary = evaluate_level(kept, ground_truth, options.iou_thresholds, options.level);
  report.classes = std::move(primary.classes);
  report.map = primary.map;

  const MatchResult at_half = match_detections(kept, ground_truth, 0.5, options.level);
  for (char tp : at_half.true_positive) {
    if (tp) {
      ++report.true_positives;
    } else {
      ++report.false_positives;
    }
  }
  report.false_negatives = ground_truth.size() - report.true_positives;

  report.levels.push_back({options.level, report.classes.size(), report.map});
  if (options.include_rollups) {
    for (LabelLevel level : {LabelLevel::kLogo, LabelLevel::kBrand, LabelLevel::kType}) {
      if (level == options.level) continue;
      const LevelResult r = evaluate_level(kept, ground_truth, options.iou_thresholds, level);
      report.levels.push_back({level, r.classes.size(), r.map});
    }
  }
  return report;
}

std::string format_report_text(const EvalReport& r) {
  std::ostringstream out;
  out << "level=" << level_name(r.level) << '\n'
      << "mAP(0.5:0.95)=" << text::format_double(r.map) << '\n'
      << "num_classes=" << r.classes.size() << '\n'
      << "detections_total=" << r.detections_total << '\n'
      << "detections_kept=" << r.detections_kept << '\n'
      << "tp@0.5=" << r.true_positives << '\n'
      << "fp@0.5=" << r.false_positives << '\n'
      << "fn@0.5=" << r.false_negatives << '\n';
  for (const LevelSummary& s : r.levels) {
    out << "mAP." << level_name(s.level) << '=' << text::format_double(s.map) << '\n';
  }
  if (r.no_ground_truth) out << "warning=no ground truth instances\n";
  for (const ClassAp& c : r.classes) {
    out << "class." << c.class_id << ".ap=" << text::format_double(c.mean_ap) << '\n';
  }
  return out.str();
}

std::string format_report_json(const EvalReport& r) {
  nlohmann::json j;
  j["level"] = level_name(r.level);
  j["map"] = r.map;
  j["iou_thresholds"] = r.iou_thresholds;
  j["detections_total"] = r.detections_total;
  j["detections_kept"] = r.detections_kept;
  j["tp_at_0.5"] = r.true_positives;
  j["fp_at_0.5"] = r.false_positives;
  j["fn_at_0.5"] = r.false_negatives;
  j["no_ground_truth"] = r.no_ground_truth;
  j["levels"] = nlohmann::json::array();
  for (const LevelSummary& s : r.levels) {
    j["levels"].push_back({{"level", level_name(s.level)}, {"num_classes", s.num_classes}, {"map", s.map}});
  }
  j["classes"] = nlohmann::json::array();
  for (const ClassAp& c : r.classes) {
    j["classes"].push_back({{"class_id", c.class_id}, {"num_gt", c.num_gt}, {"ap", c.ap}, {"mean_ap", c.mean_ap}});
  }
  return j.dump(2) + "\n";
}

}  // namespace brandnet
