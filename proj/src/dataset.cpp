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

#include "brandnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "brandnet/geometry.hpp"
#include "text_io.hpp"

namespace brandnet {

LoadResult parse_annotations(std::string_view contents, const Taxonomy& taxonomy) {
  LoadResult result;
  std::unordered_map<std::string, std::size_t> index_of;
  std::size_t line_no = 0;

  for (std::string_view raw : text::lines(contents)) {
    ++line_no;
    const std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;

    auto reject = [&](std::string why) { result.rejected.push_back({line_no, std::move(why)}); };
    const auto fields = text::split(line, ',');
    if (fields.size() != 3 && fields.size() != 10) {
      reject("expected 3 or 10 fields, got " + std::to_string(fields.size()));
      continue;
    }
    const std::string image_id(fields[0]);
    if (image_id.empty()) {
      reject("empty image_id");
      continue;
    }
    const auto width = text::parse_int(fields[1]);
    const auto height = text::parse_int(fields[2]);
    if (!width || !height || *width <= 0 || *height <= 0 || *width > (1 << 30) || *height > (1 << 30)) {
      reject("image size must be two positive integers");
      continue;
    }
    if (auto it = index_of.find(image_id); it != index_of.end()) {
      const ImageRecord& prev = result.records[it->second];
      if (prev.width != *width || prev.height != *height) {
        reject("image size disagrees with an earlier line for '" + image_id + "'");
        continue;
      }
    }

    std::optional<InstanceAnnotation> instance;
    if (fields.size() == 10) {
      double box[4];
      bool ok = true;
      for (int i = 0; i < 4 && ok; ++i) {
        const auto v = text::parse_double(fields[3 + i]);
        ok = v.has_value() && std::isfinite(*v);
        if (ok) box[i] = *v;
      }
      if (!ok) {
        reject("box fields must be finite reals");
        continue;
      }
      if (!(box[2] > 0.0) || !(box[3] > 0.0)) {
        reject("box width and height must be positive");
        continue;
      }
      LabelId ids[3];
      for (int i = 0; i < 3 && ok; ++i) {
        const auto v = text::parse_int(fields[7 + i]);
        ok = v.has_value() && *v >= 0 && *v <= 0xFFFFFFFFll;
        if (ok) ids[i] = static_cast<LabelId>(*v);
      }
      if (!ok) {
        reject("label ids must be non-negative integers");
        continue;
      }
      const LabelTriple label{ids[0], ids[1], ids[2]};
      if (!taxonomy.has_logo(label.logo_id)) {
        reject("unknown logo id " + std::to_string(label.logo_id));
        continue;
      }
      if (!taxonomy.consistent(label)) {
        const LabelTriple expected = *taxonomy.resolve(label.logo_id);
        reject("label (type " + std::to_string(label.type_id) + ", brand " + std::to_string(label.brand_id) +
               ", logo " + std::to_string(label.logo_id) + ") disagrees with taxonomy (type " +
               std::to_string(expected.type_id) + ", brand " + std::to_string(expected.brand_id) + ")");
        continue;
      }
      const BoxXYWH raw_box{box[0], box[1], box[2], box[3]};
      const Box clipped = clip_box(raw_box.to_corners(), static_cast<double>(*width),
                                   static_cast<double>(*height));
      if (!(clipped.width() > 0.0) || !(clipped.height() > 0.0)) {
        reject("box lies outside the image");
        continue;
      }
      // Keep in-bounds boxes bit-identical; only touched coordinates change.
      BoxXYWH stored = raw_box;
      if (!(clipped == raw_box.to_corners())) stored = BoxXYWH::from_corners(clipped);
      instance = InstanceAnnotation{stored, label};
    }

    auto [it, inserted] = index_of.try_emplace(image_id, result.records.size());
    if (inserted) {
      result.records.push_back({image_id, static_cast<int>(*width), static_cast<int>(*height), {}});
    }
    if (instance) result.records[it->second].annotations.push_back(*instance);
  }
  return result;
}

LoadResult load_annotations(const std::filesystem::path& path, const Taxonomy& taxonomy) {
  return parse_annotations(text::read_file(path), taxonomy);
}

std::string format_annotations(std::span<const ImageRecord> records) {
  std::ostringstream out;
  for (const ImageRecord& rec : records) {
    if (rec.annotations.empty()) {
      out << rec.image_id << ',' << rec.width << ',' << rec.height << '\n';
      continue;
    }
    for (const InstanceAnnotation& a : rec.annotations) {
      out << rec.image_id << ',' << rec.width << ',' << rec.height << ',' << text::format_double(a.box.x)
          << ',' << text::format_double(a.box.y) << ',' << text::format_double(a.box.w) << ','
          << text::format_double(a.box.h) << ',' << a.label.type_id << ',' << a.label.brand_id << ','
          << a.label.logo_id << '\n';
    }
  }
  return out.str();
}

void save_annotations(std::span<const ImageRecord> records, const std::filesystem::path& path) {
  text::write_file(path, format_annotations(records));
}

DatasetStats dataset_stats(std::span<const ImageRecord> records) {
  if (records.empty()) throw std::invalid_argument("dataset_stats: no records");
  DatasetStats stats;
  stats.num_images = records.size();
  std::set<LabelId> logos;
  double ratio_sum = 0.0;
  for (const ImageRecord& rec : records) {
    const double image_area = static_cast<double>(rec.width) * rec.height;
    for (const InstanceAnnotation& a : rec.annotations) {
      ratio_sum += (a.box.w * a.box.h) / image_area;
      logos.insert(a.label.logo_id);
      ++stats.num_instances;
    }
  }
  stats.num_categories = logos.size();
  if (stats.num_instances > 0) {
    stats.mean_scale_percent = 100.0 * ratio_sum / static_cast<double>(stats.num_instances);
    stats.mean_instances_per_category =
        static_cast<double>(stats.num_instances) / static_cast<double>(stats.num_categories);
  }
  return stats;
}

std::string format_stats_text(const DatasetStats& s) {
  std::ostringstream out;
  out << "num_images=" << s.num_images << '\n'
      << "num_instances=" << s.num_instances << '\n'
      << "num_categories=" << s.num_categories << '\n'
      << "mean_scale_percent=" << text::format_double(s.mean_scale_percent) << '\n'
      << "mean_instances_per_category=" << text::format_double(s.mean_instances_per_category) << '\n';
  return out.str();
}

std::string format_stats_json(const DatasetStats& s) {
  nlohmann::json j;
  j["num_images"] = s.num_images;
  j["num_instances"] = s.num_instances;
  j["num_categories"] = s.num_categories;
  j["mean_scale_percent"] = s.mean_scale_percent;
  j["mean_instances_per_category"] = s.mean_instances_per_category;
  return j.dump(2) + "\n";
}

std::vector<double> greedy_match_ious(std::span<const Box> a, std::span<const Box> b) {
  struct Pair {
    double iou;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double v = iou(a[i], b[j]);
      if (v > 0.0) pairs.push_back({v, i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& p, const Pair& q) {
    if (p.iou != q.iou) return p.iou > q.iou;
    if (p.i != q.i) return p.i < q.i;
    return p.j < q.j;
  });
  std::vector<double> matched(a.size(), 0.0);
  std::vector<char> used_a(a.size(), 0);
  std::vector<char> used_b(b.size(), 0);
  for (const Pair& p : pairs) {
    if (used_a[p.i] || used_b[p.j]) continue;
    used_a[p.i] = used_b[p.j] = 1;
    matched[p.i] = p.iou;
  }
  return matched;
}

QcResult qc_consensus(const std::array<std::vector<InstanceAnnotation>, 3>& candidates) {
  std::array<std::vector<Box>, 3> boxes;
  bool any = false;
  for (std::size_t c = 0; c < 3; ++c) {
    for (const InstanceAnnotation& a : candidates[c]) boxes[c].push_back(a.box.to_corners());
    any = any || !boxes[c].empty();
  }
  if (!any) throw std::invalid_argument("qc_consensus: all three annotations are empty");

  QcResult result;
  for (std::size_t c = 0; c < 3; ++c) {
    if (boxes[c].empty()) continue;
    double total = 0.0;
    for (std::size_t other = 0; other < 3; ++other) {
      if (other == c) continue;
      for (double v : greedy_match_ious(boxes[c], boxes[other])) total += v;
    }
    result.scores[c] = total / (2.0 * static_cast<double>(boxes[c].size()));
  }
  for (std::size_t c = 1; c < 3; ++c) {
    if (result.scores[c] > result.scores[result.chosen]) result.chosen = c;
  }
  result.score = result.scores[result.chosen];
  return result;
}

std::vector<ImageRecord> balanced_test_split(std::span<const ImageRecord> records,
                                             std::size_t per_category, std::uint64_t seed) {
  if (per_category == 0) throw std::invalid_argument("balanced_test_split: per_category must be >= 1");
  std::map<LabelId, std::vector<std::size_t>> by_logo;
  for (std::size_t r = 0; r < records.size(); ++r) {
    std::set<LabelId> logos;
    for (const InstanceAnnotation& a : records[r].annotations) logos.insert(a.label.logo_id);
    for (LabelId logo : logos) by_logo[logo].push_back(r);
  }

  std::mt19937_64 rng(seed);
  std::vector<char> selected(records.size(), 0);
  std::vector<std::size_t> picked;
  for (auto& [logo, images] : by_logo) {
    std::size_t have = 0;
    std::vector<std::size_t> pool;
    for (std::size_t r : images) {
      if (selected[r]) {
        ++have;
      } else {
        pool.push_back(r);
      }
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t r : pool) {
      if (have >= per_category) break;
      selected[r] = 1;
      picked.push_back(r);
      ++have;
    }
  }
  std::vector<ImageRecord> out;
  out.reserve(picked.size());
  for (std::size_t r : picked) out.push_back(records[r]);
  return out;
}

}  // namespace brandnet
