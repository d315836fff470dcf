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

#include "brandnet/config.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "text_io.hpp"

namespace brandnet {

std::filesystem::path PipelineConfig::labels_path() const {
  if (!labels.empty()) return labels;
  std::filesystem::path p = index;
  p += ".labels";
  return p;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "annotations", "taxonomy",  "images",       "index",          "labels",         "results",
      "report",      "output",    "nlist",        "nprobe",         "m",              "ksub",
      "seed",        "kmeans_iters", "top_k",     "patch_size",     "grid",           "bins",
      "threads",     "confidence_threshold", "iou_thresholds", "eval_level", "negative_threshold",
      "allow_partial", "synth_brands", "synth_instances", "synth_first_brand", "synth_image_size",
      "synth_instances_per_image", "synth_mean_scale"};
  return keys;
}

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("config: invalid value '" + value + "' for key '" + key + "'");
}

std::size_t to_count(const std::string& key, const std::string& value) {
  const auto v = text::parse_int(value);
  if (!v || *v < 0) bad_value(key, value);
  return static_cast<std::size_t>(*v);
}

int to_int(const std::string& key, const std::string& value) {
  const auto v = text::parse_int(value);
  if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) bad_value(key, value);
  return static_cast<int>(*v);
}

double to_real(const std::string& key, const std::string& value) {
  const auto v = text::parse_double(value);
  if (!v) bad_value(key, value);
  return *v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  bad_value(key, value);
}

// Either "lo:step:hi" or a comma separated list.
std::vector<double> to_thresholds(const std::string& key, const std::string& value) {
  std::vector<double> out;
  if (value.find(':') != std::string::npos) {
    const auto parts = text::split(value, ':');
    if (parts.size() != 3) bad_value(key, value);
    const auto lo = text::parse_double(parts[0]);
    const auto step = text::parse_double(parts[1]);
    const auto hi = text::parse_double(parts[2]);
    if (!lo || !step || !hi || !(*step > 0.0) || *hi < *lo) bad_value(key, value);
    const auto n = static_cast<long>(std::floor((*hi - *lo) / *step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(*lo + static_cast<double>(i) * *step);
    return out;
  }
  for (std::string_view f : text::split(value, ',')) {
    const auto v = text::parse_double(f);
    if (!v) bad_value(key, value);
    out.push_back(*v);
  }
  return out;
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& raw) {
  const std::string value(text::trim(raw));
  if (key == "annotations") annotations = value;
  else if (key == "taxonomy") taxonomy = value;
  else if (key == "images") images = value;
  else if (key == "index") index = value;
  else if (key == "labels") labels = value;
  else if (key == "results") results = value;
  else if (key == "report") report = value;
  else if (key == "output") output = value;
  else if (key == "nlist") nlist = to_count(key, value);
  else if (key == "nprobe") nprobe = to_count(key, value);
  else if (key == "m") m = to_count(key, value);
  else if (key == "ksub") ksub = to_count(key, value);
  else if (key == "seed") seed = to_count(key, value);
  else if (key == "kmeans_iters") kmeans_iters = to_count(key, value);
  else if (key == "top_k") top_k = to_count(key, value);
  else if (key == "patch_size") patch_size = to_int(key, value);
  else if (key == "grid") grid = to_int(key, value);
  else if (key == "bins") bins = to_int(key, value);
  else if (key == "threads") threads = to_count(key, value);
  else if (key == "confidence_threshold") confidence_threshold = to_real(key, value);
  else if (key == "iou_thresholds") iou_thresholds = value.empty() ? std::vector<double>{} : to_thresholds(key, value);
  else if (key == "eval_level") {
    if (value == "logo") eval_level = LabelLevel::kLogo;
    else if (value == "brand") eval_level = LabelLevel::kBrand;
    else if (value == "type") eval_level = LabelLevel::kType;
    else bad_value(key, value);
  }
  else if (key == "negative_threshold") negative_threshold = to_real(key, value);
  else if (key == "allow_partial") allow_partial = to_bool(key, value);
  else if (key == "synth_brands") synth_brands = to_count(key, value);
  else if (key == "synth_instances") synth_instances = to_count(key, value);
  else if (key == "synth_first_brand") synth_first_brand = to_count(key, value);
  else if (key == "synth_image_size") synth_image_size = to_int(key, value);
  else if (key == "synth_instances_per_image") synth_instances_per_image = to_count(key, value);
  else if (key == "synth_mean_scale") synth_mean_scale = to_real(key, value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

void PipelineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + what);
  };
  require(nlist >= 1, "nlist must be >= 1");
  require(nprobe >= 1 && nprobe <= nlist, "nprobe must lie in [1, nlist]");
  require(m >= 1 && embedding_dims() % m == 0, "m must divide the embedding dimension");
  require(ksub >= 1 && ksub <= 256, "ksub must lie in [1, 256]");
  require(top_k >= 1, "top_k must be >= 1");
  require(grid >= 1 && bins >= 1, "grid and bins must be >= 1");
  require(patch_size >= grid, "patch_size must be at least grid");
  require(threads >= 1, "threads must be >= 1");
  require(confidence_threshold >= 0.0 && confidence_threshold <= 1.0, "confidence_threshold must lie in [0, 1]");
  for (double t : iou_thresholds) require(t >= 0.0 && t <= 1.0, "iou_thresholds must lie in [0, 1]");
  require(negative_threshold > 0.0 && negative_threshold < 1.0, "negative_threshold must lie in (0, 1)");
  require(synth_brands >= 1 && synth_instances >= 1, "synth_brands and synth_instances must be >= 1");
  require(synth_instances_per_image >= 1, "synth_instances_per_image must be >= 1");
  require(synth_image_size >= 32, "synth_image_size must be >= 32");
  require(synth_mean_scale > 0.0 && synth_mean_scale <= 10.0, "synth_mean_scale must lie in (0, 10]");
}

void apply_config_text(PipelineConfig& config, std::string_view contents) {
  std::size_t line_no = 0;
  for (std::string_view raw : text::lines(contents)) {
    ++line_no;
    const std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    config.set(std::string(text::trim(line.substr(0, eq))), std::string(line.substr(eq + 1)));
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  PipelineConfig config;
  apply_config_text(config, text::read_file(path));
  return config;
}

std::string format_config(const PipelineConfig& c) {
  std::ostringstream out;
  out << "annotations=" << c.annotations.string() << '\n'
      << "taxonomy=" << c.taxonomy.string() << '\n'
      << "images=" << c.images.string() << '\n'
      << "index=" << c.index.string() << '\n'
      << "labels=" << c.labels.string() << '\n'
      << "results=" << c.results.string() << '\n'
      << "report=" << c.report.string() << '\n'
      << "output=" << c.output.string() << '\n'
      << "nlist=" << c.nlist << '\n'
      << "nprobe=" << c.nprobe << '\n'
      << "m=" << c.m << '\n'
      << "ksub=" << c.ksub << '\n'
      << "seed=" << c.seed << '\n'
      << "kmeans_iters=" << c.kmeans_iters << '\n'
      << "top_k=" << c.top_k << '\n'
      << "patch_size=" << c.patch_size << '\n'
      << "grid=" << c.grid << '\n'
      << "bins=" << c.bins << '\n'
      << "threads=" << c.threads << '\n'
      << "confidence_threshold=" << text::format_double(c.confidence_threshold) << '\n';
  out << "iou_thresholds=";
  for (std::size_t i = 0; i < c.iou_thresholds.size(); ++i) {
    out << (i ? "," : "") << text::format_double(c.iou_thresholds[i]);
  }
  out << '\n'
      << "eval_level=" << level_name(c.eval_level) << '\n'
      << "negative_threshold=" << text::format_double(c.negative_threshold) << '\n'
      << "allow_partial=" << (c.allow_partial ? "true" : "false") << '\n'
      << "synth_brands=" << c.synth_brands << '\n'
      << "synth_instances=" << c.synth_instances << '\n'
      << "synth_first_brand=" << c.synth_first_brand << '\n'
      << "synth_image_size=" << c.synth_image_size << '\n'
      << "synth_instances_per_image=" << c.synth_instances_per_image << '\n'
      << "synth_mean_scale=" << text::format_double(c.synth_mean_scale) << '\n';
  return out.str();
}

}  // namespace brandnet
