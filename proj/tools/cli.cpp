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

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "brandnet/config.hpp"
#include "brandnet/dataset.hpp"
#include "brandnet/error.hpp"
#include "brandnet/evaluation.hpp"
#include "brandnet/image.hpp"
#include "brandnet/kmeans.hpp"
#include "brandnet/pipeline.hpp"
#include "brandnet/synth.hpp"

namespace brandnet::cli {

namespace {

void write_text(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + path.string());
  f << contents;
}

std::optional<Box> parse_box(const std::string& box_text) {
  std::vector<double> v;
  std::stringstream ss(box_text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) return std::nullopt;
    } catch (...) {
      return std::nullopt;
    }
  }
  if (v.size() != 4 || !(v[2] > 0.0) || !(v[3] > 0.0)) return std::nullopt;
  return BoxXYWH{v[0], v[1], v[2], v[3]}.to_corners();
}

int cmd_ingest(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
  const IngestSummary s = run_ingest(config);
  for (const LoadIssue& issue : s.rejected) {
    err << config.annotations.string() << ":" << issue.line << ": rejected: " << issue.message << '\n';
  }
  out << format_stats_text(s.stats);
  out << "rejected=" << s.rejected.size() << '\n';
  if (!config.report.empty()) write_text(config.report, format_stats_json(s.stats));
  return s.rejected.empty() || config.allow_partial ? kOk : kDataError;
}

int cmd_qc(const PipelineConfig& config, const std::vector<std::string>& inputs, std::ostream& out) {
  if (inputs.size() != 3) throw std::invalid_argument("qc: exactly three annotator files are required");
  const Taxonomy taxonomy = load_taxonomy(config.taxonomy);
  const QcSummary s = run_qc({inputs[0], inputs[1], inputs[2]}, taxonomy);
  for (const QcImageDecision& d : s.decisions) {
    out << d.image_id << " chosen=" << d.result.chosen << " score=" << d.result.score << '\n';
  }
  if (!config.output.empty()) save_annotations(s.consensus, config.output);
  return kOk;
}

int cmd_build(const PipelineConfig& config, std::ostream& out) {
  const BuildSummary s = run_build_index(config);
  out << "count=" << s.count << '\n'
      << "coarse_distortion=" << s.coarse_distortion << '\n'
      << "pq_distortion=" << s.pq_distortion << '\n';
  return kOk;
}

int cmd_add(const PipelineConfig& config, std::ostream& out) {
  const std::uint64_t fits_before = kmeans_fit_count();
  const AddSummary s = run_add(config);
  out << "added=" << s.added << '\n'
      << "count=" << s.count << '\n'
      << "first_id=" << s.first_id << '\n'
      << "retrained=" << (kmeans_fit_count() != fits_before ? "yes" : "no") << '\n';
  return kOk;
}

int cmd_search(const PipelineConfig& config, const std::string& image, const std::string& box_spec,
               std::ostream& out, std::ostream& err) {
  const auto box = parse_box(box_spec);
  if (!box) throw std::invalid_argument("search: --box must be x,y,w,h with positive w and h");
  const Recognizer recognizer(config);
  const GrayImage img = read_pnm(image);
  const RecognitionResult r = recognizer.recognize(img, *box, image);
  if (r.truncated) {
    err << "warning: requested top_k=" << config.top_k << " but only " << r.neighbors.size()
        << " neighbors were available\n";
  }
  out << "predicted.logo=" << r.predicted.logo_id << '\n'
      << "predicted.brand=" << r.predicted.brand_id << '\n'
      << "predicted.type=" << r.predicted.type_id << '\n';
  for (std::size_t i = 0; i < r.neighbors.size(); ++i) {
    out << "neighbor." << i << "=" << r.neighbors[i].id << "," << r.neighbors[i].distance << '\n';
  }
  return kOk;
}

int cmd_eval(const PipelineConfig& config, std::ostream& out) {
  const EvalReport report = run_eval(config);
  out << "mAP(0.5:0.95)=" << report.map << '\n';
  if (report.no_ground_truth) out << "warning: no ground-truth instances\n";
  if (!config.report.empty()) {
    write_text(config.report, format_report_text(report));
    std::filesystem::path json = config.report;
    json += ".json";
    write_text(json, format_report_json(report));
  }
  return kOk;
}

int cmd_synth(const PipelineConfig& config, std::ostream& out) {
  if (config.output.empty()) throw std::invalid_argument("synth: --output directory is required");
  SynthConfig sc;
  sc.seed = config.seed;
  sc.num_brands = config.synth_brands;
  sc.instances_per_brand = config.synth_instances;
  sc.first_brand = config.synth_first_brand;
  sc.image_size = config.synth_image_size;
  sc.instances_per_image = config.synth_instances_per_image;
  sc.mean_scale_percent = config.synth_mean_scale;
  const SynthDataset ds = generate_synthetic_dataset(sc);
  write_synthetic_dataset(ds, config.output);
  const DatasetStats stats = dataset_stats(ds.records);
  out << "images=" << ds.records.size() << '\n' << format_stats_text(stats);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Brand recognition: dataset tooling, instance retrieval index and detection evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key=value configuration file");
  std::map<std::string, std::string> overrides;
  for (const std::string& key : config_keys()) {
    app.add_option_function<std::string>(
        "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; }, "config override");
  }

  std::vector<std::string> qc_inputs;
  std::string image, box;
  auto* ingest = app.add_subcommand("ingest", "validate annotations and print dataset statistics");
  auto* qc = app.add_subcommand("qc", "three-annotator IoU consensus");
  qc->add_option("inputs", qc_inputs, "three annotation files")->expected(3);
  auto* build = app.add_subcommand("build-index", "embed the gallery and build the IVF-PQ index");
  auto* add = app.add_subcommand("add", "append new exemplars to an existing index without retraining");
  auto* search = app.add_subcommand("search", "recognise the logo inside a box of an image");
  search->add_option("--image", image, "query image (PGM/PPM)")->required();
  search->add_option("--box", box, "query box x,y,w,h")->required();
  auto* eval = app.add_subcommand("eval", "mAP(0.5:0.95) of a results file against ground truth");
  auto* synth = app.add_subcommand("synth", "generate a synthetic planted-logo dataset");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    PipelineConfig config = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    for (const auto& [key, value] : overrides) config.set(key, value);
    config.validate();

    if (ingest->parsed()) return cmd_ingest(config, out, err);
    if (qc->parsed()) return cmd_qc(config, qc_inputs, out);
    if (build->parsed()) return cmd_build(config, out);
    if (add->parsed()) return cmd_add(config, out);
    if (search->parsed()) return cmd_search(config, image, box, out, err);
    if (eval->parsed()) return cmd_eval(config, out);
    if (synth->parsed()) return cmd_synth(config, out);
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace brandnet::cli
