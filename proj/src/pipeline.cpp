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

#include "brandnet/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "brandnet/error.hpp"
#include "brandnet/image.hpp"
#include "brandnet/index_io.hpp"
#include "text_io.hpp"

namespace brandnet {

std::vector<GalleryEntry> load_gallery_labels(const std::filesystem::path& path) {
  const std::string contents = text::read_file(path);
  std::vector<GalleryEntry> out;
  std::size_t line_no = 0;
  for (std::string_view raw : text::lines(contents)) {
    ++line_no;
    const std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = text::split(line, ',');
    auto fail = [&] { throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed label entry"); };
    if (f.size() != 5) fail();
    const auto id = text::parse_int(f[0]);
    const auto t = text::parse_int(f[2]);
    const auto b = text::parse_int(f[3]);
    const auto l = text::parse_int(f[4]);
    if (!id || !t || !b || !l || *id < 0 || *t < 0 || *b < 0 || *l < 0) fail();
    out.push_back({static_cast<VectorId>(*id), std::string(f[1]),
                   LabelTriple{static_cast<LabelId>(*t), static_cast<LabelId>(*b), static_cast<LabelId>(*l)}});
  }
  return out;
}

void save_gallery_labels(std::span<const GalleryEntry> entries, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# id,image_id,type_id,brand_id,logo_id\n";
  for (const GalleryEntry& e : entries) {
    out << e.id << ',' << e.image_id << ',' << e.label.type_id << ',' << e.label.brand_id << ',' << e.label.logo_id
        << '\n';
  }
  text::write_file(path, out.str());
}

std::filesystem::path image_path(const std::filesystem::path& images_dir, const std::string& image_id) {
  std::filesystem::path pgm = images_dir / (image_id + ".pgm");
  if (std::filesystem::exists(pgm)) return pgm;
  std::filesystem::path ppm = images_dir / (image_id + ".ppm");
  if (std::filesystem::exists(ppm)) return ppm;
  throw DataError("no image for '" + image_id + "' in " + images_dir.string());
}

std::unique_ptr<Embedder> make_embedder(const PipelineConfig& config) {
  return std::make_unique<GradientHistogramEmbedder>(GradientHistogramConfig{config.grid, config.bins});
}

EmbeddedInstances embed_instances(std::span<const ImageRecord> records, const PipelineConfig& config,
                                  VectorId first_id) {
  const std::unique_ptr<Embedder> embedder = make_embedder(config);
  EmbeddedInstances out;
  out.dims = embedder->dims();

  std::vector<std::size_t> first_row(records.size() + 1, 0);
  for (std::size_t r = 0; r < records.size(); ++r) first_row[r + 1] = first_row[r] + records[r].annotations.size();
  const std::size_t total = first_row.back();
  out.vectors.assign(total * out.dims, 0.0f);
  out.entries.resize(total);
  std::vector<char> zero(total, 0);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const ImageRecord& rec = records[r];
      if (rec.annotations.empty()) continue;
      const GrayImage image = read_pnm(image_path(config.images, rec.image_id));
      if (image.width != rec.width || image.height != rec.height) {
        throw DataError("image '" + rec.image_id + "' is " + std::to_string(image.width) + "x" +
                        std::to_string(image.height) + " but annotated as " + std::to_string(rec.width) + "x" +
                        std::to_string(rec.height));
      }
      for (std::size_t a = 0; a < rec.annotations.size(); ++a) {
        const std::size_t row = first_row[r] + a;
        const Embedding e = embedder->embed(crop_patch(image, rec.annotations[a].box.to_corners(), config.patch_size));
        std::copy(e.values.begin(), e.values.end(), out.vectors.begin() + row * out.dims);
        zero[row] = e.unit_norm ? 0 : 1;
        out.entries[row] = {first_id + row, rec.image_id, rec.annotations[a].label};
      }
    }
  };

  const std::size_t workers = std::min<std::size_t>(std::max<std::size_t>(config.threads, 1), records.size());
  if (workers <= 1) {
    work(0, records.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (records.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(std::min(records.size(), w * chunk), std::min(records.size(), (w + 1) * chunk));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  out.zero_embeddings = static_cast<std::size_t>(std::count(zero.begin(), zero.end(), 1));
  return out;
}

namespace {

std::vector<ImageRecord> load_checked(const PipelineConfig& config, const Taxonomy& taxonomy,
                                      std::vector<LoadIssue>* rejected_out = nullptr) {
  LoadResult loaded = load_annotations(config.annotations, taxonomy);
  if (!loaded.rejected.empty() && !config.allow_partial) {
    const LoadIssue& first = loaded.rejected.front();
    throw DataError(config.annotations.string() + ": " + std::to_string(loaded.rejected.size()) +
                    " rejected line(s); first at line " + std::to_string(first.line) + ": " + first.message);
  }
  if (rejected_out) *rejected_out = std::move(loaded.rejected);
  return std::move(loaded.records);
}

}  // namespace

IngestSummary run_ingest(const PipelineConfig& config) {
  const Taxonomy taxonomy = load_taxonomy(config.taxonomy);
  IngestSummary summary;
  LoadResult loaded = load_annotations(config.annotations, taxonomy);
  summary.rejected = std::move(loaded.rejected);
  summary.records = std::move(loaded.records);
  if (summary.records.empty()) throw DataError(config.annotations.string() + ": no valid records");
  summary.stats = dataset_stats(summary.records);
  return summary;
}

BuildSummary run_build_index(const PipelineConfig& config) {
  config.validate();
  const Taxonomy taxonomy = load_taxonomy(config.taxonomy);
  const std::vector<ImageRecord> records = load_checked(config, taxonomy);
  const EmbeddedInstances gallery = embed_instances(records, config);
  const std::size_t n = gallery.entries.size();
  const std::size_t need = std::max(config.nlist, config.ksub);
  if (n == 0) throw DataError("build-index: the gallery has no annotated instances");
  if (n < need) {
    throw DataError("build-index: " + std::to_string(n) + " gallery vectors, need at least " + std::to_string(need) +
                    " (max of nlist and ksub)");
  }
  IvfPqParams params{config.nlist, config.m, config.ksub, config.seed, config.kmeans_iters};
  const IvfPqIndex index = IvfPqIndex::build(gallery.vectors, gallery.dims, params);
  save_index(index, config.index);
  save_gallery_labels(gallery.entries, config.labels_path());
  return {index.count(), index.coarse_distortion(), index.pq_distortion()};
}

AddSummary run_add(const PipelineConfig& config) {
  IvfPqIndex index = load_index(config.index);
  std::vector<GalleryEntry> entries = load_gallery_labels(config.labels_path());
  const Taxonomy taxonomy = load_taxonomy(config.taxonomy);
  const std::vector<ImageRecord> records = load_checked(config, taxonomy);

  VectorId next = 0;
  for (const GalleryEntry& e : entries) next = std::max(next, e.id + 1);
  const EmbeddedInstances added = embed_instances(records, config, next);
  if (added.dims != index.dim()) {
    throw DataError("add: embedding has " + std::to_string(added.dims) + " dims but the index expects " +
                    std::to_string(index.dim()));
  }
  for (std::size_t i = 0; i < added.entries.size(); ++i) {
    index.add(added.entries[i].id, std::span<const float>(added.vectors).subspan(i * added.dims, added.dims));
  }
  entries.insert(entries.end(), added.entries.begin(), added.entries.end());
  save_index(index, config.index);
  save_gallery_labels(entries, config.labels_path());
  return {added.entries.size(), index.count(), next};
}

LabelId vote_logo(std::span<const Neighbor> neighbors, const std::map<VectorId, LabelTriple>& labels) {
  if (neighbors.empty()) throw std::invalid_argument("vote_logo: no neighbors");
  std::map<LabelId, std::pair<std::size_t, std::size_t>> tally;  // logo -> (votes, first rank)
  for (std::size_t rank = 0; rank < neighbors.size(); ++rank) {
    auto it = labels.find(neighbors[rank].id);
    if (it == labels.end()) throw DataError("vote_logo: no label for id " + std::to_string(neighbors[rank].id));
    auto [entry, inserted] = tally.try_emplace(it->second.logo_id, 0, rank);
    ++entry->second.first;
  }
  LabelId best = 0;
  std::size_t best_votes = 0;
  std::size_t best_rank = 0;
  for (const auto& [logo, v] : tally) {
    if (v.first > best_votes || (v.first == best_votes && v.second < best_rank)) {
      best = logo;
      best_votes = v.first;
      best_rank = v.second;
    }
  }
  return best;
}

Recognizer::Recognizer(const PipelineConfig& config)
    : config_(config),
      index_(load_index(config.index)),
      taxonomy_(load_taxonomy(config.taxonomy)),
      embedder_(make_embedder(config)) {
  config_.validate();
  if (index_.count() == 0) throw DataError("search: the index is empty");
  for (const GalleryEntry& e : load_gallery_labels(config.labels_path())) labels_[e.id] = e.label;
  if (embedder_->dims() != index_.dim()) {
    throw DataError("search: embedder produces " + std::to_string(embedder_->dims()) + " dims but the index has " +
                    std::to_string(index_.dim()));
  }
}

RecognitionResult Recognizer::recognize_embedding(std::span<const float> embedding, const std::string& query_id) const {
  RecognitionResult result;
  result.query_id = query_id;
  const std::size_t nprobe = std::min(config_.nprobe, index_.nlist());
  result.neighbors = index_.search(embedding, config_.top_k, nprobe);
  result.truncated = result.neighbors.size() < config_.top_k;
  if (result.neighbors.empty()) throw DataError("search: no neighbors found in the probed lists");
  const LabelId logo = vote_logo(result.neighbors, labels_);
  const auto triple = taxonomy_.resolve(logo);
  if (!triple) throw DataError("search: predicted logo " + std::to_string(logo) + " is not in the taxonomy");
  result.predicted = *triple;
  return result;
}

RecognitionResult Recognizer::recognize(const GrayImage& image, const Box& box, const std::string& query_id) const {
  const Embedding e = embedder_->embed(crop_patch(image, box, config_.patch_size));
  const std::vector<float> v = e.as_floats();
  return recognize_embedding(v, query_id);
}

EvalReport run_eval(const PipelineConfig& config) {
  EvalOptions options;
  options.confidence_threshold = config.confidence_threshold;
  if (!config.iou_thresholds.empty()) options.iou_thresholds = config.iou_thresholds;
  options.level = config.eval_level;

  std::vector<Detection> detections = load_detections(config.results);
  std::vector<GroundTruth> ground_truth;
  if (!config.taxonomy.empty()) {
    const Taxonomy taxonomy = load_taxonomy(config.taxonomy);
    resolve_labels(detections, taxonomy);
    ground_truth = ground_truth_from_records(load_checked(config, taxonomy));
  } else {
    throw DataError("eval: a taxonomy file is required to validate ground truth");
  }
  return evaluate(detections, ground_truth, options);
}

QcSummary run_qc(const std::array<std::filesystem::path, 3>& annotator_files, const Taxonomy& taxonomy) {
  std::array<std::vector<ImageRecord>, 3> sets;
  for (std::size_t a = 0; a < 3; ++a) {
    LoadResult loaded = load_annotations(annotator_files[a], taxonomy);
    if (!loaded.rejected.empty()) {
      throw DataError(annotator_files[a].string() + ": line " + std::to_string(loaded.rejected.front().line) + ": " +
                      loaded.rejected.front().message);
    }
    sets[a] = std::move(loaded.records);
  }
  std::vector<std::string> order;
  std::array<std::unordered_map<std::string, const ImageRecord*>, 3> by_id;
  for (std::size_t a = 0; a < 3; ++a) {
    for (const ImageRecord& rec : sets[a]) {
      if (by_id[0].count(rec.image_id) + by_id[1].count(rec.image_id) + by_id[2].count(rec.image_id) == 0) {
        order.push_back(rec.image_id);
      }
      by_id[a][rec.image_id] = &rec;
    }
  }
  QcSummary summary;
  for (const std::string& id : order) {
    std::array<std::vector<InstanceAnnotation>, 3> candidates;
    const ImageRecord* any = nullptr;
    for (std::size_t a = 0; a < 3; ++a) {
      auto it = by_id[a].find(id);
      if (it == by_id[a].end()) continue;
      candidates[a] = it->second->annotations;
      if (!any) any = it->second;
    }
    ImageRecord chosen{id, any->width, any->height, {}};
    QcResult result;
    if (candidates[0].empty() && candidates[1].empty() && candidates[2].empty()) {
      result.chosen = 0;
    } else {
      result = qc_consensus(candidates);
      chosen.annotations = candidates[result.chosen];
    }
    summary.decisions.push_back({id, result});
    summary.consensus.push_back(std::move(chosen));
  }
  return summary;
}

}  // namespace brandnet
