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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brandnet/config.hpp"
#include "brandnet/dataset.hpp"
#include "brandnet/embedder.hpp"
#include "brandnet/evaluation.hpp"
#include "brandnet/ivf_pq_index.hpp"
#include "brandnet/taxonomy.hpp"

namespace brandnet {

// One indexed gallery instance. Stored next to the index as
//   id,image_id,type_id,brand_id,logo_id
struct GalleryEntry {
  VectorId id = 0;
  std::string image_id;
  LabelTriple label;
};

std::vector<GalleryEntry> load_gallery_labels(const std::filesystem::path& path);
void save_gallery_labels(std::span<const GalleryEntry> entries, const std::filesystem::path& path);

// <images>/<image_id>.pgm, falling back to .ppm.
std::filesystem::path image_path(const std::filesystem::path& images_dir, const std::string& image_id);

std::unique_ptr<Embedder> make_embedder(const PipelineConfig& config);

struct EmbeddedInstances {
  std::size_t dims = 0;
  std::vector<float> vectors;  // rows follow records / annotation order
  std::vector<GalleryEntry> entries;
  std::size_t zero_embeddings = 0;
};

// Crops and embeds every annotation, reading each image once. Work is split
// across config.threads workers; output order never depends on it.
EmbeddedInstances embed_instances(std::span<const ImageRecord> records, const PipelineConfig& config,
                                  VectorId first_id = 0);

struct IngestSummary {
  DatasetStats stats;
  std::vector<LoadIssue> rejected;
  std::vector<ImageRecord> records;
};

// Loads taxonomy + annotations and computes statistics over the accepted
// records; rejected lines are returned for the caller to report. Throws
// DataError when no record survives.
IngestSummary run_ingest(const PipelineConfig& config);

struct BuildSummary {
  std::size_t count = 0;
  double coarse_distortion = 0.0;
  double pq_distortion = 0.0;
};

// Embeds every annotated gallery instance, trains and fills an IVF-PQ
// index, then writes the index and its label sidecar.
BuildSummary run_build_index(const PipelineConfig& config);

struct AddSummary {
  std::size_t added = 0;
  std::size_t count = 0;
  VectorId first_id = 0;
};

// Appends the instances of `config.annotations` to an existing index with
// fresh ids; the quantizers are reused as they are.
AddSummary run_add(const PipelineConfig& config);

struct RecognitionResult {
  std::string query_id;
  SearchResult neighbors;
  LabelTriple predicted;
  bool truncated = false;  // fewer neighbors than requested were available
};

// Majority vote over neighbor logos. Ties go to the tied logo whose first
// occurrence ranks highest, so a nearest-neighbor label wins whenever it is
// among the tied ones. Throws std::invalid_argument on an empty list.
LabelId vote_logo(std::span<const Neighbor> neighbors, const std::map<VectorId, LabelTriple>& labels);

// Loaded index, labels and taxonomy for repeated queries.
class Recognizer {
 public:
  // Throws DataError when the index is empty or labels are missing.
  explicit Recognizer(const PipelineConfig& config);

  RecognitionResult recognize(const GrayImage& image, const Box& box, const std::string& query_id = "") const;
  RecognitionResult recognize_embedding(std::span<const float> embedding, const std::string& query_id = "") const;

  const IvfPqIndex& index() const { return index_; }
  const Taxonomy& taxonomy() const { return taxonomy_; }

 private:
  PipelineConfig config_;
  IvfPqIndex index_;
  Taxonomy taxonomy_;
  std::map<VectorId, LabelTriple> labels_;
  std::unique_ptr<Embedder> embedder_;
};

EvalReport run_eval(const PipelineConfig& config);

struct QcImageDecision {
  std::string image_id;
  QcResult result;
};

struct QcSummary {
  std::vector<ImageRecord> consensus;
  std::vector<QcImageDecision> decisions;
};

// Per image, keeps the annotation set of the annotator chosen by
// qc_consensus. Images missing from an annotator's file count as empty for
// that annotator.
QcSummary run_qc(const std::array<std::filesystem::path, 3>& annotator_files, const Taxonomy& taxonomy);

}  // namespace brandnet
