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
#include <span>
#include <unordered_set>
#include <vector>

#include "brandnet/kmeans.hpp"
#include "brandnet/product_quantizer.hpp"

namespace brandnet {

using VectorId = std::uint64_t;

struct Neighbor {
  VectorId id = 0;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Ranked by (distance asc, id asc); at most k entries.
using SearchResult = std::vector<Neighbor>;

// Exact squared-distance top-k over a flat gallery (ids default to row
// numbers). The reference every approximate search is measured against.
SearchResult exhaustive_search(std::span<const float> vectors, std::size_t dim, std::span<const float> query,
                               std::size_t k, std::span<const VectorId> ids = {});

struct IvfPqParams {
  std::size_t nlist = 256;
  std::size_t m = 16;
  std::size_t ksub = 256;
  std::uint64_t seed = 0;
  std::size_t kmeans_iters = 25;
};

struct InvertedList {
  std::vector<VectorId> ids;
  std::vector<std::uint8_t> codes;  // ids.size() x code_size

  friend bool operator==(const InvertedList&, const InvertedList&) = default;
};

// Inverted file over a coarse k-means quantizer; each list stores PQ codes
// of residuals (vector - coarse centroid). Searches are const and may run
// concurrently; add() needs exclusive access.
class IvfPqIndex {
 public:
  // Empty index over already trained quantizers.
  IvfPqIndex(std::size_t dim, std::vector<float> coarse_centroids, ProductQuantizer pq);

  // Trains the coarse quantizer and the residual codebook but adds nothing.
  // Throws std::invalid_argument when fewer than max(nlist, ksub) vectors
  // are supplied.
  static IvfPqIndex train(std::span<const float> vectors, std::size_t dim, const IvfPqParams& params);

  // train() followed by add() of every vector. Ids default to 0..n-1.
  static IvfPqIndex build(std::span<const float> vectors, std::size_t dim, const IvfPqParams& params,
                          std::span<const VectorId> ids = {});

  // Encodes and appends one vector; no retraining. Throws
  // std::invalid_argument on a dimension mismatch or a duplicate id.
  void add(VectorId id, std::span<const float> vector);

  // Probes the nprobe lists with the nearest coarse centroids and ranks
  // their entries by ADC distance to the query residual. Throws
  // std::invalid_argument on a dimension mismatch or nprobe outside
  // [1, nlist].
  SearchResult search(std::span<const float> query, std::size_t k, std::size_t nprobe) const;

  std::size_t dim() const { return dim_; }
  std::size_t nlist() const { return lists_.size(); }
  std::size_t count() const { return count_; }
  bool contains(VectorId id) const { return ids_.contains(id); }

  const std::vector<float>& coarse_centroids() const { return coarse_; }
  std::span<const float> coarse_centroid(std::size_t list) const { return {coarse_.data() + list * dim_, dim_}; }
  const ProductQuantizer& pq() const { return pq_; }
  const InvertedList& list(std::size_t l) const { return lists_.at(l); }

  std::size_t assign(std::span<const float> vector) const;
  std::vector<float> residual(std::span<const float> vector, std::size_t list) const;

  // Distortions measured while training; 0 for loaded or hand-built indexes.
  double coarse_distortion() const { return coarse_distortion_; }
  double pq_distortion() const { return pq_.training_distortion(); }

  // Used by deserialization to install a list verbatim.
  void restore_list(std::size_t l, InvertedList list);

  friend bool operator==(const IvfPqIndex& a, const IvfPqIndex& b) {
    return a.dim_ == b.dim_ && a.coarse_ == b.coarse_ && a.pq_ == b.pq_ && a.lists_ == b.lists_ &&
           a.count_ == b.count_;
  }

 private:
  std::size_t dim_;
  std::vector<float> coarse_;
  ProductQuantizer pq_;
  std::vector<InvertedList> lists_;
  std::size_t count_ = 0;
  std::unordered_set<VectorId> ids_;
  double coarse_distortion_ = 0.0;
};

}  // namespace brandnet
