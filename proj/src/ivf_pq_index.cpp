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

#include "brandnet/ivf_pq_index.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace brandnet {

namespace {

bool ranks_before(const Neighbor& a, const Neighbor& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.id < b.id;
}

// Bounded max-heap keeping the k best neighbors.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) {}

  void push(const Neighbor& n) {
    if (k_ == 0) return;
    if (heap_.size() < k_) {
      heap_.push_back(n);
      std::push_heap(heap_.begin(), heap_.end(), ranks_before);
    } else if (ranks_before(n, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), ranks_before);
      heap_.back() = n;
      std::push_heap(heap_.begin(), heap_.end(), ranks_before);
    }
  }

  SearchResult sorted() && {
    std::sort(heap_.begin(), heap_.end(), ranks_before);
    return std::move(heap_);
  }

 private:
  std::size_t k_;
  std::vector<Neighbor> heap_;
};

}  // namespace

SearchResult exhaustive_search(std::span<const float> vectors, std::size_t dim, std::span<const float> query,
                               std::size_t k, std::span<const VectorId> ids) {
  if (dim == 0 || vectors.size() % dim != 0) throw std::invalid_argument("exhaustive_search: bad gallery shape");
  if (query.size() != dim) throw std::invalid_argument("exhaustive_search: query dimension mismatch");
  const std::size_t n = vectors.size() / dim;
  if (!ids.empty() && ids.size() != n) throw std::invalid_argument("exhaustive_search: ids size mismatch");
  TopK top(k);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = static_cast<double>(vectors[i * dim + j]) - static_cast<double>(query[j]);
      acc += d * d;
    }
    top.push({ids.empty() ? static_cast<VectorId>(i) : ids[i], acc});
  }
  return std::move(top).sorted();
}

IvfPqIndex::IvfPqIndex(std::size_t dim, std::vector<float> coarse_centroids, ProductQuantizer pq)
    : dim_(dim), coarse_(std::move(coarse_centroids)), pq_(std::move(pq)) {
  if (dim == 0 || coarse_.empty() || coarse_.size() % dim != 0) {
    throw std::invalid_argument("IvfPqIndex: coarse centroids do not match dim");
  }
  if (pq_.dim() != dim) throw std::invalid_argument("IvfPqIndex: product quantizer dim mismatch");
  lists_.resize(coarse_.size() / dim);
}

IvfPqIndex IvfPqIndex::train(std::span<const float> vectors, std::size_t dim, const IvfPqParams& params) {
  if (dim == 0 || vectors.size() % dim != 0) throw std::invalid_argument("ivf train: bad vector shape");
  const std::size_t n = vectors.size() / dim;
  const std::size_t need = std::max(params.nlist, params.ksub);
  if (params.nlist == 0) throw std::invalid_argument("ivf train: nlist must be >= 1");
  if (n < need) {
    throw std::invalid_argument("ivf train: need at least " + std::to_string(need) +
                                " vectors (max of nlist and ksub), got " + std::to_string(n));
  }
  if (params.m == 0 || dim % params.m != 0) {
    throw std::invalid_argument("ivf train: dim " + std::to_string(dim) + " is not divisible by m " +
                                std::to_string(params.m));
  }
  KMeansOptions opts{params.kmeans_iters, params.seed, 1e-6};
  KMeansModel coarse = kmeans_fit(vectors, dim, params.nlist, opts);

  std::vector<float> residuals(vectors.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = nearest_centroid(coarse.centroids, dim, &vectors[i * dim]);
    for (std::size_t j = 0; j < dim; ++j) {
      residuals[i * dim + j] = vectors[i * dim + j] - coarse.centroids[l * dim + j];
    }
  }
  // Offset keeps the residual codebook seeds disjoint from the coarse seed.
  KMeansOptions pq_opts{params.kmeans_iters, params.seed + 1000003, 1e-6};
  ProductQuantizer pq = ProductQuantizer::train(residuals, dim, params.m, params.ksub, pq_opts);
  IvfPqIndex index(dim, std::move(coarse.centroids), std::move(pq));
  index.coarse_distortion_ = coarse.distortion;
  return index;
}

IvfPqIndex IvfPqIndex::build(std::span<const float> vectors, std::size_t dim, const IvfPqParams& params,
                             std::span<const VectorId> ids) {
  IvfPqIndex index = train(vectors, dim, params);
  const std::size_t n = vectors.size() / dim;
  if (!ids.empty() && ids.size() != n) throw std::invalid_argument("ivf build: ids size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    index.add(ids.empty() ? static_cast<VectorId>(i) : ids[i], vectors.subspan(i * dim, dim));
  }
  return index;
}

std::size_t IvfPqIndex::assign(std::span<const float> vector) const {
  if (vector.size() != dim_) throw std::invalid_argument("ivf: vector dimension mismatch");
  return nearest_centroid(coarse_, dim_, vector.data());
}

std::vector<float> IvfPqIndex::residual(std::span<const float> vector, std::size_t list) const {
  std::vector<float> r(dim_);
  for (std::size_t j = 0; j < dim_; ++j) r[j] = vector[j] - coarse_[list * dim_ + j];
  return r;
}

void IvfPqIndex::add(VectorId id, std::span<const float> vector) {
  if (vector.size() != dim_) {
    throw std::invalid_argument("ivf add: expected dimension " + std::to_string(dim_) + ", got " +
                                std::to_string(vector.size()));
  }
  if (ids_.contains(id)) throw std::invalid_argument("ivf add: duplicate id " + std::to_string(id));
  const std::size_t l = assign(vector);
  const std::vector<float> r = residual(vector, l);
  InvertedList& list = lists_[l];
  const std::size_t offset = list.codes.size();
  list.codes.resize(offset + pq_.code_size());
  pq_.encode(r, std::span<std::uint8_t>(list.codes.data() + offset, pq_.code_size()));
  list.ids.push_back(id);
  ids_.insert(id);
  ++count_;
}

void IvfPqIndex::restore_list(std::size_t l, InvertedList list) {
  if (list.codes.size() != list.ids.size() * pq_.code_size()) {
    throw std::invalid_argument("ivf restore_list: codes do not match ids");
  }
  for (VectorId id : lists_.at(l).ids) ids_.erase(id);
  count_ -= lists_[l].ids.size();
  for (VectorId id : list.ids) {
    if (!ids_.insert(id).second) throw std::invalid_argument("ivf restore_list: duplicate id " + std::to_string(id));
  }
  count_ += list.ids.size();
  lists_[l] = std::move(list);
}

SearchResult IvfPqIndex::search(std::span<const float> query, std::size_t k, std::size_t nprobe) const {
  if (query.size() != dim_) {
    throw std::invalid_argument("ivf search: expected dimension " + std::to_string(dim_) + ", got " +
                                std::to_string(query.size()));
  }
  if (nprobe == 0 || nprobe > nlist()) {
    throw std::invalid_argument("ivf search: nprobe must lie in [1, " + std::to_string(nlist()) + "]");
  }
  if (count_ == 0 || k == 0) return {};

  std::vector<std::pair<float, std::size_t>> coarse(nlist());
  for (std::size_t l = 0; l < nlist(); ++l) coarse[l] = {l2_sqr(query.data(), &coarse_[l * dim_], dim_), l};
  std::partial_sort(coarse.begin(), coarse.begin() + static_cast<std::ptrdiff_t>(nprobe), coarse.end());

  TopK top(k);
  const std::size_t cs = pq_.code_size();
  for (std::size_t p = 0; p < nprobe; ++p) {
    const std::size_t l = coarse[p].second;
    const InvertedList& list = lists_[l];
    if (list.ids.empty()) continue;
    const DistanceTable table = pq_.distance_table(residual(query, l));
    for (std::size_t e = 0; e < list.ids.size(); ++e) {
      const std::span<const std::uint8_t> code(list.codes.data() + e * cs, cs);
      top.push({list.ids[e], adc_distance(table, code)});
    }
  }
  return std::move(top).sorted();
}

}  // namespace brandnet
