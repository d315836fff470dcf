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

// Independent reference implementations used only by tests. They are kept
// deliberately naive so that they share no code paths with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "brandnet/box.hpp"
#include "brandnet/evaluation.hpp"
#include "brandnet/ivf_pq_index.hpp"
#include "brandnet/weight_transfer.hpp"

namespace brandnet::oracle {

inline double box_iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = (a.x2 - a.x1) * (a.y2 - a.y1) + (b.x2 - b.x1) * (b.y2 - b.y1) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

// Exact top-k by full sort of (distance, id) pairs.
inline SearchResult naive_top_k(const std::vector<float>& vectors, std::size_t dim, const std::vector<float>& query,
                                std::size_t k) {
  std::vector<std::pair<double, VectorId>> all;
  const std::size_t n = vectors.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double diff = static_cast<double>(vectors[i * dim + j]) - query[j];
      d += diff * diff;
    }
    all.emplace_back(d, i);
  }
  std::sort(all.begin(), all.end());
  SearchResult out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back({all[i].second, all[i].first});
  return out;
}

// O(n^2) suppression matrix, then a single pass.
inline std::set<std::size_t> brute_nms(const std::vector<Box>& boxes, const std::vector<double>& scores, double thr) {
  const std::size_t n = boxes.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (scores[order[j]] > scores[order[i]] ||
          (scores[order[j]] == scores[order[i]] && order[j] < order[i]))
        std::swap(order[i], order[j]);
  std::vector<std::vector<bool>> over(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) over[i][j] = box_iou(boxes[i], boxes[j]) > thr;
  std::vector<bool> dead(n, false);
  std::set<std::size_t> kept;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = order[a];
    if (dead[i]) continue;
    kept.insert(i);
    for (std::size_t b = a + 1; b < n; ++b)
      if (over[i][order[b]]) dead[order[b]] = true;
  }
  return kept;
}

// Central difference of a scalar function along every coordinate.
inline std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                            std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

// |a - b| / max(|a|, |b|, floor); the floor keeps near-zero gradients from
// turning rounding noise into large relative errors.
inline double rel_err(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// AP computed as sum over recall levels r_i of (r_i - r_{i-1}) * max
// precision at any recall >= r_i, evaluated by rescanning.
inline double reference_ap(const std::vector<bool>& tp, std::size_t num_gt) {
  if (num_gt == 0 || tp.empty()) return 0.0;
  std::vector<double> prec, rec;
  double hits = 0;
  for (std::size_t i = 0; i < tp.size(); ++i) {
    if (tp[i]) hits += 1;
    prec.push_back(hits / static_cast<double>(i + 1));
    rec.push_back(hits / static_cast<double>(num_gt));
  }
  double ap = 0, prev_r = 0;
  for (std::size_t i = 0; i < tp.size(); ++i) {
    if (!tp[i]) continue;
    double best = 0;
    for (std::size_t j = i; j < tp.size(); ++j) best = std::max(best, prec[j]);
    ap += (rec[i] - prev_r) * best;
    prev_r = rec[i];
  }
  return ap;
}

// From-scratch evaluator at one label level: threshold, per class sort,
// greedy match, AP, averaged over classes in the ground truth and over the
// given IoU thresholds.
inline double reference_map(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                            const std::vector<double>& thresholds, double conf, LabelLevel level) {
  std::set<LabelId> classes;
  for (const auto& g : gts) classes.insert(label_at(g.label, level));
  if (classes.empty()) return 0.0;
  double total = 0;
  for (LabelId c : classes) {
    std::vector<Detection> cd;
    for (const auto& d : dets)
      if (d.confidence >= conf && label_at(d.label, level) == c) cd.push_back(d);
    std::stable_sort(cd.begin(), cd.end(), [](const Detection& a, const Detection& b) { return a.confidence > b.confidence; });
    std::vector<GroundTruth> cg;
    for (const auto& g : gts)
      if (label_at(g.label, level) == c) cg.push_back(g);
    for (double thr : thresholds) {
      std::vector<bool> used(cg.size(), false), tp;
      for (const auto& d : cd) {
        int best = -1;
        double best_iou = -1;
        for (std::size_t j = 0; j < cg.size(); ++j) {
          if (used[j] || cg[j].image_id != d.image_id) continue;
          const double v = box_iou(d.box, cg[j].box);
          if (v >= thr && v > best_iou) {
            best_iou = v;
            best = static_cast<int>(j);
          }
        }
        if (best >= 0) used[best] = true;
        tp.push_back(best >= 0);
      }
      total += reference_ap(tp, cg.size());
    }
  }
  return total / (static_cast<double>(classes.size()) * thresholds.size());
}

// Largest number of (detection, ground truth) pairs with IoU >= thr that
// can be matched one-to-one, by enumerating every assignment.
inline std::size_t max_matching(const std::vector<Box>& dets, const std::vector<Box>& gts, double thr) {
  std::size_t best = 0;
  std::vector<bool> used(gts.size(), false);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t count) {
    if (i == dets.size()) {
      best = std::max(best, count);
      return;
    }
    rec(i + 1, count);
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (used[j] || box_iou(dets[i], gts[j]) < thr) continue;
      used[j] = true;
      rec(i + 1, count + 1);
      used[j] = false;
    }
  };
  rec(0, 0);
  return best;
}

// True when any hidden pre-activation lies within `margin` of the rectifier
// kink, where central differences are not valid.
inline bool near_kink(const TransferNet& net, const std::vector<TransferSample>& batch, double margin) {
  for (const auto& s : batch) {
    for (std::size_t h = 0; h < net.hidden_dim(); ++h) {
      double pre = net.b1()[h];
      for (std::size_t i = 0; i < net.cls_dim(); ++i) pre += net.w1()[h * net.input_dim() + i] * s.w_cls[i];
      for (std::size_t i = 0; i < net.det_dim(); ++i)
        pre += net.w1()[h * net.input_dim() + net.cls_dim() + i] * s.w_det[i];
      if (std::abs(pre) < margin) return true;
    }
  }
  return false;
}

}  // namespace brandnet::oracle
