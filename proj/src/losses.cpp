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

#include "brandnet/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brandnet::losses {

LossValue smooth_l1(double x) {
  const double ax = std::abs(x);
  if (ax < 1.0) return {0.5 * x * x, {x}};
  return {ax - 0.5, {x > 0.0 ? 1.0 : -1.0}};
}

LossValue binary_cross_entropy(double p, int label) {
  const double q = std::clamp(p, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  if (label == 1) return {-std::log(q), {-1.0 / q}};
  return {-std::log(1.0 - q), {1.0 / (1.0 - q)}};
}

LossValue softmax_cross_entropy(std::span<const double> logits, std::size_t label,
                                std::optional<std::span<const double>> weights) {
  if (label >= logits.size()) {
    throw std::invalid_argument("softmax_cross_entropy: label " + std::to_string(label) +
                                " out of range for " + std::to_string(logits.size()) + " classes");
  }
  if (weights && weights->size() != logits.size()) {
    throw std::invalid_argument("softmax_cross_entropy: weights size does not match logits");
  }
  const double w = weights ? (*weights)[label] : 1.0;
  const double top = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  for (double z : logits) denom += std::exp(z - top);
  const double log_denom = std::log(denom);

  LossValue out;
  out.value = w * (log_denom - (logits[label] - top));
  out.gradient.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double prob = std::exp(logits[i] - top - log_denom);
    out.gradient[i] = w * (prob - (i == label ? 1.0 : 0.0));
  }
  return out;
}

LossValue mask_bce(std::span<const double> pred, std::span<const int> target) {
  if (pred.size() != target.size()) throw std::invalid_argument("mask_bce: shape mismatch");
  if (pred.empty()) throw std::invalid_argument("mask_bce: empty mask");
  const double n = static_cast<double>(pred.size());
  LossValue out;
  out.gradient.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const LossValue px = binary_cross_entropy(pred[i], target[i]);
    out.value += px.value;
    out.gradient[i] = px.gradient[0] / n;
  }
  out.value /= n;
  return out;
}

LossValue box_regression_loss(std::span<const BoxDeltas> predicted, std::span<const BoxDeltas> target,
                              std::span<const char> positive) {
  if (predicted.size() != target.size() || predicted.size() != positive.size()) {
    throw std::invalid_argument("box_regression_loss: length mismatch");
  }
  const auto num_pos = static_cast<std::size_t>(std::count_if(positive.begin(), positive.end(),
                                                              [](char c) { return c != 0; }));
  LossValue out;
  out.gradient.assign(predicted.size() * 4, 0.0);
  if (num_pos == 0) return out;
  const double norm = 1.0 / static_cast<double>(num_pos);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (!positive[i]) continue;
    const double diffs[4] = {predicted[i].dx - target[i].dx, predicted[i].dy - target[i].dy,
                             predicted[i].dw - target[i].dw, predicted[i].dh - target[i].dh};
    for (int k = 0; k < 4; ++k) {
      const LossValue l = smooth_l1(diffs[k]);
      out.value += l.value * norm;
      out.gradient[i * 4 + k] = l.gradient[0] * norm;
    }
  }
  return out;
}

double anchor_refinement_loss(std::span<const double> objectness, std::span<const int> labels,
                              std::span<const BoxDeltas> predicted, std::span<const BoxDeltas> target) {
  if (objectness.size() != labels.size()) {
    throw std::invalid_argument("anchor_refinement_loss: objectness and labels differ in length");
  }
  double cls = 0.0;
  for (std::size_t i = 0; i < objectness.size(); ++i) {
    cls += binary_cross_entropy(objectness[i], labels[i]).value;
  }
  if (!objectness.empty()) cls /= static_cast<double>(objectness.size());
  std::vector<char> positive(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) positive[i] = labels[i] == 1;
  return cls + box_regression_loss(predicted, target, positive).value;
}

std::vector<double> inverse_frequency_weights(std::span<const std::size_t> class_counts) {
  std::size_t total = 0;
  std::size_t present = 0;
  for (std::size_t c : class_counts) {
    total += c;
    present += c > 0 ? 1 : 0;
  }
  std::vector<double> w(class_counts.size(), 0.0);
  for (std::size_t i = 0; i < class_counts.size(); ++i) {
    if (class_counts[i] > 0) {
      w[i] = static_cast<double>(total) / (static_cast<double>(present) * static_cast<double>(class_counts[i]));
    }
  }
  return w;
}

std::vector<std::string> stage_components(int stage) {
  switch (stage) {
    case 1:
      return {"rpn", "ar", "det"};
    case 2:
      return {"det", "mask"};
    case 3:
      return {"rpn", "ar", "det", "mt"};
    default:
      throw std::invalid_argument("compose_stage_loss: unknown stage " + std::to_string(stage));
  }
}

double compose_stage_loss(int stage, const std::map<std::string, double>& components,
                          const std::map<std::string, double>& coefficients) {
  double total = 0.0;
  for (const std::string& name : stage_components(stage)) {
    auto it = components.find(name);
    if (it == components.end()) {
      throw std::invalid_argument("compose_stage_loss: stage " + std::to_string(stage) +
                                  " is missing component '" + name + "'");
    }
    auto coef = coefficients.find(name);
    total += (coef == coefficients.end() ? 1.0 : coef->second) * it->second;
  }
  return total;
}

}  // namespace brandnet::losses
