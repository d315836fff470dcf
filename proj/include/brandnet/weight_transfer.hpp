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
#include <filesystem>
#include <span>
#include <vector>

namespace brandnet {

// Class-agnostic weight transfer w_seg = W2 act(W1 [w_cls; w_det] + b1) + b2
// with a leaky rectifier of slope `alpha`. One parameter set serves every
// class, including classes never seen while training.
class TransferNet {
 public:
  TransferNet(std::size_t cls_dim, std::size_t det_dim, std::size_t hidden_dim, std::size_t seg_dim,
              double alpha = 0.1);

  // Gaussian initialisation with variance 1 / fan_in, biases zero.
  static TransferNet random(std::size_t cls_dim, std::size_t det_dim, std::size_t hidden_dim, std::size_t seg_dim,
                            double alpha, std::uint64_t seed);

  std::size_t cls_dim() const { return cls_dim_; }
  std::size_t det_dim() const { return det_dim_; }
  std::size_t input_dim() const { return cls_dim_ + det_dim_; }
  std::size_t hidden_dim() const { return hidden_dim_; }
  std::size_t seg_dim() const { return seg_dim_; }
  double alpha() const { return alpha_; }

  // Row-major (hidden x input) and (seg x hidden) weights.
  std::vector<double>& w1() { return w1_; }
  std::vector<double>& b1() { return b1_; }
  std::vector<double>& w2() { return w2_; }
  std::vector<double>& b2() { return b2_; }
  const std::vector<double>& w1() const { return w1_; }
  const std::vector<double>& b1() const { return b1_; }
  const std::vector<double>& w2() const { return w2_; }
  const std::vector<double>& b2() const { return b2_; }

  // All parameters flattened as [W1, b1, W2, b2].
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);
  std::size_t num_parameters() const;

  // Throws std::invalid_argument on dimension mismatch.
  std::vector<double> forward(std::span<const double> w_cls, std::span<const double> w_det) const;

  friend bool operator==(const TransferNet&, const TransferNet&) = default;

 private:
  std::size_t cls_dim_;
  std::size_t det_dim_;
  std::size_t hidden_dim_;
  std::size_t seg_dim_;
  double alpha_;
  std::vector<double> w1_, b1_, w2_, b2_;
};

struct TransferSample {
  std::vector<double> w_cls;
  std::vector<double> w_det;
  std::vector<double> w_seg;  // supervision target
};

inline std::vector<double> transfer_forward(const TransferNet& net, std::span<const double> w_cls,
                                            std::span<const double> w_det) {
  return net.forward(w_cls, w_det);
}

// Predicts segmentation weights for a class that had no mask supervision.
inline std::vector<double> apply_to_unseen_class(const TransferNet& net, std::span<const double> w_cls,
                                                 std::span<const double> w_det) {
  return net.forward(w_cls, w_det);
}

struct TransferGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // same layout as TransferNet::parameters()
};

// Loss 0.5 * mean_n ||f(x_n) - t_n||^2 and its analytic gradient.
// Throws std::invalid_argument on an empty batch.
TransferGradient transfer_gradient(const TransferNet& net, std::span<const TransferSample> batch);

struct TransferTrainOptions {
  std::size_t steps = 1000;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
  std::size_t batch_size = 0;  // 0 = full batch
};

struct TransferTrainResult {
  TransferNet net;
  std::vector<double> loss_trace;  // loss before each update
  double final_loss = 0.0;         // full-dataset loss after the last update
};

// Plain gradient descent. Throws std::runtime_error with the step number
// when the loss becomes non-finite.
TransferTrainResult train_transfer(TransferNet net, std::span<const TransferSample> dataset,
                                   const TransferTrainOptions& options);

// Checkpoint: "OBTN", version u32, four u32 dims, f64 alpha, then W1, b1,
// W2, b2 as little-endian f64 row-major.
void save_transfer_net(const TransferNet& net, const std::filesystem::path& path);
TransferNet load_transfer_net(const std::filesystem::path& path);

void save_loss_trace_csv(std::span<const double> trace, const std::filesystem::path& path);

}  // namespace brandnet
