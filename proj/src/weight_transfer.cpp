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

#include "brandnet/weight_transfer.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "binary_io.hpp"
#include "brandnet/error.hpp"
#include "text_io.hpp"

namespace brandnet {

TransferNet::TransferNet(std::size_t cls_dim, std::size_t det_dim, std::size_t hidden_dim, std::size_t seg_dim,
                         double alpha)
    : cls_dim_(cls_dim),
      det_dim_(det_dim),
      hidden_dim_(hidden_dim),
      seg_dim_(seg_dim),
      alpha_(alpha),
      w1_(hidden_dim * (cls_dim + det_dim), 0.0),
      b1_(hidden_dim, 0.0),
      w2_(seg_dim * hidden_dim, 0.0),
      b2_(seg_dim, 0.0) {
  if (cls_dim + det_dim == 0 || hidden_dim == 0 || seg_dim == 0) {
    throw std::invalid_argument("TransferNet: all dimensions must be positive");
  }
  if (!std::isfinite(alpha)) throw std::invalid_argument("TransferNet: alpha must be finite");
}

TransferNet TransferNet::random(std::size_t cls_dim, std::size_t det_dim, std::size_t hidden_dim,
                                std::size_t seg_dim, double alpha, std::uint64_t seed) {
  TransferNet net(cls_dim, det_dim, hidden_dim, seg_dim, alpha);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> layer1(0.0, 1.0 / std::sqrt(static_cast<double>(net.input_dim())));
  std::normal_distribution<double> layer2(0.0, 1.0 / std::sqrt(static_cast<double>(hidden_dim)));
  for (double& w : net.w1_) w = layer1(rng);
  for (double& w : net.w2_) w = layer2(rng);
  return net;
}

std::size_t TransferNet::num_parameters() const { return w1_.size() + b1_.size() + w2_.size() + b2_.size(); }

std::vector<double> TransferNet::parameters() const {
  std::vector<double> flat;
  flat.reserve(num_parameters());
  for (const auto* part : {&w1_, &b1_, &w2_, &b2_}) flat.insert(flat.end(), part->begin(), part->end());
  return flat;
}

void TransferNet::set_parameters(std::span<const double> flat) {
  if (flat.size() != num_parameters()) throw std::invalid_argument("TransferNet: parameter count mismatch");
  std::size_t pos = 0;
  for (auto* part : {&w1_, &b1_, &w2_, &b2_}) {
    std::copy(flat.begin() + pos, flat.begin() + pos + part->size(), part->begin());
    pos += part->size();
  }
}

namespace {

struct Activations {
  std::vector<double> input;
  std::vector<double> pre;     // W1 x + b1
  std::vector<double> hidden;  // act(pre)
  std::vector<double> output;
};

Activations run_forward(const TransferNet& net, std::span<const double> w_cls, std::span<const double> w_det) {
  if (w_cls.size() != net.cls_dim() || w_det.size() != net.det_dim()) {
    throw std::invalid_argument("TransferNet: expected inputs of size " + std::to_string(net.cls_dim()) + " + " +
                                std::to_string(net.det_dim()) + ", got " + std::to_string(w_cls.size()) + " + " +
                                std::to_string(w_det.size()));
  }
  Activations a;
  a.input.reserve(net.input_dim());
  a.input.insert(a.input.end(), w_cls.begin(), w_cls.end());
  a.input.insert(a.input.end(), w_det.begin(), w_det.end());

  const std::size_t in = net.input_dim();
  a.pre.assign(net.b1().begin(), net.b1().end());
  a.hidden.resize(net.hidden_dim());
  for (std::size_t h = 0; h < net.hidden_dim(); ++h) {
    for (std::size_t i = 0; i < in; ++i) a.pre[h] += net.w1()[h * in + i] * a.input[i];
    a.hidden[h] = a.pre[h] > 0.0 ? a.pre[h] : net.alpha() * a.pre[h];
  }
  a.output.assign(net.b2().begin(), net.b2().end());
  for (std::size_t o = 0; o < net.seg_dim(); ++o) {
    for (std::size_t h = 0; h < net.hidden_dim(); ++h) a.output[o] += net.w2()[o * net.hidden_dim() + h] * a.hidden[h];
  }
  return a;
}

}  // namespace

std::vector<double> TransferNet::forward(std::span<const double> w_cls, std::span<const double> w_det) const {
  return run_forward(*this, w_cls, w_det).output;
}

TransferGradient transfer_gradient(const TransferNet& net, std::span<const TransferSample> batch) {
  if (batch.empty()) throw std::invalid_argument("transfer_gradient: empty batch");
  const std::size_t in = net.input_dim();
  const std::size_t hid = net.hidden_dim();
  const std::size_t out = net.seg_dim();
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  std::vector<double> gw1(net.w1().size(), 0.0), gb1(hid, 0.0), gw2(net.w2().size(), 0.0), gb2(out, 0.0);
  std::vector<double> d_out(out), d_pre(hid);
  TransferGradient g;
  for (const TransferSample& s : batch) {
    if (s.w_seg.size() != out) throw std::invalid_argument("transfer_gradient: target size mismatch");
    const Activations a = run_forward(net, s.w_cls, s.w_det);
    for (std::size_t o = 0; o < out; ++o) {
      const double r = a.output[o] - s.w_seg[o];
      g.loss += 0.5 * r * r * inv_n;
      d_out[o] = r * inv_n;
    }
    for (std::size_t o = 0; o < out; ++o) {
      gb2[o] += d_out[o];
      for (std::size_t h = 0; h < hid; ++h) gw2[o * hid + h] += d_out[o] * a.hidden[h];
    }
    for (std::size_t h = 0; h < hid; ++h) {
      double back = 0.0;
      for (std::size_t o = 0; o < out; ++o) back += net.w2()[o * hid + h] * d_out[o];
      d_pre[h] = back * (a.pre[h] > 0.0 ? 1.0 : net.alpha());
      gb1[h] += d_pre[h];
      for (std::size_t i = 0; i < in; ++i) gw1[h * in + i] += d_pre[h] * a.input[i];
    }
  }
  g.gradient.reserve(net.num_parameters());
  for (const auto* part : {&gw1, &gb1, &gw2, &gb2}) g.gradient.insert(g.gradient.end(), part->begin(), part->end());
  return g;
}

TransferTrainResult train_transfer(TransferNet net, std::span<const TransferSample> dataset,
                                   const TransferTrainOptions& options) {
  if (options.steps == 0) throw std::invalid_argument("train_transfer: steps must be >= 1");
  if (!(options.learning_rate >= 0.0)) throw std::invalid_argument("train_transfer: learning rate must be >= 0");
  if (dataset.empty()) throw std::invalid_argument("train_transfer: empty dataset");

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, dataset.size() - 1);
  const bool full_batch = options.batch_size == 0 || options.batch_size >= dataset.size();
  std::vector<TransferSample> minibatch;

  TransferTrainResult result{net, {}, 0.0};
  result.loss_trace.reserve(options.steps);
  std::vector<double> params = net.parameters();
  for (std::size_t step = 0; step < options.steps; ++step) {
    std::span<const TransferSample> batch = dataset;
    if (!full_batch) {
      minibatch.clear();
      for (std::size_t b = 0; b < options.batch_size; ++b) minibatch.push_back(dataset[pick(rng)]);
      batch = minibatch;
    }
    const TransferGradient g = transfer_gradient(net, batch);
    if (!std::isfinite(g.loss)) {
      throw std::runtime_error("train_transfer: loss became non-finite at step " + std::to_string(step) +
                               " (last finite loss " +
                               (result.loss_trace.empty() ? std::string("n/a")
                                                          : text::format_double(result.loss_trace.back())) +
                               "); lower the learning rate");
    }
    result.loss_trace.push_back(g.loss);
    if (options.learning_rate > 0.0) {
      for (std::size_t p = 0; p < params.size(); ++p) params[p] -= options.learning_rate * g.gradient[p];
      net.set_parameters(params);
    }
  }
  result.final_loss = transfer_gradient(net, dataset).loss;
  if (!std::isfinite(result.final_loss)) {
    throw std::runtime_error("train_transfer: final loss is non-finite; lower the learning rate");
  }
  result.net = std::move(net);
  return result;
}

namespace {
constexpr char kTransferMagic[4] = {'O', 'B', 'T', 'N'};
constexpr std::uint32_t kTransferVersion = 1;
}  // namespace

void save_transfer_net(const TransferNet& net, const std::filesystem::path& path) {
  binary::Writer w;
  w.bytes(std::string_view(kTransferMagic, 4));
  w.u32(kTransferVersion);
  w.u32(static_cast<std::uint32_t>(net.cls_dim()));
  w.u32(static_cast<std::uint32_t>(net.det_dim()));
  w.u32(static_cast<std::uint32_t>(net.hidden_dim()));
  w.u32(static_cast<std::uint32_t>(net.seg_dim()));
  w.f64(net.alpha());
  for (double v : net.parameters()) w.f64(v);
  text::write_file(path, w.data());
}

TransferNet load_transfer_net(const std::filesystem::path& path) {
  const std::string data = text::read_file(path);
  binary::Reader r(data);
  auto fail = [&](const std::string& why) -> TransferNet {
    throw DataError("bad transfer checkpoint " + path.string() + ": " + why);
  };
  std::string_view magic;
  if (!r.bytes(4, magic) || magic != std::string_view(kTransferMagic, 4)) return fail("bad magic");
  std::uint32_t version = 0, dims[4] = {};
  if (!r.u32(version)) return fail("truncated");
  if (version != kTransferVersion) return fail("unsupported version " + std::to_string(version));
  for (auto& d : dims) {
    if (!r.u32(d)) return fail("truncated");
  }
  double alpha = 0.0;
  if (!r.f64(alpha)) return fail("truncated");
  TransferNet net(dims[0], dims[1], dims[2], dims[3], alpha);
  if (r.remaining() != net.num_parameters() * 8) return fail("parameter block has the wrong size");
  std::vector<double> flat(net.num_parameters());
  for (double& v : flat) r.f64(v);
  net.set_parameters(flat);
  return net;
}

void save_loss_trace_csv(std::span<const double> trace, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "step,loss\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << text::format_double(trace[i]) << '\n';
  text::write_file(path, out.str());
}

}  // namespace brandnet
