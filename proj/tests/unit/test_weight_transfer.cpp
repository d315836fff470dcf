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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "brandnet/error.hpp"
#include "brandnet/weight_transfer.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace brandnet;

namespace {

std::vector<TransferSample> linear_dataset(std::size_t n, std::size_t dc, std::size_t dd, std::size_t ds,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  std::vector<double> A(ds * (dc + dd));
  for (double& v : A) v = g(rng) / std::sqrt(static_cast<double>(dc + dd));
  std::vector<TransferSample> data(n);
  for (auto& s : data) {
    s.w_cls.resize(dc);
    s.w_det.resize(dd);
    for (double& v : s.w_cls) v = g(rng);
    for (double& v : s.w_det) v = g(rng);
    s.w_seg.assign(ds, 0.0);
    for (std::size_t o = 0; o < ds; ++o) {
      for (std::size_t i = 0; i < dc; ++i) s.w_seg[o] += A[o * (dc + dd) + i] * s.w_cls[i];
      for (std::size_t i = 0; i < dd; ++i) s.w_seg[o] += A[o * (dc + dd) + dc + i] * s.w_det[i];
    }
  }
  return data;
}

}  // namespace

TEST(TransferNet, ZeroParametersGiveZero) {
  const TransferNet net(3, 2, 4, 5);
  const std::vector<double> c{1, 2, 3}, d{4, 5};
  for (double v : transfer_forward(net, c, d)) EXPECT_EQ(v, 0.0);
}

TEST(TransferNet, HandComputedLinearTwoByTwo) {
  TransferNet net(1, 1, 2, 2, 1.0);
  net.w1() = {1, 0, 0, 1};
  net.w2() = {2, 1, 0, 3};
  net.b2() = {0.5, -1};
  const std::vector<double> c{3}, d{-2};
  // hidden = (3, -2); out = (2*3 + 1*(-2) + 0.5, 3*(-2) - 1) = (4.5, -7)
  EXPECT_EQ(transfer_forward(net, c, d), (std::vector<double>{4.5, -7}));
}

TEST(TransferNet, LeakySlopeApplied) {
  TransferNet net(1, 0, 1, 1, 0.1);
  net.w1() = {1};
  net.w2() = {1};
  const std::vector<double> neg{-2}, none;
  EXPECT_DOUBLE_EQ(net.forward(neg, none)[0], -0.2);
}

TEST(TransferNet, SameThetaForEveryClass) {
  const TransferNet net = TransferNet::random(4, 2, 6, 3, 0.1, 1);
  const auto before = net.parameters();
  const std::vector<double> c1{1, 2, 3, 4}, d1{0, 1}, c2{-1, 0, 2, 5}, d2{3, 3};
  const auto a = transfer_forward(net, c1, d1);
  const auto b = apply_to_unseen_class(net, c2, d2);
  EXPECT_EQ(net.parameters(), before);
  EXPECT_EQ(transfer_forward(net, c1, d1), a);
  EXPECT_EQ(apply_to_unseen_class(net, c2, d2), transfer_forward(net, c2, d2));
  EXPECT_NE(a, b);
}

TEST(TransferNet, DimensionMismatchThrows) {
  const TransferNet net(2, 2, 3, 1);
  const std::vector<double> two{1, 2}, three{1, 2, 3};
  EXPECT_THROW(net.forward(three, two), std::invalid_argument);
  EXPECT_THROW(net.forward(two, three), std::invalid_argument);
  TransferNet mutable_net = net;
  EXPECT_THROW(mutable_net.set_parameters(std::vector<double>(net.num_parameters() + 1)), std::invalid_argument);
}

TEST(TransferGradient, ZeroAtExactFit) {
  const TransferNet net = TransferNet::random(2, 2, 3, 2, 0.1, 3);
  TransferSample s{{0.5, -1}, {2, 0.3}, {}};
  s.w_seg = net.forward(s.w_cls, s.w_det);
  const std::vector<TransferSample> batch{s};
  const TransferGradient g = transfer_gradient(net, batch);
  EXPECT_EQ(g.loss, 0.0);
  for (double v : g.gradient) EXPECT_EQ(v, 0.0);
}

TEST(TransferGradient, ScalarLinearByHand) {
  // 1-dim linear net f(x) = w2 * w1 * x; dL/dw1 = (f - t) * w2 * x.
  TransferNet net(1, 0, 1, 1, 1.0);
  net.w1() = {0.5};
  net.w2() = {2.0};
  const std::vector<TransferSample> batch{{{3.0}, {}, {1.0}}};
  const TransferGradient g = transfer_gradient(net, batch);
  const double f = 3.0, r = f - 1.0;
  EXPECT_DOUBLE_EQ(g.loss, 0.5 * r * r);
  EXPECT_DOUBLE_EQ(g.gradient[0], r * 2.0 * 3.0);  // w1
  EXPECT_DOUBLE_EQ(g.gradient[1], r * 2.0);        // b1
  EXPECT_DOUBLE_EQ(g.gradient[2], r * 1.5);        // w2, hidden = 1.5
  EXPECT_DOUBLE_EQ(g.gradient[3], r);              // b2
}

TEST(TransferGradient, MatchesFiniteDifferences) {
  const auto data = linear_dataset(6, 3, 2, 3, 5);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TransferNet net = TransferNet::random(3, 2, 4, 3, 0.1, seed);
    for (double& b : net.b1()) b = u(rng);
    if (oracle::near_kink(net, data, 1e-3)) continue;
    const auto g = transfer_gradient(net, data).gradient;
    const auto num = oracle::numeric_gradient(
        [&](const std::vector<double>& th) {
          TransferNet p = net;
          p.set_parameters(th);
          return transfer_gradient(p, data).loss;
        },
        net.parameters());
    std::size_t bad = 0;
    for (std::size_t i = 0; i < g.size(); ++i) bad += oracle::rel_err(g[i], num[i]) >= 1e-4;
    EXPECT_EQ(bad, 0u) << "seed " << seed;
  }
}

TEST(TransferGradient, EmptyBatchThrows) {
  const TransferNet net(1, 1, 1, 1);
  EXPECT_THROW(transfer_gradient(net, std::vector<TransferSample>{}), std::invalid_argument);
}

TEST(TrainTransfer, ConvergesOnLinearMap) {
  const auto data = linear_dataset(48, 5, 3, 4, 9);
  const TransferNet init = TransferNet::random(5, 3, 8, 4, 1.0, 2);
  TransferTrainOptions opt;
  opt.steps = 2000;
  opt.learning_rate = 0.05;
  const auto r = train_transfer(init, data, opt);
  EXPECT_LT(r.final_loss, 1e-4 * r.loss_trace.front());
  ASSERT_EQ(r.loss_trace.size(), 2000u);
  for (std::size_t i = 1; i < r.loss_trace.size(); ++i) EXPECT_LE(r.loss_trace[i], r.loss_trace[i - 1] * (1 + 1e-12) + 1e-20);  // rounding floor
}

TEST(TrainTransfer, ZeroLearningRateKeepsParameters) {
  const auto data = linear_dataset(8, 2, 2, 2, 1);
  const TransferNet init = TransferNet::random(2, 2, 3, 2, 0.1, 4);
  TransferTrainOptions opt;
  opt.steps = 10;
  opt.learning_rate = 0.0;
  EXPECT_EQ(train_transfer(init, data, opt).net.parameters(), init.parameters());
}

TEST(TrainTransfer, DeterministicWithMinibatches) {
  const auto data = linear_dataset(30, 2, 2, 2, 1);
  const TransferNet init = TransferNet::random(2, 2, 3, 2, 0.1, 4);
  TransferTrainOptions opt;
  opt.steps = 50;
  opt.batch_size = 5;
  opt.seed = 77;
  EXPECT_EQ(train_transfer(init, data, opt).loss_trace, train_transfer(init, data, opt).loss_trace);
}

TEST(TrainTransfer, DivergenceAborts) {
  const auto data = linear_dataset(8, 2, 2, 2, 1);
  const TransferNet init = TransferNet::random(2, 2, 3, 2, 1.0, 4);
  TransferTrainOptions opt;
  opt.steps = 500;
  opt.learning_rate = 50.0;
  EXPECT_THROW(train_transfer(init, data, opt), std::runtime_error);
}

TEST(TransferCheckpoint, RoundTripAndBadMagic) {
  const TransferNet net = TransferNet::random(3, 2, 4, 2, 0.1, 8);
  const fs::path p = fs::temp_directory_path() / "brandnet_ut_transfer.bin";
  save_transfer_net(net, p);
  EXPECT_EQ(load_transfer_net(p), net);
  {
    std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
    f.put('X');
  }
  EXPECT_THROW(load_transfer_net(p), DataError);
  fs::remove(p);
  const std::vector<double> trace{1.0, 0.5};
  const fs::path csv = fs::temp_directory_path() / "brandnet_ut_trace.csv";
  save_loss_trace_csv(trace, csv);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "step,loss");
  fs::remove(csv);
}
