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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "brandnet/dataset.hpp"
#include "brandnet/error.hpp"
#include "brandnet/taxonomy.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace brandnet;

namespace {

Taxonomy small_taxonomy() {
  Taxonomy t;
  t.add(0, 10, 1);
  t.add(1, 10, 1);
  t.add(2, 11, 2);
  return t;
}

InstanceAnnotation ann(double x, double y, double w, double h, LabelId logo = 0) {
  return {{x, y, w, h}, {1, 10, logo}};
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("brandnet_ut_" + name); }

}  // namespace

TEST(Taxonomy, ResolvesEveryLogoToOneBrandAndType) {
  const Taxonomy t = small_taxonomy();
  for (const auto& [logo, brand] : t.logo_to_brand()) {
    const auto r = t.resolve(logo);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->brand_id, brand);
    EXPECT_EQ(r->type_id, *t.type_of_brand(brand));
    EXPECT_TRUE(t.consistent(*r));
  }
  EXPECT_FALSE(t.resolve(99));
  EXPECT_EQ(t.num_types(), 2u);
}

TEST(Taxonomy, RejectsSecondParent) {
  Taxonomy t = small_taxonomy();
  EXPECT_NO_THROW(t.add(0, 10, 1));
  EXPECT_THROW(t.add(0, 11, 2), std::invalid_argument);
  EXPECT_THROW(t.add(5, 10, 2), std::invalid_argument);
}

TEST(Taxonomy, FileRoundTrip) {
  Taxonomy t = small_taxonomy();
  t.set_logo_name(0, "swoosh");
  t.set_brand_name(10, "acme");
  const auto path = temp_file("tax.csv");
  save_taxonomy(t, path);
  const Taxonomy back = load_taxonomy(path);
  EXPECT_EQ(back.logo_to_brand(), t.logo_to_brand());
  EXPECT_EQ(back.brand_to_type(), t.brand_to_type());
  EXPECT_EQ(back.logo_name(0), "swoosh");
  EXPECT_EQ(back.brand_name(10), "acme");
  fs::remove(path);
}

TEST(Annotations, SingleValidRecord) {
  const auto r = parse_annotations("img,100,80,1,2,30,40,1,10,0\n", small_taxonomy());
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_TRUE(r.rejected.empty());
  EXPECT_EQ(r.records[0].annotations[0], ann(1, 2, 30, 40));
}

TEST(Annotations, InconsistentBrandRejectedWithLine) {
  const auto r = parse_annotations("a,100,100,0,0,10,10,1,10,0\nb,100,100,0,0,10,10,2,11,0\n", small_taxonomy());
  ASSERT_EQ(r.rejected.size(), 1u);
  EXPECT_EQ(r.rejected[0].line, 2u);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].image_id, "a");
}

TEST(Annotations, ThreeLinesOneMalformed) {
  const auto r = parse_annotations(
      "a,100,100,0,0,10,10,1,10,0\n"
      "b,100,100,0,0,abc,10,1,10,1\n"
      "c,100,100,5,5,10,10,2,11,2\n",
      small_taxonomy());
  EXPECT_EQ(r.records.size(), 2u);
  ASSERT_EQ(r.rejected.size(), 1u);
  EXPECT_EQ(r.rejected[0].line, 2u);
}

TEST(Annotations, NonPositiveSizeRejected) {
  const auto r = parse_annotations("a,100,100,0,0,0,10,1,10,0\na,100,100,0,0,10,-1,1,10,0\n", small_taxonomy());
  EXPECT_EQ(r.rejected.size(), 2u);
  EXPECT_TRUE(r.records.empty());
}

TEST(Annotations, BrandFreeImageAndClipping) {
  const auto r = parse_annotations("empty,64,64\nc,50,50,40,-5,20,20,1,10,1\n", small_taxonomy());
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_TRUE(r.records[0].annotations.empty());
  EXPECT_EQ(r.records[1].annotations[0].box, (BoxXYWH{40, 0, 10, 15}));
}

TEST(Annotations, MissingFileIsDataError) {
  EXPECT_THROW(load_annotations("/nonexistent/annotations.csv", small_taxonomy()), DataError);
}

TEST(Annotations, SerializationRoundTripsBitExactly) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ImageRecord> recs;
  for (int i = 0; i < 20; ++i) {
    ImageRecord r{"img" + std::to_string(i), 640, 480, {}};
    for (int k = 0; k < i % 4; ++k) {
      const double x = u(rng) * 500, y = u(rng) * 400;
      r.annotations.push_back(ann(x, y, 1e-3 + u(rng) * 100, 1e-3 + u(rng) * 70, static_cast<LabelId>(k % 2)));
    }
    recs.push_back(r);
  }
  const auto path = temp_file("ann.csv");
  save_annotations(recs, path);
  const auto back = load_annotations(path, small_taxonomy());
  EXPECT_TRUE(back.rejected.empty());
  EXPECT_EQ(back.records, recs);
  fs::remove(path);
}

TEST(DatasetStats, SingleBoxIsOnePercent) {
  const std::vector<ImageRecord> r{{"a", 100, 100, {ann(0, 0, 10, 10)}}};
  EXPECT_DOUBLE_EQ(dataset_stats(r).mean_scale_percent, 1.0);
}

TEST(DatasetStats, TwoImagesSameLogo) {
  const std::vector<ImageRecord> r{{"a", 100, 100, {ann(0, 0, 20, 20)}}, {"b", 100, 100, {ann(0, 0, 40, 40)}}};
  const DatasetStats s = dataset_stats(r);
  EXPECT_DOUBLE_EQ(s.mean_scale_percent, 10.0);
  EXPECT_DOUBLE_EQ(s.mean_instances_per_category, 2.0);
  EXPECT_EQ(s.num_images, 2u);
  EXPECT_EQ(s.num_instances, 2u);
}

TEST(DatasetStats, EmptyInputThrows) {
  EXPECT_THROW(dataset_stats(std::vector<ImageRecord>{}), std::invalid_argument);
}

TEST(DatasetStats, PermutationInvariant) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1, 50);
  std::vector<ImageRecord> r;
  for (int i = 0; i < 30; ++i) r.push_back({"i" + std::to_string(i), 200, 100, {ann(0, 0, u(rng), u(rng), i % 3)}});
  const DatasetStats a = dataset_stats(r);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(r.begin(), r.end(), rng);
    const DatasetStats b = dataset_stats(r);
    EXPECT_NEAR(a.mean_scale_percent, b.mean_scale_percent, 1e-12);
    EXPECT_EQ(a.mean_instances_per_category, b.mean_instances_per_category);
    EXPECT_EQ(a.num_categories, b.num_categories);
  }
}

TEST(DatasetStats, ReportsContainEveryField) {
  const std::vector<ImageRecord> r{{"a", 100, 100, {ann(0, 0, 10, 10)}}};
  const std::string text = format_stats_text(dataset_stats(r));
  EXPECT_NE(text.find("mean_scale_percent=1\n"), std::string::npos);
  EXPECT_NE(text.find("num_instances=1\n"), std::string::npos);
  EXPECT_NE(format_stats_json(dataset_stats(r)).find("\"mean_scale_percent\""), std::string::npos);
}

TEST(QcConsensus, IdenticalListsPickFirst) {
  const std::vector<InstanceAnnotation> l{ann(0, 0, 10, 10)};
  const QcResult r = qc_consensus({l, l, l});
  EXPECT_EQ(r.chosen, 0u);
  EXPECT_DOUBLE_EQ(r.score, 1.0);
}

TEST(QcConsensus, DisjointOutlierScoresZero) {
  const std::vector<InstanceAnnotation> ab{ann(0, 0, 10, 10)};
  const std::vector<InstanceAnnotation> c{ann(100, 100, 10, 10)};
  const QcResult r = qc_consensus({ab, ab, c});
  EXPECT_EQ(r.chosen, 0u);
  EXPECT_EQ(r.scores[2], 0.0);
}

TEST(QcConsensus, HandComputedPairwiseTable) {
  // Annotation boxes (x, y, w, h): A=(0,0,10,10), B=(1,1,10,10), C=(0,0,20,20).
  const std::vector<InstanceAnnotation> a{ann(0, 0, 10, 10)}, b{ann(1, 1, 10, 10)}, c{ann(0, 0, 20, 20)};
  const double ab = 81.0 / 119.0, ac = 0.25, bc = 0.25;
  EXPECT_NEAR(oracle::box_iou({0, 0, 10, 10}, {1, 1, 11, 11}), ab, 1e-15);
  EXPECT_NEAR(oracle::box_iou({1, 1, 11, 11}, {0, 0, 20, 20}), bc, 1e-15);
  const QcResult r = qc_consensus({a, b, c});
  EXPECT_NEAR(r.scores[0], (ab + ac) / 2, 1e-12);
  EXPECT_NEAR(r.scores[1], (ab + bc) / 2, 1e-12);
  EXPECT_NEAR(r.scores[2], (ac + bc) / 2, 1e-12);
  // A and B tie exactly; the lower index wins.
  EXPECT_EQ(r.scores[0], r.scores[1]);
  EXPECT_EQ(r.chosen, 0u);
}

TEST(QcConsensus, EmptyCandidateScoresZeroAllEmptyThrows) {
  const std::vector<InstanceAnnotation> l{ann(0, 0, 10, 10)};
  const std::vector<InstanceAnnotation> none;
  const QcResult r = qc_consensus({none, l, l});
  EXPECT_EQ(r.scores[0], 0.0);
  EXPECT_EQ(r.chosen, 1u);
  EXPECT_THROW(qc_consensus({none, none, none}), std::invalid_argument);
}

TEST(QcConsensus, InvariantUnderAnnotatorOrder) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 60), s(5, 30);
  for (int t = 0; t < 50; ++t) {
    std::array<std::vector<InstanceAnnotation>, 3> cands;
    for (auto& c : cands)
      for (int k = 0; k < 3; ++k) c.push_back(ann(u(rng), u(rng), s(rng), s(rng)));
    const QcResult base = qc_consensus(cands);
    std::array<int, 3> perm{0, 1, 2};
    do {
      const QcResult r = qc_consensus({cands[perm[0]], cands[perm[1]], cands[perm[2]]});
      for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.scores[i], base.scores[perm[i]], 1e-12);
      EXPECT_NEAR(r.score, base.score, 1e-12);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(BalancedSplit, SaturatesAndCounts) {
  std::vector<ImageRecord> recs;
  for (int i = 0; i < 20; ++i) recs.push_back({"i" + std::to_string(i), 100, 100, {ann(0, 0, 10, 10, i < 10 ? 0 : 2)}});
  EXPECT_EQ(balanced_test_split(recs, 50, 1).size(), 20u);
  const auto split = balanced_test_split(recs, 3, 1);
  ASSERT_EQ(split.size(), 6u);
  int zero = 0;
  for (const auto& r : split) zero += r.annotations[0].label.logo_id == 0;
  EXPECT_EQ(zero, 3);
  EXPECT_EQ(balanced_test_split(recs, 3, 1), split);
}
