// Copyright 2026, The commstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commstream/hoeffding.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "commstream/errors.hpp"
#include "fixtures.hpp"

namespace commstream {
namespace {

TEST(HoeffdingBound, SpotChecks) {
  EXPECT_EQ(hoeffding_bound(1.0, 1.0, 10), 0.0);
  // sqrt(ln(20) / 40), evaluated independently.
  EXPECT_NEAR(hoeffding_bound(1.0, 0.05, 20), 0.2736664152555987, 1e-12);
  EXPECT_NEAR(hoeffding_bound(1.0, 0.05, 20), 0.27367, 1e-5);
  EXPECT_DOUBLE_EQ(hoeffding_bound(2.0, 0.05, 20),
                   2.0 * hoeffding_bound(1.0, 0.05, 20));
}

TEST(HoeffdingBound, DomainErrors) {
  EXPECT_THROW(hoeffding_bound(1.0, 0.05, 0), ArgumentError);
  EXPECT_THROW(hoeffding_bound(0.0, 0.05, 5), ArgumentError);
  EXPECT_THROW(hoeffding_bound(-1.0, 0.05, 5), ArgumentError);
  EXPECT_THROW(hoeffding_bound(1.0, 0.0, 5), ArgumentError);
  EXPECT_THROW(hoeffding_bound(1.0, 1.5, 5), ArgumentError);
  EXPECT_THROW(hoeffding_bound(std::nan(""), 0.05, 5), ArgumentError);
}

TEST(HoeffdingBound, StrictlyDecreasingInN) {
  double prev = hoeffding_bound(1.0, 0.05, 1);
  for (std::uint64_t n = 2; n < 2000; ++n) {
    const double eps = hoeffding_bound(1.0, 0.05, n);
    EXPECT_LT(eps, prev);
    prev = eps;
  }
  EXPECT_LT(hoeffding_bound(1.0, 0.05, 50), hoeffding_bound(1.5, 0.05, 50));
}

TEST(HoeffdingBound, EmpiricalConfidence) {
  constexpr int kReps = 10000;
  constexpr double kDelta = 0.05;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t n : {5u, 20u, 100u}) {
    const double eps = hoeffding_bound(1.0, kDelta, n);
    int bernoulli_misses = 0, uniform_misses = 0;
    for (int r = 0; r < kReps; ++r) {
      double b = 0.0, u = 0.0;
      for (std::uint64_t i = 0; i < n; ++i) {
        b += unit(rng) < 0.5 ? 1.0 : 0.0;
        u += unit(rng);
      }
      bernoulli_misses += std::abs(b / double(n) - 0.5) > eps;
      uniform_misses += std::abs(u / double(n) - 0.5) > eps;
    }
    EXPECT_LE(bernoulli_misses, 2 * kDelta * kReps) << "n=" << n;
    EXPECT_LE(uniform_misses, 2 * kDelta * kReps) << "n=" << n;
  }
}

TEST(SplitRule, Cases) {
  EXPECT_TRUE(split_rule(0.5, 0.2, 0.2, 0.1));
  EXPECT_TRUE(split_rule(0.30, 0.25, 0.08, 0.1));
  EXPECT_FALSE(split_rule(0.30, 0.25, 0.12, 0.1));
  EXPECT_FALSE(split_rule(0.0, 0.0, 0.01, 0.1));
}

TEST(TreeParams, Validation) {
  TreeParams p;
  EXPECT_NO_THROW(p.validate());
  p.grace_period = 0;
  EXPECT_THROW(HoeffdingTree{p}, ArgumentError);
  p = {};
  p.split_confidence = 1.0;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.tie_threshold = 0.0;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.range = 0.0;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.drift_delta = 0.0;
  EXPECT_THROW(p.validate(), ArgumentError);
}

std::vector<double> features_with(std::size_t index, double value) {
  std::vector<double> f(kFeatureCount, 0.0);
  f[index] = value;
  return f;
}

TEST(Predict, FreshTreeVotesSuccess) {
  const HoeffdingTree tree;
  const VoteReport r = tree.predict(features_with(0, 0.3));
  EXPECT_EQ(r.predicted, Label::success);
  EXPECT_EQ(r.votes_fail, 0.0);
  EXPECT_EQ(r.votes_success, 0.0);
}

TEST(Predict, UnsplitRootReturnsMajority) {
  HoeffdingTree tree;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // 6 success for every 4 fail, features carry no signal, fewer instances
  // than the grace period.
  for (int i = 0; i < 10; ++i) {
    std::vector<double> f(kFeatureCount);
    for (double& x : f) x = unit(rng);
    tree.train({f, i < 6 ? Label::success : Label::fail, ""});
  }
  const VoteReport r = tree.predict(features_with(2, 0.9));
  EXPECT_EQ(r.predicted, Label::success);
  EXPECT_EQ(r.votes_success, 6.0);
  EXPECT_EQ(r.votes_fail, 4.0);
}

HoeffdingTree hand_stump() {
  return HoeffdingTree::make_stump({}, {}, 2, 0.35, {3.0, 12.0}, {9.0, 2.0});
}

TEST(Predict, StumpRoutesBothSides) {
  const HoeffdingTree tree = hand_stump();
  const VoteReport low = tree.predict(features_with(2, 0.2));
  EXPECT_EQ(low.predicted, Label::success);
  EXPECT_EQ(low.votes_fail, 3.0);
  EXPECT_EQ(low.votes_success, 12.0);
  const VoteReport high = tree.predict(features_with(2, 0.9));
  EXPECT_EQ(high.predicted, Label::fail);
  EXPECT_EQ(high.votes_fail, 9.0);
  EXPECT_EQ(high.votes_success, 2.0);
  EXPECT_EQ(tree.predict(features_with(2, 0.35)).predicted, Label::success);
}

TEST(Predict, EqualVotesGoToSuccess) {
  const auto tree =
      HoeffdingTree::make_stump({}, {}, 0, 0.5, {4.0, 4.0}, {0.0, 0.0});
  EXPECT_EQ(tree.predict(features_with(0, 0.1)).predicted, Label::success);
  EXPECT_EQ(tree.predict(features_with(0, 0.9)).predicted, Label::success);
}

TEST(Predict, ArgmaxInvariantUnderScaling) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> votes(0.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const double f = votes(rng), s = votes(rng);
    const Label base = majority(f, s);
    for (double c : {1e-3, 0.5, 3.0, 1e6}) {
      const auto tree =
          HoeffdingTree::make_stump({}, {}, 0, 0.5, {f * c, s * c}, {0, 0});
      EXPECT_EQ(tree.predict(features_with(0, 0.0)).predicted, base);
    }
  }
}

TEST(Predict, WrongArityIsArgumentError) {
  const HoeffdingTree tree;
  EXPECT_THROW(tree.predict(std::vector<double>(3)), ArgumentError);
}

TEST(Render, FreshTree) {
  EXPECT_EQ(HoeffdingTree{}.render(), "leaf: 0 | 0\n");
}

TEST(Render, StumpGolden) {
  const std::string golden =
      "group_inout_degree <= 0.35\n"
      "  leaf: 3 | 12\n"
      "  leaf: 9 | 2\n";
  EXPECT_EQ(hand_stump().render(), golden);
}

TEST(Render, Stable) {
  HoeffdingTree tree({}, fixtures::kThresholdNames);
  for (const auto& inst : fixtures::threshold_concept(600, 4)) tree.train(inst);
  EXPECT_EQ(tree.render(), tree.render());
  EXPECT_EQ(tree.to_dot(), tree.to_dot());
  EXPECT_NE(tree.to_dot().find("digraph"), std::string::npos);
}

TEST(Train, NoEvaluationBelowGrace) {
  HoeffdingTree tree({}, fixtures::kThresholdNames);
  const auto data = fixtures::threshold_concept(20, 1);
  for (std::size_t i = 0; i < 19; ++i) tree.train(data[i]);
  EXPECT_EQ(tree.split_evaluations(), 0u);
  tree.train(data[19]);
  EXPECT_EQ(tree.split_evaluations(), 1u);
}

TEST(Train, ConstantLabelNeverSplits) {
  HoeffdingTree tree({}, fixtures::kThresholdNames);
  auto data = fixtures::threshold_concept(2000, 5);
  for (auto& inst : data) {
    inst.label = Label::fail;
    tree.train(inst);
  }
  EXPECT_GT(tree.split_evaluations(), 0u);
  EXPECT_EQ(tree.split_count(), 0u);
}

TEST(Train, ConstantAttributesNeverSplit) {
  LeafStats leaf(3);
  for (int i = 0; i < 40; ++i) {
    const std::vector<double> f{0.2, 0.2, 0.7};
    leaf.add(f, i % 2 ? Label::fail : Label::success);
  }
  EXPECT_FALSE(evaluate_split(leaf, TreeParams{}).should_split);
  EXPECT_TRUE(candidate_thresholds(leaf.attributes[0]).empty());
}

TEST(Train, CandidateThresholdsAreInterior) {
  LeafStats leaf(1);
  for (double x : {0.0, 1.0, 0.3}) {
    const std::vector<double> f{x};
    leaf.add(f, Label::success);
  }
  const auto t = candidate_thresholds(leaf.attributes[0]);
  ASSERT_EQ(t.size(), 10u);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(t[i], 0.05 + 0.1 * double(i), 1e-12);
  }
}

TEST(Train, ThresholdConceptSplitsOnInformativeAttribute) {
  HoeffdingTree tree({}, fixtures::kThresholdNames);
  const auto data = fixtures::threshold_concept(2000, 42);
  std::size_t correct_tail = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const bool hit = tree.predict(data[i].features).predicted == data[i].label;
    if (i >= 1500) correct_tail += hit;
    tree.train(data[i]);
  }
  ASSERT_FALSE(tree.split_history().empty());
  const SplitEvent& first = tree.split_history().front();
  EXPECT_EQ(first.attribute, 0u);
  EXPECT_GE(first.threshold, 0.4);
  EXPECT_LE(first.threshold, 0.6);
  EXPECT_GE(double(correct_tail) / 500.0, 0.95);
}

TEST(Train, PredictDoesNotMutate) {
  HoeffdingTree tree({}, fixtures::kThresholdNames);
  const auto data = fixtures::threshold_concept(500, 6);
  for (const auto& inst : data) tree.train(inst);
  const auto before = tree.to_json().dump();
  for (const auto& inst : data) tree.predict(inst.features);
  EXPECT_EQ(tree.to_json().dump(), before);
}

TEST(Train, LeafWeightEqualsTrainedMinusDiscarded) {
  HoeffdingTree tree({}, fixtures::kThresholdNames);
  const auto data = fixtures::threshold_concept(3000, 7, 1500);
  for (const auto& inst : data) {
    tree.train(inst);
    ASSERT_NEAR(tree.total_leaf_weight(),
                double(tree.trained_count()) - tree.discarded_weight(), 1e-7);
  }
  EXPECT_GT(tree.discarded_weight(), 0.0);
}

TEST(Train, LabelFlipReplacesSubtree) {
  HoeffdingTree tree({}, fixtures::kThresholdNames);
  std::size_t replacements = 0;
  for (const auto& inst : fixtures::threshold_concept(2000, 8, 1000)) {
    for (const auto& e : tree.train(inst)) {
      EXPECT_GE(e.instance_index, 1000u);
      EXPECT_EQ(e.path.rfind("root", 0), 0u);
      ++replacements;
    }
  }
  EXPECT_GE(replacements, 1u);
}

TEST(Train, NoDetectorsWhenDisabled) {
  TreeParams p;
  p.drift_detection = false;
  HoeffdingTree tree(p, fixtures::kThresholdNames);
  for (const auto& inst : fixtures::threshold_concept(2000, 8, 1000)) {
    EXPECT_TRUE(tree.train(inst).empty());
  }
  EXPECT_EQ(tree.discarded_weight(), 0.0);
}

TEST(Json, RoundTripPreservesPredictionsAndLearning) {
  HoeffdingTree tree({}, fixtures::kThresholdNames);
  const auto data = fixtures::threshold_concept(2400, 9, 1200);
  for (std::size_t i = 0; i < 1300; ++i) tree.train(data[i]);
  HoeffdingTree copy = HoeffdingTree::from_json(tree.to_json());
  EXPECT_EQ(copy.render(), tree.render());
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> wide(-0.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> f{wide(rng), wide(rng), wide(rng)};
    const auto a = tree.predict(f), b = copy.predict(f);
    EXPECT_EQ(a.predicted, b.predicted);
    EXPECT_EQ(a.votes_fail, b.votes_fail);
    EXPECT_EQ(a.votes_success, b.votes_success);
  }
  for (std::size_t i = 1300; i < data.size(); ++i) {
    const auto ea = tree.train(data[i]);
    const auto eb = copy.train(data[i]);
    ASSERT_EQ(ea.size(), eb.size());
  }
  EXPECT_EQ(copy.to_json().dump(), tree.to_json().dump());
}

TEST(Json, RejectsForeignDocument) {
  EXPECT_THROW(HoeffdingTree::from_json(nlohmann::json{{"format", "x"}}),
               SchemaError);
}

}  // namespace
}  // namespace commstream
