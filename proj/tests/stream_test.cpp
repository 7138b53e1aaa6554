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

#include "commstream/stream.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "commstream/errors.hpp"
#include "commstream/hoeffding.hpp"
#include "fixtures.hpp"

namespace commstream {
namespace {

using std::chrono::sys_days;
using namespace std::chrono_literals;

BuildRecord at(std::string id, std::chrono::sys_seconds t) {
  BuildRecord b;
  b.build_id = std::move(id);
  b.started_at = t;
  return b;
}

std::vector<std::string> ids(const std::vector<BuildRecord>& builds) {
  std::vector<std::string> out;
  for (const auto& b : builds) out.push_back(b.build_id);
  return out;
}

const std::chrono::sys_seconds kT0 =
    sys_days{std::chrono::year{2008} / 6 / 1} + 0s;

TEST(Chronology, OldestFirst) {
  const auto out = order_chronologically({at("b", kT0 + 60s), at("a", kT0)});
  EXPECT_EQ(ids(out), (std::vector<std::string>{"a", "b"}));
}

TEST(Chronology, EqualTimesByBuildId) {
  const auto out = order_chronologically(
      {at("n2", kT0), at("n10", kT0), at("c", kT0 - 1s), at("n1", kT0)});
  EXPECT_EQ(ids(out), (std::vector<std::string>{"c", "n1", "n10", "n2"}));
}

TEST(Chronology, SortedInputUnchanged) {
  const std::vector<BuildRecord> in{at("x", kT0), at("y", kT0 + 1s),
                                    at("a", kT0 + 2s)};
  EXPECT_EQ(ids(order_chronologically(in)), ids(in));
}

ConfusionMatrix counts(std::uint64_t sc, std::uint64_t si, std::uint64_t fc,
                       std::uint64_t fi) {
  PrequentialLog log;
  std::uint64_t i = 0;
  for (std::uint64_t n = 0; n < sc; ++n)
    log.record(i++, "", Label::success, Label::success);
  for (std::uint64_t n = 0; n < si; ++n)
    log.record(i++, "", Label::fail, Label::success);
  for (std::uint64_t n = 0; n < fc; ++n)
    log.record(i++, "", Label::fail, Label::fail);
  for (std::uint64_t n = 0; n < fi; ++n)
    log.record(i++, "", Label::success, Label::fail);
  EXPECT_DOUBLE_EQ(log.final_accuracy(), log.confusion().accuracy());
  return log.confusion();
}

TEST(TableArithmetic, HoeffdingColumn) {
  const ConfusionMatrix cm = counts(83, 33, 32, 31);
  EXPECT_EQ(cm.total(), 179u);
  EXPECT_EQ(cm.actual_success(), 116u);
  EXPECT_EQ(cm.actual_fail(), 63u);
  EXPECT_NEAR(100.0 * cm.accuracy(), 64.24, 0.01);
  EXPECT_EQ(format_percent(cm.accuracy()), "64.24%");
}

TEST(TableArithmetic, KnnColumn) {
  const ConfusionMatrix cm = counts(80, 36, 23, 40);
  EXPECT_EQ(cm.total(), 179u);
  EXPECT_EQ(cm.actual_success(), 116u);
  EXPECT_EQ(cm.actual_fail(), 63u);
  EXPECT_NEAR(100.0 * cm.accuracy(), 57.54, 0.01);
  EXPECT_EQ(format_percent(cm.accuracy()), "57.54%");
}

TEST(TableArithmetic, ReportLayout) {
  const std::string t =
      comparison_table(counts(83, 33, 32, 31), counts(80, 36, 23, 40));
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t nl; (nl = t.find('\n', start)) != std::string::npos;
       start = nl + 1) {
    lines.push_back(t.substr(start, nl - start));
  }
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_NE(lines[0].find("179 instances"), std::string::npos);
  // Four count rows and the accuracy row carry two numbers each.
  const char* want[5][2] = {{"83", "80"},
                            {"33", "36"},
                            {"32", "23"},
                            {"31", "40"},
                            {"64.24%", "57.54%"}};
  for (int r = 0; r < 5; ++r) {
    const std::string& line = lines[std::size_t(r) + 2];
    const auto b = line.find_last_not_of(' ');
    const auto sep = line.find_last_of(' ', b);
    const auto a_end = line.find_last_not_of(' ', sep);
    const auto a_start = line.find_last_of(' ', a_end) + 1;
    EXPECT_EQ(line.substr(sep + 1), want[r][1]);
    EXPECT_EQ(line.substr(a_start, a_end + 1 - a_start), want[r][0]);
  }
}

TEST(Percent, Truncates) {
  EXPECT_EQ(format_percent(1.0), "100.00%");
  EXPECT_EQ(format_percent(0.0), "0.00%");
  EXPECT_EQ(format_percent(2.0 / 3.0), "66.66%");
  EXPECT_EQ(format_percent(0.5754), "57.54%");
}

TEST(Confusion, EmptyAndRecall) {
  ConfusionMatrix cm;
  EXPECT_EQ(cm.accuracy(), 0.0);
  EXPECT_FALSE(cm.recall(Label::fail).has_value());
  cm.add(Label::fail, Label::fail);
  cm.add(Label::success, Label::fail);
  EXPECT_DOUBLE_EQ(*cm.recall(Label::fail), 0.5);
  EXPECT_FALSE(cm.recall(Label::success).has_value());
}

TEST(Sensitivity, OnlySuccessActuals) {
  PrequentialLog log;
  for (int i = 0; i < 12; ++i)
    log.record(std::uint64_t(i), "", Label::success, Label::success);
  const auto c = sensitivities(log);
  ASSERT_EQ(c.success.size(), 12u);
  for (const auto& v : c.success) EXPECT_EQ(v, std::optional<double>(1.0));
  for (const auto& v : c.fail) EXPECT_FALSE(v.has_value());
}

TEST(Sensitivity, AlternatingFailOutcomes) {
  PrequentialLog log;
  for (int i = 0; i < 40; ++i) {
    log.record(std::uint64_t(i), "", i % 2 ? Label::success : Label::fail,
               Label::fail);
  }
  EXPECT_DOUBLE_EQ(*sensitivities(log).fail.back(), 0.5);
}

TEST(Sensitivity, HandTrace) {
  const Label S = Label::success, F = Label::fail;
  const std::pair<Label, Label> steps[10] = {{S, S}, {F, S}, {F, F}, {S, F},
                                             {S, S}, {F, F}, {F, F}, {S, S},
                                             {F, S}, {S, F}};
  PrequentialLog log;
  for (std::uint64_t i = 0; i < 10; ++i) {
    log.record(20 + i, "b" + std::to_string(i), steps[i].first,
               steps[i].second);
  }
  const std::optional<double> none;
  const std::vector<std::optional<double>> success{
      1.0, 0.5, 0.5, 0.5, 2.0 / 3, 2.0 / 3, 2.0 / 3, 0.75, 0.6, 0.6};
  const std::vector<std::optional<double>> fail{none,    none, 1.0,  0.5,  0.5,
                                                2.0 / 3, 0.75, 0.75, 0.75, 0.6};
  const double accuracy[10] = {1.0,     0.5,     2.0 / 3, 0.5,     0.6,
                               4.0 / 6, 5.0 / 7, 0.75,    6.0 / 9, 0.6};
  const auto c = sensitivities(log);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(c.success[i].has_value(), success[i].has_value()) << i;
    EXPECT_EQ(c.fail[i].has_value(), fail[i].has_value()) << i;
    if (success[i]) EXPECT_DOUBLE_EQ(*c.success[i], *success[i]) << i;
    if (fail[i]) EXPECT_DOUBLE_EQ(*c.fail[i], *fail[i]) << i;
    EXPECT_DOUBLE_EQ(log.records()[i].cum_accuracy, accuracy[i]) << i;
    EXPECT_EQ(log.records()[i].cum_recall_fail.has_value(),
              fail[i].has_value());
  }
}

// Predicts from the label of the most recent trained instance and records
// how much of the stream it had seen at every prediction.
struct SpyModel {
  std::vector<std::size_t> trained_before_predict;
  std::vector<std::string> predicted_ids;
  std::vector<Label> seen;
  const std::vector<Instance>* stream = nullptr;

  Label predict(std::span<const double> features) const {
    auto* self = const_cast<SpyModel*>(this);
    self->trained_before_predict.push_back(seen.size());
    self->predicted_ids.push_back((*stream)[seen.size()].id);
    EXPECT_EQ(features[0], (*stream)[seen.size()].features[0]);
    return seen.empty() ? Label::success : seen.back();
  }
  std::vector<DriftEvent> train(const Instance& inst) {
    seen.push_back(inst.label);
    return {};
  }
};
static_assert(PrequentialModel<SpyModel>);
static_assert(PrequentialModel<HoeffdingTree>);

TEST(Prequential, TestThenTrainOrder) {
  const auto data = fixtures::threshold_concept(60, 3);
  SpyModel spy;
  spy.stream = &data;
  const PrequentialLog log = run_prequential(spy, std::span(data));
  ASSERT_EQ(log.size(), 40u);
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_EQ(spy.trained_before_predict[i], 20 + i);
    EXPECT_EQ(log.records()[i].index, 20 + i);
    EXPECT_EQ(log.records()[i].build_id, data[20 + i].id);
    EXPECT_EQ(log.records()[i].predicted, data[19 + i].label);
  }
  EXPECT_EQ(spy.seen.size(), 60u);
}

TEST(Prequential, NeverPeeksAhead) {
  auto a = fixtures::threshold_concept(1200, 10);
  auto b = a;
  // Same first 600 instances, unrelated futures. Instance 600 keeps its
  // features but changes its label, so its prediction may only use the past.
  const auto other = fixtures::threshold_concept(1200, 11, 0);
  for (std::size_t i = 601; i < b.size(); ++i) b[i] = other[i];
  b[600].label = a[600].label == Label::fail ? Label::success : Label::fail;
  HoeffdingTree ta({}, fixtures::kThresholdNames);
  HoeffdingTree tb({}, fixtures::kThresholdNames);
  const auto la = run_prequential(ta, std::span<const Instance>(a));
  const auto lb = run_prequential(tb, std::span<const Instance>(b));
  for (std::size_t r = 0; r < la.size(); ++r) {
    const auto& x = la.records()[r];
    if (x.index > 600) break;
    EXPECT_EQ(x.predicted, lb.records()[r].predicted) << x.index;
  }
}

TEST(Prequential, AllCorrect) {
  struct Oracle {
    const std::vector<Instance>* stream;
    std::size_t at = 0;
    Label predict(std::span<const double>) const { return (*stream)[at].label; }
    std::vector<DriftEvent> train(const Instance&) {
      ++at;
      return {};
    }
  };
  const auto data = fixtures::threshold_concept(100, 1);
  Oracle m{&data};
  EXPECT_EQ(run_prequential(m, std::span(data)).final_accuracy(), 1.0);
}

TEST(Prequential, WarmupMustLeaveInstances) {
  HoeffdingTree t({}, fixtures::kThresholdNames);
  const auto data = fixtures::threshold_concept(20, 1);
  EXPECT_THROW(run_prequential(t, std::span(data)), ArgumentError);
  PrequentialOptions o;
  o.warmup = 5;
  EXPECT_EQ(run_prequential(t, std::span(data), o).size(), 15u);
}

TEST(Prequential, MatrixAgreesWithLog) {
  HoeffdingTree t;
  const auto data = synth_stream(SynthConfig::communication(3));
  PrequentialOptions o;
  o.global_drift_delta = 0.002;
  const auto log = run_prequential(t, std::span<const Instance>(data), o);
  const ConfusionMatrix& cm = log.confusion();
  EXPECT_EQ(cm.total(), log.size());
  EXPECT_EQ(log.size(), 179u);
  const double recomputed =
      double(cm.success_correct + cm.fail_correct) / double(cm.total());
  EXPECT_NEAR(recomputed, log.final_accuracy(), 1e-12);
  EXPECT_NEAR(log.records().back().cum_accuracy, recomputed, 1e-12);
}

TEST(Synth, Deterministic) {
  const auto a = synth_stream(SynthConfig::communication(9));
  const auto b = synth_stream(SynthConfig::communication(9));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].features, b[i].features);
    EXPECT_EQ(a[i].label, b[i].label);
    EXPECT_EQ(a[i].id, b[i].id);
  }
  const auto c = synth_stream(SynthConfig::communication(10));
  EXPECT_NE(a[0].features, c[0].features);
}

TEST(Synth, ExactQuota) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto data = synth_stream(SynthConfig::communication(seed));
    ASSERT_EQ(data.size(), 199u);
    std::size_t fails = 0;
    for (const auto& i : data) fails += i.label == Label::fail;
    EXPECT_EQ(fails, 72u);
  }
}

TEST(Synth, FeaturesAreWellFormed) {
  for (const auto& inst : synth_stream(SynthConfig::communication(4))) {
    ASSERT_EQ(inst.features.size(), kFeatureCount);
    EXPECT_NO_THROW(FeatureVector::from_values(inst.features));
    for (std::size_t f : {0, 1, 2, 3, 4, 5, 6, 7, 9, 10}) {
      EXPECT_GE(inst.features[f], 0.0);
      EXPECT_LE(inst.features[f], 1.0);
    }
    EXPECT_GE(inst.features[8], 0.0);
  }
}

TEST(Synth, InvalidConfig) {
  SynthConfig c = SynthConfig::communication();
  c.drift_points = {{100, 0}, {50, 0}};
  EXPECT_THROW(synth_stream(c), ArgumentError);
  c = SynthConfig::communication();
  c.drift_points = {{250, 0}};
  EXPECT_THROW(synth_stream(c), ArgumentError);
  c = SynthConfig::communication();
  c.drift_points = {{50, 3}};
  EXPECT_THROW(synth_stream(c), ArgumentError);
  c = SynthConfig::communication();
  c.fail_weight = -1.0;
  EXPECT_THROW(synth_stream(c), ArgumentError);
  c.fail_weight = 0.0;
  c.success_weight = 0.0;
  EXPECT_THROW(synth_stream(c), ArgumentError);
  c = SynthConfig::communication();
  c.concepts.clear();
  EXPECT_THROW(synth_stream(c), ArgumentError);
}

TEST(Synth, ConceptSwapRaisesTreeError) {
  SynthConfig c = SynthConfig::separable(1);
  c.n_instances = 2000;
  c.concepts.push_back(c.concepts[0].flipped());
  c.drift_points.push_back({1000, 1});
  const auto data = synth_stream(c);
  HoeffdingTree tree;
  const auto log = run_prequential(tree, std::span<const Instance>(data));
  auto errors = [&](std::uint64_t from, std::uint64_t to) {
    int e = 0;
    for (const auto& r : log.records()) {
      if (r.index >= from && r.index < to) e += r.predicted != r.actual;
    }
    return e;
  };
  // Pinned from the first run with this seed.
  EXPECT_EQ(errors(900, 1000), 0);
  EXPECT_EQ(errors(1000, 1100), 16);
  EXPECT_GT(errors(1000, 1100), errors(900, 1000));
  EXPECT_FALSE(log.drift_indices().empty());
}

TEST(Synth, ZeroInformationStaysNearMajorityRate) {
  double accuracy = 0.0, majority_rate = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto data = synth_stream(SynthConfig::zero_information(seed));
    HoeffdingTree tree;
    const auto log = run_prequential(tree, std::span<const Instance>(data));
    accuracy += log.final_accuracy();
    majority_rate +=
        double(log.confusion().actual_success()) / double(log.size());
  }
  EXPECT_NEAR(accuracy / 20, majority_rate / 20, 0.03);
}

}  // namespace
}  // namespace commstream
