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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace commstream {

void ConfusionMatrix::add(Label predicted, Label actual) {
  if (actual == Label::success) {
    ++(predicted == actual ? success_correct : success_incorrect);
  } else {
    ++(predicted == actual ? fail_correct : fail_incorrect);
  }
}

std::uint64_t ConfusionMatrix::total() const {
  return success_correct + success_incorrect + fail_correct + fail_incorrect;
}

double ConfusionMatrix::accuracy() const {
  const auto n = total();
  return n == 0 ? 0.0
                : static_cast<double>(success_correct + fail_correct) /
                      static_cast<double>(n);
}

std::optional<double> ConfusionMatrix::recall(Label actual) const {
  const auto correct =
      actual == Label::success ? success_correct : fail_correct;
  const auto seen = actual == Label::success ? actual_success() : actual_fail();
  if (seen == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(seen);
}

void PrequentialLog::record(std::uint64_t index, std::string build_id,
                            Label predicted, Label actual,
                            std::vector<DriftEvent> drift_events,
                            bool global_drift) {
  confusion_.add(predicted, actual);
  PrequentialRecord r;
  r.index = index;
  r.build_id = std::move(build_id);
  r.predicted = predicted;
  r.actual = actual;
  r.cum_accuracy = confusion_.accuracy();
  r.cum_recall_success = confusion_.recall(Label::success);
  r.cum_recall_fail = confusion_.recall(Label::fail);
  r.drift_events = std::move(drift_events);
  r.global_drift = global_drift;
  records_.push_back(std::move(r));
}

double PrequentialLog::final_accuracy() const {
  return records_.empty() ? 0.0 : records_.back().cum_accuracy;
}

std::vector<std::uint64_t> PrequentialLog::drift_indices() const {
  std::vector<std::uint64_t> out;
  for (const auto& r : records_) {
    if (!r.drift_events.empty()) out.push_back(r.index);
  }
  return out;
}

std::vector<std::uint64_t> PrequentialLog::global_drift_indices() const {
  std::vector<std::uint64_t> out;
  for (const auto& r : records_) {
    if (r.global_drift) out.push_back(r.index);
  }
  return out;
}

SensitivityCurves sensitivities(const PrequentialLog& log) {
  SensitivityCurves c;
  c.success.reserve(log.size());
  c.fail.reserve(log.size());
  for (const auto& r : log.records()) {
    c.success.push_back(r.cum_recall_success);
    c.fail.push_back(r.cum_recall_fail);
  }
  return c;
}

std::vector<BuildRecord> order_chronologically(
    std::vector<BuildRecord> builds) {
  std::stable_sort(builds.begin(), builds.end(),
                   [](const BuildRecord& a, const BuildRecord& b) {
                     if (a.started_at != b.started_at) {
                       return a.started_at < b.started_at;
                     }
                     return a.build_id < b.build_id;
                   });
  return builds;
}

void SynthConfig::validate() const {
  if (n_instances == 0) throw ArgumentError("synthetic stream needs instances");
  if (!(success_weight >= 0.0 && fail_weight >= 0.0) ||
      !(success_weight + fail_weight > 0.0)) {
    throw ArgumentError("class ratio weights must be non-negative, not both 0");
  }
  if (concepts.empty()) throw ArgumentError("synthetic stream needs a concept");
  for (const auto& c : concepts) {
    for (const auto* cls : {&c.success, &c.fail}) {
      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        if (!std::isfinite(cls->mean[f]) || !(cls->stddev[f] >= 0.0)) {
          throw ArgumentError("concept has an invalid mean or stddev");
        }
      }
    }
  }
  std::size_t previous = 0;
  for (std::size_t i = 0; i < drift_points.size(); ++i) {
    const auto& d = drift_points[i];
    if (d.index >= n_instances) {
      throw ArgumentError("drift point beyond the end of the stream");
    }
    if (i > 0 && d.index <= previous) {
      throw ArgumentError("drift points must be strictly increasing");
    }
    if (d.concept_index >= concepts.size()) {
      throw ArgumentError("drift point names an unknown concept");
    }
    previous = d.index;
  }
}

namespace {

// Features 8 (effective size) and 11..14 (counts) are not ratios.
bool is_ratio_feature(std::size_t f) { return f <= 7 || f == 9 || f == 10; }
bool is_count_feature(std::size_t f) { return f >= 11; }

ClassConcept make_class(const std::array<double, kFeatureCount>& mean,
                        const std::array<double, kFeatureCount>& sd) {
  return {mean, sd};
}

constexpr std::array<double, kFeatureCount> kBaseMean = {
    0.25, 0.25, 0.20, 0.50, 0.50, 0.15, 0.05, 0.10,
    2.50, 0.70, 0.30, 6.0,  10.0, 2.0,  4.0};
constexpr std::array<double, kFeatureCount> kBaseSd = {
    0.10, 0.10, 0.08, 0.15, 0.15, 0.08, 0.03, 0.05,
    1.00, 0.15, 0.10, 2.5,  5.0,  1.0,  2.0};

}  // namespace

SynthConfig SynthConfig::communication(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  auto fail_mean = kBaseMean;
  fail_mean[2] = 0.30;
  c.concepts.push_back(
      {make_class(kBaseMean, kBaseSd), make_class(fail_mean, kBaseSd)});
  return c;
}

SynthConfig SynthConfig::separable(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  auto success_mean = kBaseMean, fail_mean = kBaseMean;
  auto sd = kBaseSd;
  // group_inout_degree alone separates the classes; the other ratio features
  // shift by under two standard deviations.
  for (std::size_t f : {0, 1, 3, 4, 5, 9, 10}) {
    fail_mean[f] = std::min(0.95, success_mean[f] + 1.8 * sd[f]);
  }
  success_mean[2] = 0.15;
  fail_mean[2] = 0.60;
  sd[2] = 0.04;
  c.concepts.push_back(
      {make_class(success_mean, sd), make_class(fail_mean, sd)});
  return c;
}

SynthConfig SynthConfig::zero_information(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  c.concepts.push_back(
      {make_class(kBaseMean, kBaseSd), make_class(kBaseMean, kBaseSd)});
  return c;
}

std::vector<Instance> synth_stream(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const double share =
      config.success_weight / (config.success_weight + config.fail_weight);
  const auto n_success = static_cast<std::size_t>(
      std::llround(share * static_cast<double>(config.n_instances)));

  std::vector<Label> labels(config.n_instances, Label::fail);
  std::fill_n(labels.begin(), n_success, Label::success);
  std::shuffle(labels.begin(), labels.end(), rng);

  std::vector<Instance> out;
  out.reserve(config.n_instances);
  std::size_t active = 0, next_drift = 0;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < config.n_instances; ++i) {
    while (next_drift < config.drift_points.size() &&
           config.drift_points[next_drift].index == i) {
      active = config.drift_points[next_drift++].concept_index;
    }
    const Concept& active_concept = config.concepts[active];
    const ClassConcept& cls = labels[i] == Label::success
                                  ? active_concept.success
                                  : active_concept.fail;
    Instance inst;
    inst.label = labels[i];
    inst.id = "synth-" + std::to_string(i);
    inst.features.resize(kFeatureCount);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      double x = cls.mean[f] + cls.stddev[f] * normal(rng);
      if (is_ratio_feature(f)) x = std::clamp(x, 0.0, 1.0);
      if (is_count_feature(f)) x = std::max(0.0, std::round(x));
      if (f == 8) x = std::max(0.0, x);
      inst.features[f] = x;
    }
    out.push_back(std::move(inst));
  }
  return out;
}

SynthCorpus synth_corpus(std::size_t n_builds, std::uint64_t seed,
                         double success_weight, double fail_weight) {
  if (n_builds == 0) throw ArgumentError("corpus needs at least one build");
  if (!(success_weight >= 0.0 && fail_weight >= 0.0) ||
      !(success_weight + fail_weight > 0.0)) {
    throw ArgumentError("class ratio weights must be non-negative, not both 0");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  constexpr std::size_t kDevelopers = 30;
  std::vector<ContributorId> devs;
  for (std::size_t d = 1; d <= kDevelopers; ++d) {
    char name[16];
    std::snprintf(name, sizeof name, "dev%02zu", d);
    devs.push_back({name});
  }

  const double share = success_weight / (success_weight + fail_weight);
  const auto n_success =
      static_cast<std::size_t>(std::llround(share * double(n_builds)));
  std::vector<Label> labels(n_builds, Label::fail);
  std::fill_n(labels.begin(), n_success, Label::success);
  std::shuffle(labels.begin(), labels.end(), rng);

  // Kind mix of 15 nightly : 34 integration : 143 continuous : 7 connector.
  std::discrete_distribution<int> kind_dist({15, 34, 143, 7});

  SynthCorpus corpus;
  std::chrono::sys_seconds clock{
      std::chrono::sys_days{std::chrono::year{2008} / std::chrono::June / 1}};
  std::size_t next_item = 1;
  for (std::size_t b = 0; b < n_builds; ++b) {
    clock += std::chrono::minutes(uniform(30, 48 * 60));
    const bool fail = labels[b] == Label::fail;
    // Successful builds come from small, chatty teams; failing ones from
    // larger teams with a single coordinating hub.
    std::vector<ContributorId> team = devs;
    std::shuffle(team.begin(), team.end(), rng);
    team.resize(fail ? uniform(6, 10) : uniform(3, 5));

    BuildRecord build;
    char id[32];
    std::snprintf(id, sizeof id, "B%04zu", b + 1);
    build.build_id = id;
    build.started_at = clock;
    build.kind = static_cast<BuildKind>(kind_dist(rng));
    build.outcome = labels[b];

    const std::size_t n_items = uniform(1, 3);
    for (std::size_t k = 0; k < n_items; ++k) {
      WorkItemRecord item;
      item.work_item_id = "WI-" + std::to_string(next_item++);
      auto pick = [&] { return team[uniform(0, team.size() - 1)]; };
      item.creator = fail ? team[0] : pick();
      const std::size_t n_comments = fail ? uniform(0, 2) : uniform(2, 5);
      for (std::size_t c = 0; c < n_comments; ++c) {
        item.comments.push_back({pick(), (c + 1) * 10});
      }
      for (std::size_t s = 0, n = uniform(fail ? 2 : 0, fail ? 5 : 2); s < n;
           ++s) {
        item.subscribers.insert(pick());
      }
      item.committers.insert(pick());
      item.change_set_count = fail ? uniform(1, 6) : uniform(0, 3);
      build.work_item_ids.push_back(item.work_item_id);
      corpus.items.push_back(std::move(item));
    }
    corpus.builds.push_back(std::move(build));
  }
  std::shuffle(corpus.builds.begin(), corpus.builds.end(), rng);
  return corpus;
}

std::string format_percent(double fraction) {
  const double hundredths = std::floor(fraction * 10000.0 + 1e-7);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", hundredths / 100.0);
  return buf;
}

std::string comparison_table(const ConfusionMatrix& tree,
                             const ConfusionMatrix& knn) {
  std::ostringstream out;
  char line[160];
  auto row = [&](const char* group, const char* what, const std::string& a,
                 const std::string& b) {
    std::snprintf(line, sizeof line, "%-19s%-34s%16s%10s\n", group, what,
                  a.c_str(), b.c_str());
    out << line;
  };
  std::snprintf(line, sizeof line,
                "Comparison of Hoeffding Tree & k-NN (%llu instances)\n",
                static_cast<unsigned long long>(tree.total()));
  out << line;
  row("", "", "Hoeffding Tree", "k-NN");
  row("Successful Builds", "Correctly Classified Instances",
      std::to_string(tree.success_correct),
      std::to_string(knn.success_correct));
  row("", "Incorrectly Classified Instances",
      std::to_string(tree.success_incorrect),
      std::to_string(knn.success_incorrect));
  row("Failed Builds", "Correctly Classified Instances",
      std::to_string(tree.fail_correct), std::to_string(knn.fail_correct));
  row("", "Incorrectly Classified Instances",
      std::to_string(tree.fail_incorrect), std::to_string(knn.fail_incorrect));
  std::snprintf(line, sizeof line, "%-53s%16s%10s\n",
                "Overall Accuracy of Prediction",
                format_percent(tree.accuracy()).c_str(),
                format_percent(knn.accuracy()).c_str());
  out << line;
  return out.str();
}

}  // namespace commstream
