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

#pragma once

// Chronological stream simulation and prequential (test-then-train)
// evaluation.

#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "commstream/adwin.hpp"
#include "commstream/commgraph.hpp"
#include "commstream/errors.hpp"
#include "commstream/hoeffding.hpp"
#include "commstream/label.hpp"

namespace commstream {

struct ConfusionMatrix {
  std::uint64_t success_correct = 0;
  std::uint64_t success_incorrect = 0;
  std::uint64_t fail_correct = 0;
  std::uint64_t fail_incorrect = 0;

  void add(Label predicted, Label actual);
  std::uint64_t total() const;
  std::uint64_t actual_success() const {
    return success_correct + success_incorrect;
  }
  std::uint64_t actual_fail() const { return fail_correct + fail_incorrect; }
  /// Overall accuracy; 0 for an empty matrix.
  double accuracy() const;
  /// Recall of the class; absent before the class has been seen.
  std::optional<double> recall(Label actual) const;

  bool operator==(const ConfusionMatrix&) const = default;
};

struct PrequentialRecord {
  std::uint64_t index = 0;  // position in the full stream
  std::string build_id;
  Label predicted = Label::success;
  Label actual = Label::success;
  double cum_accuracy = 0.0;
  std::optional<double> cum_recall_success;
  std::optional<double> cum_recall_fail;
  std::vector<DriftEvent> drift_events;
  bool global_drift = false;
};

class PrequentialLog {
 public:
  /// Appends one scored prediction and updates the running statistics.
  void record(std::uint64_t index, std::string build_id, Label predicted,
              Label actual, std::vector<DriftEvent> drift_events = {},
              bool global_drift = false);

  const std::vector<PrequentialRecord>& records() const { return records_; }
  const ConfusionMatrix& confusion() const { return confusion_; }
  double final_accuracy() const;
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }

  /// Stream indices at which at least one subtree was replaced.
  std::vector<std::uint64_t> drift_indices() const;
  std::vector<std::uint64_t> global_drift_indices() const;

 private:
  std::vector<PrequentialRecord> records_;
  ConfusionMatrix confusion_;
};

struct SensitivityCurves {
  // One entry per scored instance; absent until the class first occurs.
  std::vector<std::optional<double>> success;
  std::vector<std::optional<double>> fail;
};

SensitivityCurves sensitivities(const PrequentialLog& log);

/// Stable ascending sort by start time, ties by build id.
std::vector<BuildRecord> order_chronologically(std::vector<BuildRecord> builds);

inline constexpr std::size_t kDefaultWarmup = 20;

template <class M>
concept PrequentialModel = requires(M& m, const M& cm, const Instance& inst) {
  cm.predict(std::span<const double>(inst.features));
  { m.train(inst) } -> std::convertible_to<std::vector<DriftEvent>>;
};

inline Label predicted_label(Label l) { return l; }
inline Label predicted_label(const VoteReport& r) { return r.predicted; }

struct PrequentialOptions {
  std::size_t warmup = kDefaultWarmup;
  // Detector over the whole model's 0/1 error; logged only.
  std::optional<double> global_drift_delta;
};

/// Trains on the first `warmup` instances without scoring, then for every
/// remaining instance predicts, logs and trains.
template <PrequentialModel M>
PrequentialLog run_prequential(M& model, std::span<const Instance> instances,
                               const PrequentialOptions& options = {}) {
  if (instances.size() <= options.warmup) {
    throw ArgumentError("stream of " + std::to_string(instances.size()) +
                        " instances is not longer than the warmup of " +
                        std::to_string(options.warmup));
  }
  std::optional<AdwinDetector> global;
  if (options.global_drift_delta) global.emplace(*options.global_drift_delta);

  PrequentialLog log;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    if (i < options.warmup) {
      model.train(inst);
      continue;
    }
    const Label predicted =
        predicted_label(model.predict(std::span<const double>(inst.features)));
    bool global_drift = false;
    if (global) {
      global_drift =
          global->update(predicted == inst.label ? 0.0 : 1.0).drift_detected;
    }
    std::vector<DriftEvent> events = model.train(inst);
    log.record(i, inst.id, predicted, inst.label, std::move(events),
               global_drift);
  }
  return log;
}

/// Class-conditional Gaussian over the fifteen features.
struct ClassConcept {
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> stddev{};
};

struct Concept {
  ClassConcept success;
  ClassConcept fail;

  /// The same concept with the class-conditional distributions exchanged.
  Concept flipped() const { return {fail, success}; }
};

struct DriftPoint {
  std::size_t index = 0;          // first instance drawn from the new concept
  std::size_t concept_index = 0;  // into SynthConfig::concepts
};

struct SynthConfig {
  std::size_t n_instances = 199;
  // Class ratio success : fail; counts are met exactly by quota.
  double success_weight = 127.0;
  double fail_weight = 72.0;
  std::vector<Concept> concepts;  // concepts[0] is active from the start
  std::vector<DriftPoint> drift_points;
  std::uint64_t seed = 1;

  void validate() const;

  /// Communication-like stream where only group_inout_degree separates the
  /// classes, and weakly.
  static SynthConfig communication(std::uint64_t seed = 1);
  /// Classes far apart on several features.
  static SynthConfig separable(std::uint64_t seed = 1);
  /// Identical class-conditional distributions.
  static SynthConfig zero_information(std::uint64_t seed = 1);
};

/// Seeded draw: labels by exact quota, shuffled; features from the active
/// concept of the instance's class. Ratio features are clamped to [0, 1] and
/// counts rounded to non-negative integers.
std::vector<Instance> synth_stream(const SynthConfig& config);

/// Synthetic build and work-item records for end-to-end runs.
struct SynthCorpus {
  std::vector<BuildRecord> builds;
  std::vector<WorkItemRecord> items;
};

SynthCorpus synth_corpus(std::size_t n_builds, std::uint64_t seed,
                         double success_weight = 127.0,
                         double fail_weight = 72.0);

/// Percentage truncated (not rounded) to two decimals, e.g. "64.24%".
std::string format_percent(double fraction);

/// Side-by-side per-class correct/incorrect counts and overall accuracy.
std::string comparison_table(const ConfusionMatrix& tree,
                             const ConfusionMatrix& knn);

}  // namespace commstream
