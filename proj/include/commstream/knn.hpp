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

// Streaming k-nearest-neighbour baseline with running standardization.

#include <cstddef>
#include <span>
#include <vector>

#include "commstream/hoeffding.hpp"
#include "commstream/label.hpp"

namespace commstream {

struct ConfusionMatrix;

class KnnModel {
 public:
  static constexpr std::size_t kDefaultK = 5;

  explicit KnnModel(std::size_t k = kDefaultK);

  /// Majority label among the min(k, size) nearest stored points under
  /// Euclidean distance on standardized features. Equal distances favour the
  /// earlier insertion; equal votes favour success. Throws EmptyModelError on
  /// an empty store.
  Label predict(std::span<const double> features) const;

  void insert(std::span<const double> features, Label label);

  std::size_t k() const { return k_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t dimension() const { return mean_.size(); }

  /// Per-feature scale used for standardization; 1 for features whose
  /// running standard deviation is zero.
  double scale(std::size_t feature) const;
  double mean(std::size_t feature) const { return mean_.at(feature); }

 private:
  std::size_t k_;
  // Raw points; standardized at query time with the current statistics.
  std::vector<std::vector<double>> points_;
  std::vector<Label> labels_;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

/// Evaluates k-NN over `instances` after dropping the first `skip`.
/// Prequential mode predicts each instance from the ones before it and then
/// inserts it (an empty store predicts success). Resubstitution mode inserts
/// every evaluated instance first and then predicts each of them.
ConfusionMatrix knn_prequential(std::span<const Instance> instances,
                                std::size_t k = KnnModel::kDefaultK,
                                std::size_t skip = 20,
                                bool resubstitution = false);

}  // namespace commstream
