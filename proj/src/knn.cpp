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

#include "commstream/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "commstream/errors.hpp"
#include "commstream/stream.hpp"

namespace commstream {

KnnModel::KnnModel(std::size_t k) : k_(k) {
  if (k == 0) throw ArgumentError("k must be at least 1");
}

double KnnModel::scale(std::size_t feature) const {
  const double n = static_cast<double>(labels_.size());
  if (n < 1.0) return 1.0;
  const double sd = std::sqrt(m2_.at(feature) / n);
  return sd > 0.0 ? sd : 1.0;
}

void KnnModel::insert(std::span<const double> features, Label label) {
  if (labels_.empty() && mean_.empty()) {
    mean_.assign(features.size(), 0.0);
    m2_.assign(features.size(), 0.0);
  }
  if (features.size() != mean_.size()) {
    throw ArgumentError("feature dimension does not match the store");
  }
  points_.emplace_back(features.begin(), features.end());
  labels_.push_back(label);
  const double n = static_cast<double>(labels_.size());
  for (std::size_t f = 0; f < features.size(); ++f) {
    const double d = features[f] - mean_[f];
    mean_[f] += d / n;
    m2_[f] += d * (features[f] - mean_[f]);
  }
}

Label KnnModel::predict(std::span<const double> features) const {
  if (labels_.empty()) throw EmptyModelError("k-NN store is empty");
  if (features.size() != mean_.size()) {
    throw ArgumentError("feature dimension does not match the store");
  }
  std::vector<double> inv_scale(mean_.size());
  for (std::size_t f = 0; f < mean_.size(); ++f) inv_scale[f] = 1.0 / scale(f);

  // The running mean cancels in differences; only the scale matters.
  std::vector<std::pair<double, std::size_t>> dist(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double sq = 0.0;
    for (std::size_t f = 0; f < features.size(); ++f) {
      const double d = (features[f] - points_[i][f]) * inv_scale[f];
      sq += d * d;
    }
    dist[i] = {sq, i};
  }
  const std::size_t take = std::min(k_, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(take),
                    dist.end());
  double fail = 0.0, success = 0.0;
  for (std::size_t i = 0; i < take; ++i) {
    (labels_[dist[i].second] == Label::fail ? fail : success) += 1.0;
  }
  return majority(fail, success);
}

ConfusionMatrix knn_prequential(std::span<const Instance> instances,
                                std::size_t k, std::size_t skip,
                                bool resubstitution) {
  if (instances.size() <= skip) {
    throw ArgumentError("k-NN evaluation needs more than " +
                        std::to_string(skip) + " instances");
  }
  const auto evaluated = instances.subspan(skip);
  KnnModel model(k);
  ConfusionMatrix cm;
  if (resubstitution) {
    for (const auto& inst : evaluated) model.insert(inst.features, inst.label);
    for (const auto& inst : evaluated) {
      cm.add(model.predict(inst.features), inst.label);
    }
    return cm;
  }
  for (const auto& inst : evaluated) {
    const Label predicted =
        model.size() == 0 ? Label::success : model.predict(inst.features);
    cm.add(predicted, inst.label);
    model.insert(inst.features, inst.label);
  }
  return cm;
}

}  // namespace commstream
