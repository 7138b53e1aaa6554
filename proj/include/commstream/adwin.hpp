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

// Adaptive windowing change detector over a stream of values in [0, 1].
//
// The window is an exponential histogram: row r holds at most `max_buckets`
// buckets of 2^r consecutive values each. Every update tests each bucket
// boundary as a split into an older and a newer sub-window and drops the
// older part while their means differ by more than the cut threshold
//
//   eps_cut = sqrt(ln(4 / delta') / (2 m)),  m = 1 / (1/n0 + 1/n1),
//
// with delta' = delta / (number of boundaries tested).

#include <cstddef>
#include <cstdint>
#include <deque>
#include <nlohmann/json.hpp>
#include <optional>
#include <vector>

namespace commstream {

struct DriftSignal {
  bool drift_detected = false;
  std::size_t window_size_after = 0;
  // Stream index (0-based update count) of the oldest value kept after the
  // cut. Present iff drift_detected.
  std::optional<std::uint64_t> cut_index;
  // Window means just before and after the cut.
  double mean_before = 0.0;
  double mean_after = 0.0;
};

struct WindowStats {
  std::size_t size = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance of the window
};

class AdwinDetector {
 public:
  static constexpr double kDefaultDelta = 0.002;
  static constexpr int kDefaultMaxBuckets = 5;

  explicit AdwinDetector(double delta = kDefaultDelta,
                         int max_buckets = kDefaultMaxBuckets);

  /// Appends `value` (must lie in [0, 1]) and cuts the window while a split
  /// rejects equal means.
  DriftSignal update(double value);

  /// Throws EmptyWindowError when nothing is retained.
  WindowStats window_stats() const;

  std::size_t size() const { return total_count_; }
  bool empty() const { return total_count_ == 0; }
  double delta() const { return delta_; }
  int max_buckets() const { return max_buckets_; }
  std::uint64_t updates_seen() const { return next_index_; }
  std::size_t bucket_count() const;
  std::size_t row_count() const { return rows_.size(); }

  struct BucketView {
    std::uint64_t first_index;
    std::size_t size;
    double sum;
  };
  /// Retained buckets, oldest first.
  std::vector<BucketView> buckets() const;

  nlohmann::json to_json() const;
  static AdwinDetector from_json(const nlohmann::json& j);

 private:
  struct Bucket {
    double sum = 0.0;
    double m2 = 0.0;  // sum of squared deviations from the bucket mean
    std::uint64_t first_index = 0;
  };

  void compress();
  bool cut_once(double log_term);
  void recompute_totals();

  double delta_;
  int max_buckets_;
  // rows_[r] holds buckets of capacity 2^r, front = oldest.
  std::vector<std::deque<Bucket>> rows_;
  std::size_t total_count_ = 0;
  double total_sum_ = 0.0;
  double total_m2_ = 0.0;
  std::uint64_t next_index_ = 0;
};

}  // namespace commstream
