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

#include "commstream/adwin.hpp"

#include <cmath>

#include "commstream/errors.hpp"

namespace commstream {

namespace {

// Chan et al. pairwise combination of squared-deviation sums.
double merged_m2(double sum_a, double m2_a, double n_a, double sum_b,
                 double m2_b, double n_b) {
  const double diff = sum_a / n_a - sum_b / n_b;
  return m2_a + m2_b + diff * diff * n_a * n_b / (n_a + n_b);
}

}  // namespace

AdwinDetector::AdwinDetector(double delta, int max_buckets)
    : delta_(delta), max_buckets_(max_buckets) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ArgumentError("ADWIN delta must lie in (0, 1)");
  }
  if (max_buckets < 1) {
    throw ArgumentError("ADWIN needs at least one bucket per row");
  }
}

DriftSignal AdwinDetector::update(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ArgumentError("ADWIN input must lie in [0, 1]");
  }
  if (rows_.empty()) rows_.emplace_back();
  rows_[0].push_back({value, 0.0, next_index_++});
  if (total_count_ > 0) {
    total_m2_ =
        merged_m2(total_sum_, total_m2_, double(total_count_), value, 0.0, 1.0);
  }
  total_sum_ += value;
  ++total_count_;
  compress();

  DriftSignal signal;
  signal.mean_before = total_sum_ / double(total_count_);
  while (true) {
    const std::size_t splits = bucket_count() - 1;
    if (splits == 0) break;
    const double log_term = std::log(4.0 * double(splits) / delta_);
    if (!cut_once(log_term)) break;
    signal.drift_detected = true;
  }
  signal.window_size_after = total_count_;
  signal.mean_after = total_sum_ / double(total_count_);
  if (signal.drift_detected) signal.cut_index = buckets().front().first_index;
  return signal;
}

void AdwinDetector::compress() {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() <= static_cast<std::size_t>(max_buckets_)) break;
    const Bucket a = rows_[r].front();
    rows_[r].pop_front();
    const Bucket b = rows_[r].front();
    rows_[r].pop_front();
    const double cap = std::ldexp(1.0, static_cast<int>(r));
    if (r + 1 == rows_.size()) rows_.emplace_back();
    rows_[r + 1].push_back({a.sum + b.sum,
                            merged_m2(a.sum, a.m2, cap, b.sum, b.m2, cap),
                            a.first_index});
  }
}

// Tests every bucket boundary; if any rejects equal means, drops everything
// older than the most significant rejecting boundary.
bool AdwinDetector::cut_once(double log_term) {
  double n0 = 0.0, sum0 = 0.0;
  const double n = double(total_count_);
  double best_ratio = 1.0;
  std::size_t best_drop = 0;  // buckets to drop, oldest first
  std::size_t seen = 0;
  const std::size_t total_buckets = bucket_count();
  for (std::size_t r = rows_.size(); r-- > 0;) {
    const double cap = std::ldexp(1.0, static_cast<int>(r));
    for (const Bucket& b : rows_[r]) {
      n0 += cap;
      sum0 += b.sum;
      ++seen;
      if (seen == total_buckets) break;
      const double n1 = n - n0;
      const double diff = std::abs(sum0 / n0 - (total_sum_ - sum0) / n1);
      const double m = 1.0 / (1.0 / n0 + 1.0 / n1);
      const double eps = std::sqrt(log_term / (2.0 * m));
      if (diff > eps && diff / eps > best_ratio) {
        best_ratio = diff / eps;
        best_drop = seen;
      }
    }
  }
  if (best_drop == 0) return false;

  for (std::size_t r = rows_.size(); r-- > 0 && best_drop > 0;) {
    while (!rows_[r].empty() && best_drop > 0) {
      rows_[r].pop_front();
      --best_drop;
    }
  }
  while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
  recompute_totals();
  return true;
}

void AdwinDetector::recompute_totals() {
  total_count_ = 0;
  total_sum_ = 0.0;
  total_m2_ = 0.0;
  for (std::size_t r = rows_.size(); r-- > 0;) {
    const double cap = std::ldexp(1.0, static_cast<int>(r));
    for (const Bucket& b : rows_[r]) {
      if (total_count_ == 0) {
        total_m2_ = b.m2;
      } else {
        total_m2_ = merged_m2(total_sum_, total_m2_, double(total_count_),
                              b.sum, b.m2, cap);
      }
      total_sum_ += b.sum;
      total_count_ += static_cast<std::size_t>(cap);
    }
  }
}

WindowStats AdwinDetector::window_stats() const {
  if (total_count_ == 0) throw EmptyWindowError("ADWIN window is empty");
  const double n = double(total_count_);
  return {total_count_, total_sum_ / n, std::max(0.0, total_m2_ / n)};
}

std::size_t AdwinDetector::bucket_count() const {
  std::size_t count = 0;
  for (const auto& row : rows_) count += row.size();
  return count;
}

std::vector<AdwinDetector::BucketView> AdwinDetector::buckets() const {
  std::vector<BucketView> out;
  for (std::size_t r = rows_.size(); r-- > 0;) {
    for (const Bucket& b : rows_[r]) {
      out.push_back({b.first_index, std::size_t{1} << r, b.sum});
    }
  }
  return out;
}

nlohmann::json AdwinDetector::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json buckets = nlohmann::json::array();
    for (const Bucket& b : row) buckets.push_back({b.sum, b.m2, b.first_index});
    rows.push_back(std::move(buckets));
  }
  return {{"delta", delta_},
          {"max_buckets", max_buckets_},
          {"next_index", next_index_},
          {"rows", std::move(rows)}};
}

AdwinDetector AdwinDetector::from_json(const nlohmann::json& j) {
  try {
    AdwinDetector d(j.at("delta").get<double>(),
                    j.at("max_buckets").get<int>());
    d.next_index_ = j.at("next_index").get<std::uint64_t>();
    for (const auto& row : j.at("rows")) {
      auto& out = d.rows_.emplace_back();
      for (const auto& b : row) {
        out.push_back({b.at(0).get<double>(), b.at(1).get<double>(),
                       b.at(2).get<std::uint64_t>()});
      }
    }
    d.recompute_totals();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid ADWIN state: ") + e.what());
  }
}

}  // namespace commstream
