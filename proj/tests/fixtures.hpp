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

// Seeded synthetic inputs shared by the tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "commstream/hoeffding.hpp"
#include "files.hpp"

namespace commstream::fixtures {

inline const std::vector<std::string> kThresholdNames{"f", "noise_a",
                                                      "noise_b"};

/// Three uniform attributes; the label is fail iff f > 0.5, inverted from
/// `flip_at` on.
inline std::vector<Instance> threshold_concept(std::size_t n,
                                               std::uint64_t seed,
                                               std::size_t flip_at = SIZE_MAX) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Instance> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Instance inst;
    inst.features = {unit(rng), unit(rng), unit(rng)};
    bool fail = inst.features[0] > 0.5;
    if (i >= flip_at) fail = !fail;
    inst.label = fail ? Label::fail : Label::success;
    inst.id = "i" + std::to_string(i);
    out.push_back(std::move(inst));
  }
  return out;
}

/// Bernoulli(p_before) for `change_at` steps, then Bernoulli(p_after).
inline std::vector<double> bernoulli_switch(std::size_t n, double p_before,
                                            double p_after,
                                            std::size_t change_at,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = unit(rng) < (i < change_at ? p_before : p_after) ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace commstream::fixtures
