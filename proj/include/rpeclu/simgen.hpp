// Copyright 2026 The RPEClu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "rpeclu/types.hpp"

namespace rpeclu {

enum class Transform { kNone, kExp, kLogAbs, kSqrtAbs };

std::string_view to_string(Transform t);

/// Gaussian mixture with block means and equicorrelated covariances
/// Sigma_k = (1 - tau_k) * ones + tau_k * I (unit diagonal, off-diagonal
/// 1 - tau_k).
struct ScenarioConfig {
  Index p = 100;
  int g = 2;
  int n_per_group = 100;
  std::vector<double> tau{0.1};  // one value (homoscedastic) or one per group
  double mean_magnitude = 1.0;
  bool rotated = false;
  Transform transform = Transform::kNone;
  double relevant_fraction = 1.0;
  std::uint64_t seed = 0;
};

struct LabeledDataset {
  DataMatrix x;
  HardPartition truth;
};

/// tau for group k (0-based), expanding the homoscedastic form.
double group_tau(const ScenarioConfig& config, int k);

/// Mean vector of group k (0-based): `mean_magnitude` on the k-th block of
/// the first round(relevant_fraction * p) coordinates, 0 elsewhere. Blocks
/// have floor(p_rel / g) coordinates, the last one absorbing the remainder.
Vector group_mean(const ScenarioConfig& config, int k);

/// Covariance of group k (0-based).
Matrix group_covariance(const ScenarioConfig& config, int k);

/// Draws g * n_per_group rows, ordered by group. With `rotated`, the first
/// fifty odd-numbered coordinates (1, 3, 5, ...) of groups 1..g/2 are
/// reflected about zero. The transform is applied element-wise last.
///
/// Throws kInvalidArgument for tau outside (-1/(p-1), 1) and for tau that
/// leaves Sigma_k not positive definite (tau <= 0).
LabeledDataset generate(const ScenarioConfig& config);

inline constexpr int kScenarioCount = 26;

/// Simulation settings 1..26. Throws kInvalidArgument outside that range.
ScenarioConfig scenario_table(int id);

}  // namespace rpeclu
