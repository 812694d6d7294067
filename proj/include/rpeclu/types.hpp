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
#include <vector>

#include <Eigen/Dense>

namespace rpeclu {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// n x p observations, one row per unit.
using DataMatrix = Eigen::MatrixXd;

/// Hard cluster assignment. Labels are 1-based, in 1..g.
struct HardPartition {
  std::vector<int> labels;
  int g = 0;

  std::size_t size() const { return labels.size(); }

  friend bool operator==(const HardPartition&, const HardPartition&) = default;
};

/// Throws Error(kInvalidArgument) unless every label lies in 1..g and n > 0.
void validate(const HardPartition& partition);

}  // namespace rpeclu
