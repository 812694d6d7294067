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
#include <iosfwd>
#include <string>
#include <vector>

namespace rpeclu::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,    // runtime failure, e.g. too few projections scored
  kExitBadInput = 2,   // unreadable or non-numeric input
  kExitBadConfig = 3,  // infeasible or invalid configuration
};

/// Seed used for scenario data under a run seed; `generate` and
/// `cluster --scenario` share it so they see the same dataset.
std::uint64_t scenario_data_seed(std::uint64_t seed);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name, e.g. {"cluster", "--input", "x.csv", "--g", "3", ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rpeclu::cli
