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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rpeclu/simgen.hpp"
#include "rpeclu/types.hpp"

namespace rpeclu {

struct LoadedData {
  DataMatrix x;
  std::vector<std::string> feature_names;  // empty when the file has no header
  std::optional<HardPartition> truth;
  std::vector<std::string> truth_levels;  // label k is truth_levels[k-1]
};

/// Comma-separated numeric table, one observation per row. The first row is
/// a header unless every field parses as a number. `truth_col` names a label
/// column excluded from x (a 1-based column index when there is no header);
/// its values may be arbitrary strings and are numbered by first appearance.
///
/// Throws kIo when the file cannot be read, kParse on ragged rows or
/// non-numeric feature cells, kInvalidArgument for an unknown truth column.
LoadedData read_csv(const std::filesystem::path& path,
                    const std::optional<std::string>& truth_col = std::nullopt);

/// Header x1..xp,truth; numbers in shortest round-trip form.
void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& data);

/// Shortest decimal string that parses back to `v`.
std::string format_double(double v);

}  // namespace rpeclu
