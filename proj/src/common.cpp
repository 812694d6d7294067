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

#include <string>

#include "rpeclu/error.hpp"
#include "rpeclu/types.hpp"

namespace rpeclu {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDimension: return "invalid-dimension";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kStructureInfeasible: return "structure-infeasible";
    case ErrorCode::kFitFailure: return "fit-failure";
    case ErrorCode::kScoreInvalid: return "score-invalid";
    case ErrorCode::kPartialEnsemble: return "partial-ensemble";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

void validate(const HardPartition& partition) {
  if (partition.labels.empty())
    throw Error(ErrorCode::kEmptyInput, "partition has no units");
  if (partition.g < 1)
    throw Error(ErrorCode::kInvalidArgument, "partition needs g >= 1");
  for (std::size_t i = 0; i < partition.labels.size(); ++i) {
    const int l = partition.labels[i];
    if (l < 1 || l > partition.g)
      throw Error(ErrorCode::kInvalidArgument,
                  "label " + std::to_string(l) + " at unit " +
                      std::to_string(i) + " outside 1.." +
                      std::to_string(partition.g));
  }
}

}  // namespace rpeclu
