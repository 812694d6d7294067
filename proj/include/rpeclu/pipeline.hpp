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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpeclu/condreg.hpp"
#include "rpeclu/evaluation.hpp"
#include "rpeclu/gmm.hpp"
#include "rpeclu/types.hpp"

namespace rpeclu {

enum class RegChoice { kAuto, kFull, kDiagonal };

std::string_view to_string(RegChoice choice);
RegChoice parse_reg_choice(std::string_view text);

struct RpecluConfig {
  int g = 2;
  std::optional<Index> d;  // defaults to default_d(g)
  int b = 1000;
  int b_star = 100;
  std::uint64_t seed = 0;
  CovStructure gmm_cov = CovStructure::kFull;
  RegChoice reg_structure = RegChoice::kAuto;
  EmConfig em;
  int threads = 1;  // 0: hardware concurrency
};

/// round(10 ln g) + 1. Throws kInvalidArgument for g < 2.
Index default_d(int g);

/// Config with every default resolved against data of shape n x p.
struct ResolvedConfig {
  RpecluConfig config;
  Index d = 0;
  RegStructure reg = RegStructure::kDiagonal;
};

/// Validates the config against the data shape. Throws kInvalidDimension
/// unless 1 <= d < p, kInvalidArgument for bad b / b_star / g, kInfeasible
/// when n < g or n <= d + 1, kStructureInfeasible for a full residual
/// covariance with n <= p - d.
ResolvedConfig resolve(const RpecluConfig& config, Index n, Index p);

struct ScoredPartition {
  int projection_index = 0;  // 1-based
  double bic = 0.0;
  double bic_gmm = 0.0;
  double bic_reg = 0.0;
  HardPartition partition;
};

struct SkippedProjection {
  int projection_index = 0;
  std::string reason;
};

/// Seed of projection b (1-based) under a master seed.
std::uint64_t projection_seed(std::uint64_t master, int b);

/// Scores projection b: Haar projection, GMM on x*a, regression of x*a_comp
/// on x*a, composite BIC. Throws on per-projection failure.
ScoredPartition score_projection(const DataMatrix& x, int b, const ResolvedConfig& config);

/// Descending BIC, ties by ascending projection_index; first b_star entries.
std::vector<ScoredPartition> select_top(std::vector<ScoredPartition> scored, int b_star);

struct Diagnostics {
  ResolvedConfig config;
  std::vector<SkippedProjection> skipped;
  std::optional<DiversitySummary> selected_diversity;  // needs b_star >= 2
  double seconds_scoring = 0.0;
  double seconds_consensus = 0.0;
};

struct RunResult {
  HardPartition final_partition;
  std::vector<ScoredPartition> ranking;  // every scored projection, ranked
  int b_star = 0;                        // ranking[0..b_star) were aggregated
  Diagnostics diagnostics;
};

/// The full ensemble: score B projections (in parallel over
/// `config.threads`), keep the top B*, aggregate by consensus in descending
/// BIC order. Output is independent of the thread count.
///
/// Throws kPartialEnsemble when fewer than b_star projections score.
RunResult run(const DataMatrix& x, const RpecluConfig& config);

}  // namespace rpeclu
