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
#include <span>
#include <vector>

#include "rpeclu/rproj.hpp"
#include "rpeclu/types.hpp"

namespace rpeclu {

struct AriReport {
  double ari = 0.0;
  std::size_t n = 0;
};

/// Hubert-Arabie adjusted Rand index from the contingency table. When the
/// expected and maximum index coincide (both partitions trivial) the value is
/// 1 for identical partitions and 0 otherwise.
AriReport adjusted_rand_index(const HardPartition& a, const HardPartition& b);

struct DiversitySummary {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  std::size_t pairs = 0;
};

/// ARI summary over all unordered pairs. Needs at least two partitions.
DiversitySummary pairwise_diversity(std::span<const HardPartition> partitions);

struct DistortionReport {
  double epsilon = 0.0;
  double fraction_within = 0.0;
  Index d_used = 0;
  std::size_t pairs_counted = 0;  // pairs with non-zero original distance
  bool empty = false;             // no pair could be counted
};

/// Fraction of unit pairs whose distance after x -> scale * a' x lies within
/// [(1-eps), (1+eps)] times the original distance. `a` is p x d, d <= p, with
/// orthonormal columns; coincident pairs are skipped.
DistortionReport jl_distortion(const DataMatrix& x, const Matrix& a, double epsilon,
                               double scale);

/// Same, with the conventional norm-restoring scale sqrt(p/d).
DistortionReport jl_distortion(const DataMatrix& x, const ProjectionPair& pair,
                               double epsilon);

struct KmeansResult {
  HardPartition partition;
  Matrix centers;  // g x p
  double wcss = 0.0;
  std::vector<double> wcss_trace;  // per Lloyd iteration of the returned start
};

/// Lloyd's algorithm from k-means++ seeds, best of `n_starts` by
/// within-cluster sum of squares. Deterministic in `seed`.
KmeansResult kmeans(const DataMatrix& x, int g, std::uint64_t seed, int n_starts,
                    int max_iter = 100);

inline HardPartition kmeans_baseline(const DataMatrix& x, int g, std::uint64_t seed,
                                     int n_starts) {
  return kmeans(x, g, seed, n_starts).partition;
}

/// Spearman rank correlation with average ranks for ties. Returns NaN when
/// either input is constant.
double spearman_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace rpeclu
