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

#include <span>
#include <vector>

#include "rpeclu/types.hpp"

namespace rpeclu {

/// n x G membership matrix; rows sum to one. Hard matrices are 0/1.
struct MembershipMatrix {
  Matrix u;
  bool hard = true;

  static MembershipMatrix from_partition(const HardPartition& partition);
  /// Validates entries in [0,1] and unit row sums (1e-12).
  static MembershipMatrix from_soft(Matrix u);
};

/// Running consensus candidate P and the number of partitions absorbed.
struct ConsensusState {
  Matrix p_mat;
  int count = 0;
};

/// perm[j] = k relabels column j of a membership matrix as column k.
using Permutation = std::vector<int>;

/// Column j of `u` moved to column perm[j].
Matrix apply_permutation(const Matrix& u, const Permutation& perm);

/// Maximum-weight perfect matching on a square matrix: returns perm with
/// perm[row] = column. Hungarian algorithm, O(G^3). Ties are not ordered.
Permutation max_weight_assignment(const Matrix& weight);

/// Column permutation of `u` minimizing (1/n) sum_i ||pi(u_i) - p_i||^2,
/// solved exactly as the assignment maximizing trace(pi(u)' p). Among optimal
/// permutations the lexicographically smallest is returned.
Permutation optimal_permutation(const Matrix& u, const Matrix& p_mat);

/// Permutation-minimized mean squared row distance between `u` and `p_mat`.
double dissimilarity(const Matrix& u, const Matrix& p_mat);

struct ConsensusResult {
  ConsensusState state;
  HardPartition partition;
  std::vector<Permutation> permutations;  // one per absorbed input
};

/// Greedy sequential consensus. P starts as the first input; input b is
/// relabeled optimally against P and absorbed as P <- ((b-1)/b) P + (1/b) U.
/// The final hard partition is the row-wise argmax of P, ties to the smallest
/// cluster index.
ConsensusResult aggregate(std::span<const MembershipMatrix> partitions);

/// Mean permutation-minimized dissimilarity of `candidate` to the ensemble.
double consensus_objective(std::span<const MembershipMatrix> partitions,
                           const Matrix& candidate);

}  // namespace rpeclu
