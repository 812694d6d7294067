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

#include "rpeclu/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rpeclu/error.hpp"
#include "rpeclu/kernels.hpp"

namespace rpeclu {
namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::kShapeMismatch,
                "membership shapes differ: " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
}

double assignment_value(const Matrix& weight, const Permutation& perm) {
  double v = 0.0;
  for (std::size_t j = 0; j < perm.size(); ++j)
    v += weight(static_cast<Index>(j), perm[j]);
  return v;
}

double mean_row_distance(const Matrix& u, const Matrix& p_mat) {
  return (u - p_mat).squaredNorm() / static_cast<double>(u.rows());
}

}  // namespace

MembershipMatrix MembershipMatrix::from_partition(const HardPartition& partition) {
  validate(partition);
  MembershipMatrix m;
  m.hard = true;
  m.u = Matrix::Zero(static_cast<Index>(partition.size()), partition.g);
  for (std::size_t i = 0; i < partition.size(); ++i)
    m.u(static_cast<Index>(i), partition.labels[i] - 1) = 1.0;
  return m;
}

MembershipMatrix MembershipMatrix::from_soft(Matrix u) {
  if (u.size() == 0) throw Error(ErrorCode::kEmptyInput, "empty membership matrix");
  if ((u.array() < 0.0).any() || (u.array() > 1.0).any())
    throw Error(ErrorCode::kInvalidArgument, "membership entries must lie in [0,1]");
  for (Index i = 0; i < u.rows(); ++i)
    if (std::abs(u.row(i).sum() - 1.0) > 1e-12)
      throw Error(ErrorCode::kInvalidArgument,
                  "membership row " + std::to_string(i) + " does not sum to 1");
  MembershipMatrix m;
  m.hard = ((u.array() == 0.0) || (u.array() == 1.0)).all();
  m.u = std::move(u);
  return m;
}

Matrix apply_permutation(const Matrix& u, const Permutation& perm) {
  if (static_cast<Index>(perm.size()) != u.cols())
    throw Error(ErrorCode::kShapeMismatch, "permutation length differs from column count");
  Matrix out(u.rows(), u.cols());
  for (std::size_t j = 0; j < perm.size(); ++j) out.col(perm[j]) = u.col(static_cast<Index>(j));
  return out;
}

Permutation max_weight_assignment(const Matrix& weight) {
  const Index g = weight.rows();
  if (weight.cols() != g)
    throw Error(ErrorCode::kShapeMismatch, "assignment needs a square matrix");
  if (g == 0) return {};
  // Shortest augmenting path with potentials on cost = -weight; 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> row_pot(g + 1, 0.0), col_pot(g + 1, 0.0);
  std::vector<Index> match(g + 1, 0), way(g + 1, 0);
  for (Index i = 1; i <= g; ++i) {
    match[0] = i;
    Index j0 = 0;
    std::vector<double> min_slack(g + 1, inf);
    std::vector<bool> used(g + 1, false);
    do {
      used[j0] = true;
      const Index i0 = match[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= g; ++j) {
        if (used[j]) continue;
        const double cur = -weight(i0 - 1, j - 1) - row_pot[i0] - col_pot[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= g; ++j) {
        if (used[j]) {
          row_pot[match[j]] += delta;
          col_pot[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const Index j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Permutation perm(static_cast<std::size_t>(g));
  for (Index j = 1; j <= g; ++j) perm[match[j] - 1] = static_cast<int>(j - 1);
  return perm;
}

Permutation optimal_permutation(const Matrix& u, const Matrix& p_mat) {
  require_same_shape(u, p_mat);
  const Index g = u.cols();
  const Matrix cross = u.transpose() * p_mat;  // cross(j,k) = <u_.j, p_.k>
  const double best = assignment_value(cross, max_weight_assignment(cross));
  const double eps = 1e-10 * (1.0 + std::abs(best));

  // Fix rows in order, each to the smallest column that still admits an
  // optimal completion.
  Permutation perm(static_cast<std::size_t>(g), -1);
  std::vector<bool> taken(static_cast<std::size_t>(g), false);
  double fixed = 0.0;
  for (Index j = 0; j < g; ++j) {
    const Index rest = g - j - 1;
    for (Index k = 0; k < g; ++k) {
      if (taken[k]) continue;
      double completion = 0.0;
      if (rest > 0) {
        Matrix sub(rest, rest);
        Index r = 0;
        for (Index jj = j + 1; jj < g; ++jj, ++r) {
          Index c = 0;
          for (Index kk = 0; kk < g; ++kk) {
            if (taken[kk] || kk == k) continue;
            sub(r, c++) = cross(jj, kk);
          }
        }
        completion = assignment_value(sub, max_weight_assignment(sub));
      }
      if (fixed + cross(j, k) + completion >= best - eps) {
        perm[j] = static_cast<int>(k);
        taken[k] = true;
        fixed += cross(j, k);
        break;
      }
    }
  }
  return perm;
}

double dissimilarity(const Matrix& u, const Matrix& p_mat) {
  require_same_shape(u, p_mat);
  return mean_row_distance(apply_permutation(u, optimal_permutation(u, p_mat)), p_mat);
}

ConsensusResult aggregate(std::span<const MembershipMatrix> partitions) {
  if (partitions.empty())
    throw Error(ErrorCode::kEmptyInput, "consensus needs at least one partition");
  ConsensusResult out;
  out.state.p_mat = partitions.front().u;
  out.state.count = 1;
  Permutation identity(static_cast<std::size_t>(out.state.p_mat.cols()));
  for (std::size_t j = 0; j < identity.size(); ++j) identity[j] = static_cast<int>(j);
  out.permutations.push_back(identity);

  Matrix& p = out.state.p_mat;
  const auto size = static_cast<std::size_t>(p.size());
  for (std::size_t b = 1; b < partitions.size(); ++b) {
    require_same_shape(partitions[b].u, p);
    Permutation perm = optimal_permutation(partitions[b].u, p);
    const Matrix relabeled = apply_permutation(partitions[b].u, perm);
    const double count = static_cast<double>(b + 1);
    // P <- ((b-1)/b) P + (1/b) U, on the contiguous column-major buffers.
    kernels::axpby(1.0 / count, {relabeled.data(), size}, (count - 1.0) / count,
                   {p.data(), size});
    out.state.count = static_cast<int>(b + 1);
    out.permutations.push_back(std::move(perm));
  }

  out.partition.g = static_cast<int>(p.cols());
  out.partition.labels.resize(static_cast<std::size_t>(p.rows()));
  for (Index i = 0; i < p.rows(); ++i) {
    Index best = 0;
    for (Index k = 1; k < p.cols(); ++k)
      if (p(i, k) > p(i, best)) best = k;
    out.partition.labels[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
  }
  return out;
}

double consensus_objective(std::span<const MembershipMatrix> partitions,
                           const Matrix& candidate) {
  if (partitions.empty())
    throw Error(ErrorCode::kEmptyInput, "consensus objective needs partitions");
  double total = 0.0;
  for (const auto& m : partitions) total += dissimilarity(m.u, candidate);
  return total / static_cast<double>(partitions.size());
}

}  // namespace rpeclu
