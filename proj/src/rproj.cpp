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

#include "rpeclu/rproj.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "rpeclu/error.hpp"

namespace rpeclu {

ProjectionPair generate_haar(Index p, Index d, std::uint64_t seed) {
  if (p <= 0 || d < 1 || d >= p)
    throw Error(ErrorCode::kInvalidDimension,
                "projection needs 1 <= d < p (got p=" + std::to_string(p) +
                    ", d=" + std::to_string(d) + ")");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix gauss(p, d);
  // Column-major fill order is part of the determinism contract.
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < p; ++i) gauss(i, j) = normal(rng);

  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix q = qr.householderQ();  // p x p, d reflectors applied to I_p

  const auto r_diag = qr.matrixQR().diagonal();
  for (Index j = 0; j < d; ++j)
    if (r_diag(j) < 0.0) q.col(j) = -q.col(j);

  ProjectionPair pair;
  pair.a = q.leftCols(d);
  pair.a_comp = q.rightCols(p - d);
  pair.seed = seed;
  pair.p = p;
  pair.d = d;
  return pair;
}

Projected project(const DataMatrix& x, const ProjectionPair& pair) {
  if (x.cols() != pair.p)
    throw Error(ErrorCode::kDimensionMismatch,
                "data has " + std::to_string(x.cols()) +
                    " columns but the projection expects p=" +
                    std::to_string(pair.p));
  Projected out;
  out.y.noalias() = x * pair.a;
  out.y_comp.noalias() = x * pair.a_comp;
  return out;
}

double orthogonality_error(const ProjectionPair& pair) {
  const Index d = pair.a.cols();
  const Index m = pair.a_comp.cols();
  double err = 0.0;
  err = std::max(err, (pair.a.transpose() * pair.a - Matrix::Identity(d, d))
                          .cwiseAbs()
                          .maxCoeff());
  if (m > 0) {
    err = std::max(err,
                   (pair.a_comp.transpose() * pair.a_comp - Matrix::Identity(m, m))
                       .cwiseAbs()
                       .maxCoeff());
    err = std::max(err, (pair.a.transpose() * pair.a_comp).cwiseAbs().maxCoeff());
  }
  Matrix full(pair.a.rows(), d + m);
  full << pair.a, pair.a_comp;
  err = std::max(err, (full * full.transpose() -
                       Matrix::Identity(full.rows(), full.rows()))
                          .cwiseAbs()
                          .maxCoeff());
  return err;
}

}  // namespace rpeclu
