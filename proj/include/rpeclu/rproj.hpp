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

#include "rpeclu/types.hpp"

namespace rpeclu {

/// An orthonormal projection basis `a` (p x d) together with an orthonormal
/// basis `a_comp` (p x (p-d)) of its orthogonal complement, so that
/// [a | a_comp] is a p x p orthogonal matrix.
struct ProjectionPair {
  Matrix a;
  Matrix a_comp;
  std::uint64_t seed = 0;
  Index p = 0;
  Index d = 0;
};

/// Draws `a` from the Haar measure on p x d orthonormal frames.
///
/// A p x d standard Gaussian matrix is factored by Householder QR; the first
/// d columns of Q, with column signs flipped so that diag(R) > 0, are Haar
/// distributed. `a_comp` is the trailing p-d columns of the full Q formed from
/// the same d reflectors. Deterministic in (p, d, seed).
ProjectionPair generate_haar(Index p, Index d, std::uint64_t seed);

struct Projected {
  Matrix y;       // n x d, x * a
  Matrix y_comp;  // n x (p-d), x * a_comp
};

Projected project(const DataMatrix& x, const ProjectionPair& pair);

/// Largest element-wise deviation over the four orthogonality identities
/// (a'a = I, a_comp'a_comp = I, a'a_comp = 0, [a|a_comp] orthogonal).
double orthogonality_error(const ProjectionPair& pair);

}  // namespace rpeclu
