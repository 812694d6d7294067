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

#include "kernels_impl.hpp"

namespace rpeclu::kernels::scalar {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

void axpby(double alpha, const double* x, double beta, double* y,
           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

void squared_distances_to(const double* block, std::size_t dim,
                          std::size_t count, const double* center,
                          double* out) {
  for (std::size_t j = 0; j < count; ++j)
    out[j] = squared_distance(block + j * dim, center, dim);
}

void column_sum_squares(const double* block, std::size_t dim,
                        std::size_t count, double* out) {
  for (std::size_t j = 0; j < count; ++j) {
    const double* col = block + j * dim;
    out[j] = dot(col, col, dim);
  }
}

constexpr KernelTable kTable{
    Backend::kScalar,   &dot, &squared_distance, &axpby, &squared_distances_to,
    &column_sum_squares,
};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace rpeclu::kernels::scalar
