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

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation plus vector variants (AVX2+FMA on x86-64, NEON on AArch64).
// The active backend is picked once from CPU features and can be overridden
// with set_backend() or the RPECLU_SIMD environment variable
// ("scalar", "avx2", "neon").
//
// Vector variants reassociate sums, so results agree with the scalar
// reference to rounding, not bit-for-bit. Within one backend every kernel is
// deterministic.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace rpeclu::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

struct KernelTable {
  Backend backend;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y <- alpha * x + beta * y
  void (*axpby)(double alpha, const double* x, double beta, double* y,
                std::size_t n);
  // out[j] = sum_i (block[j*dim + i] - center[i])^2 for j < count
  void (*squared_distances_to)(const double* block, std::size_t dim,
                               std::size_t count, const double* center,
                               double* out);
  // out[j] = sum_i block[j*dim + i]^2 for j < count
  void (*column_sum_squares)(const double* block, std::size_t dim,
                             std::size_t count, double* out);
};

std::string_view backend_name(Backend backend);
bool backend_available(Backend backend);
std::vector<Backend> available_backends();

/// Kernel table for a specific backend. Throws if it is not available on this
/// machine.
const KernelTable& table_for(Backend backend);

/// The table used by the free functions below.
const KernelTable& active();
Backend active_backend();
void set_backend(Backend backend);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double sum_squares(std::span<const double> a);
void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y);
void squared_distances_to(std::span<const double> block, std::size_t dim,
                          std::span<const double> center,
                          std::span<double> out);
void column_sum_squares(std::span<const double> block, std::size_t dim,
                        std::span<double> out);

}  // namespace rpeclu::kernels
