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

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "rpeclu/error.hpp"

namespace rpeclu::kernels {
namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* best_table() {
  if (const char* env = std::getenv("RPECLU_SIMD")) {
    const std::string want(env);
    for (Backend b : available_backends())
      if (backend_name(b) == want) return &table_for(b);
  }
  if (backend_available(Backend::kAvx2)) return &table_for(Backend::kAvx2);
  if (backend_available(Backend::kNeon)) return &table_for(Backend::kNeon);
  return &table_for(Backend::kScalar);
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{best_table()};
  return slot;
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::kScalar: return true;
    case Backend::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return cpu_has_avx2();
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon})
    if (backend_available(b)) out.push_back(b);
  return out;
}

const KernelTable& table_for(Backend backend) {
  if (!backend_available(backend))
    throw Error(ErrorCode::kInvalidArgument,
                "SIMD backend '" + std::string(backend_name(backend)) +
                    "' is not available on this CPU");
  switch (backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::kAvx2: return avx2::table();
#endif
#if defined(__aarch64__)
    case Backend::kNeon: return neon::table();
#endif
    default: return scalar::table();
  }
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

Backend active_backend() { return active().backend; }

void set_backend(Backend backend) {
  active_slot().store(&table_for(backend), std::memory_order_release);
}

double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}

double sum_squares(std::span<const double> a) {
  return active().dot(a.data(), a.data(), a.size());
}

void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y) {
  active().axpby(alpha, x.data(), beta, y.data(), y.size());
}

void squared_distances_to(std::span<const double> block, std::size_t dim,
                          std::span<const double> center,
                          std::span<double> out) {
  active().squared_distances_to(block.data(), dim, out.size(), center.data(),
                                out.data());
}

void column_sum_squares(std::span<const double> block, std::size_t dim,
                        std::span<double> out) {
  active().column_sum_squares(block.data(), dim, out.size(), out.data());
}

}  // namespace rpeclu::kernels
