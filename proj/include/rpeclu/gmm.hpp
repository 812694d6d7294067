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
#include <string_view>
#include <vector>

#include "rpeclu/types.hpp"

namespace rpeclu {

enum class CovStructure { kFull, kDiagonal, kSpherical };

std::string_view to_string(CovStructure cov);
CovStructure parse_cov_structure(std::string_view text);

struct EmConfig {
  double tol = 1e-6;  // relative log-likelihood change
  int max_iter = 200;
  int n_starts = 3;
};

struct GmmModel {
  Vector weights;                   // G
  std::vector<Vector> means;        // G vectors of length d
  std::vector<Matrix> covariances;  // G d x d
  double loglik = 0.0;
  long q_y = 0;
  CovStructure cov_structure = CovStructure::kFull;

  int g() const { return static_cast<int>(weights.size()); }
  Index dim() const { return means.empty() ? 0 : means.front().size(); }
};

/// Per-iteration record of the returned start.
struct EmTrace {
  std::vector<double> loglik;            // after each E-step
  std::vector<double> rowsum_deviation;  // max |sum_k r_ik - 1| per E-step
  int iterations = 0;
  int reseeds = 0;
  bool converged = false;
};

struct GmmFit {
  GmmModel model;
  Matrix responsibilities;  // n x G
  EmTrace trace;
};

/// Free parameters: (G-1) weights + G*d means + covariance terms.
long gmm_free_parameters(int g, Index d, CovStructure cov);

/// Fits a G-component Gaussian mixture by EM, best of `config.n_starts`
/// k-means++-seeded starts by log-likelihood. Deterministic in `seed`.
///
/// Covariances are held above an eigenvalue floor of 1e-6 * trace / d. A
/// component whose responsibility mass drops below its minimum support (d+1
/// for full covariances, 2 otherwise) is re-seeded at the lowest-density
/// point; a start with more than three such events is abandoned.
///
/// Throws kInfeasible when n < g and kFitFailure when no start survives.
GmmFit fit_gmm(const Matrix& y, int g, CovStructure cov, std::uint64_t seed,
               const EmConfig& config = {});

/// Mixture log-likelihood of `y` under `model`.
double gmm_loglik(const GmmModel& model, const Matrix& y);

/// Row-wise argmax, ties to the smallest component. Labels are 1-based.
HardPartition map_partition(const Matrix& responsibilities);

/// 2 * loglik - q_y * ln(n).
double bic_gmm(const GmmModel& model, Index n);

}  // namespace rpeclu
