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

#include <string_view>

#include "rpeclu/types.hpp"

namespace rpeclu {

enum class RegStructure { kFull, kDiagonal };

std::string_view to_string(RegStructure structure);

/// Conditional Gaussian model of the complement coordinates given the
/// projected ones: y_comp | y ~ N([1 y] * coefficients, residual covariance).
struct RegressionFit {
  Matrix coefficients;  // (d+1) x (p-d); row 0 is the intercept
  Matrix residual_cov;  // (p-d) x (p-d), set when structure == kFull
  Vector residual_var;  // p-d, set when structure == kDiagonal
  double loglik = 0.0;
  long q_ybar = 0;
  RegStructure structure = RegStructure::kDiagonal;
};

inline constexpr double kResidualVarianceFloor = 1e-12;

long regression_free_parameters(Index p_minus_d, Index d, RegStructure structure);

/// Full when p-d <= min(n/2, 50), diagonal otherwise.
RegStructure auto_reg_structure(Index n, Index p, Index d);

/// Least squares with intercept; residual covariance is the MLE (divide by n).
/// Residual variances (eigenvalues, for kFull) are floored at
/// kResidualVarianceFloor.
///
/// Throws kInfeasible when n <= d+1, and kStructureInfeasible when kFull is
/// requested with n <= p-d.
RegressionFit fit_regression(const Matrix& y, const Matrix& y_comp,
                             RegStructure structure);

double bic_reg(const RegressionFit& fit, Index n);

/// Sum of the two BIC terms. Throws kScoreInvalid on non-finite input.
double composite_bic(double bic_gmm_value, double bic_reg_value);

}  // namespace rpeclu
