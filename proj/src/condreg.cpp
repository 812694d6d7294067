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

#include "rpeclu/condreg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rpeclu/error.hpp"

namespace rpeclu {
namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

}  // namespace

std::string_view to_string(RegStructure structure) {
  return structure == RegStructure::kFull ? "full" : "diagonal";
}

long regression_free_parameters(Index p_minus_d, Index d, RegStructure structure) {
  const long m = static_cast<long>(p_minus_d);
  const long slopes = m * (static_cast<long>(d) + 1);
  return structure == RegStructure::kFull ? slopes + m * (m + 1) / 2 : slopes + m;
}

RegStructure auto_reg_structure(Index n, Index p, Index d) {
  const double limit = std::min(static_cast<double>(n) / 2.0, 50.0);
  return static_cast<double>(p - d) <= limit ? RegStructure::kFull
                                             : RegStructure::kDiagonal;
}

RegressionFit fit_regression(const Matrix& y, const Matrix& y_comp,
                             RegStructure structure) {
  const Index n = y.rows();
  const Index d = y.cols();
  const Index m = y_comp.cols();
  if (y_comp.rows() != n)
    throw Error(ErrorCode::kShapeMismatch,
                "regression needs equal row counts (" + std::to_string(n) + " vs " +
                    std::to_string(y_comp.rows()) + ")");
  if (n <= d + 1)
    throw Error(ErrorCode::kInfeasible,
                "regression needs n > d+1 (n=" + std::to_string(n) +
                    ", d=" + std::to_string(d) + ")");
  if (structure == RegStructure::kFull && n <= m)
    throw Error(ErrorCode::kStructureInfeasible,
                "full residual covariance needs n > p-d (n=" + std::to_string(n) +
                    ", p-d=" + std::to_string(m) + "); use the diagonal structure");

  Matrix design(n, d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = y;

  RegressionFit fit;
  fit.structure = structure;
  fit.q_ybar = regression_free_parameters(m, d, structure);
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  fit.coefficients = qr.solve(y_comp);
  const Matrix residuals = y_comp - design * fit.coefficients;
  const double nd = static_cast<double>(n);

  // With MLE covariance S and floored spectrum s_f, the Gaussian
  // log-likelihood is -n/2 * sum_j (log 2pi + log s_f_j + s_j / s_f_j).
  double loglik = 0.0;
  if (structure == RegStructure::kDiagonal) {
    fit.residual_var = residuals.colwise().squaredNorm().transpose() / nd;
    for (Index j = 0; j < m; ++j) {
      const double s = fit.residual_var(j);
      const double sf = std::max(s, kResidualVarianceFloor);
      fit.residual_var(j) = sf;
      loglik += kLog2Pi + std::log(sf) + s / sf;
    }
  } else {
    fit.residual_cov = residuals.transpose() * residuals / nd;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(fit.residual_cov);
    const Vector& s = eig.eigenvalues();
    bool floored = false;
    for (Index j = 0; j < m; ++j) {
      const double sf = std::max(s(j), kResidualVarianceFloor);
      floored = floored || sf != s(j);
      loglik += kLog2Pi + std::log(sf) + s(j) / sf;
    }
    if (floored) {
      const Vector lifted = s.cwiseMax(kResidualVarianceFloor);
      fit.residual_cov =
          eig.eigenvectors() * lifted.asDiagonal() * eig.eigenvectors().transpose();
    }
  }
  fit.loglik = -0.5 * nd * loglik;
  return fit;
}

double bic_reg(const RegressionFit& fit, Index n) {
  return 2.0 * fit.loglik - static_cast<double>(fit.q_ybar) * std::log(static_cast<double>(n));
}

double composite_bic(double bic_gmm_value, double bic_reg_value) {
  if (!std::isfinite(bic_gmm_value) || !std::isfinite(bic_reg_value))
    throw Error(ErrorCode::kScoreInvalid, "composite BIC has a non-finite term");
  return bic_gmm_value + bic_reg_value;
}

}  // namespace rpeclu
