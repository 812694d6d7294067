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

#include "rpeclu/simgen.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rpeclu/error.hpp"

namespace rpeclu {
namespace {

void validate_config(const ScenarioConfig& c) {
  if (c.p < 2) throw Error(ErrorCode::kInvalidDimension, "scenario needs p >= 2");
  if (c.g < 1) throw Error(ErrorCode::kInvalidArgument, "scenario needs g >= 1");
  if (c.n_per_group < 2)
    throw Error(ErrorCode::kInvalidArgument, "scenario needs n_per_group >= 2");
  if (c.tau.size() != 1 && c.tau.size() != static_cast<std::size_t>(c.g))
    throw Error(ErrorCode::kInvalidArgument,
                "tau needs 1 or g=" + std::to_string(c.g) + " values");
  if (!(c.relevant_fraction > 0.0 && c.relevant_fraction <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "relevant_fraction must lie in (0,1]");
  const double lower = -1.0 / static_cast<double>(c.p - 1);
  for (double t : c.tau) {
    if (!(t > lower && t < 1.0))
      throw Error(ErrorCode::kInvalidArgument,
                  "tau=" + std::to_string(t) + " outside (" + std::to_string(lower) +
                      ", 1)");
    // Eigenvalues of Sigma are tau (multiplicity p-1) and tau + p(1-tau).
    if (t <= 0.0)
      throw Error(ErrorCode::kInvalidArgument,
                  "tau=" + std::to_string(t) + " makes the covariance not positive definite");
  }
  const auto relevant =
      static_cast<Index>(std::llround(c.relevant_fraction * static_cast<double>(c.p)));
  if (relevant < c.g)
    throw Error(ErrorCode::kInvalidArgument,
                "fewer relevant coordinates than groups");
}

double transform_value(Transform t, double v) {
  switch (t) {
    case Transform::kNone: return v;
    case Transform::kExp: return std::exp(v);
    case Transform::kLogAbs: return std::log(std::abs(v));
    case Transform::kSqrtAbs: return std::sqrt(std::abs(v));
  }
  return v;
}

}  // namespace

std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::kNone: return "none";
    case Transform::kExp: return "exp";
    case Transform::kLogAbs: return "log_abs";
    case Transform::kSqrtAbs: return "sqrt_abs";
  }
  return "unknown";
}

double group_tau(const ScenarioConfig& config, int k) {
  return config.tau.size() == 1 ? config.tau.front()
                                : config.tau.at(static_cast<std::size_t>(k));
}

Vector group_mean(const ScenarioConfig& config, int k) {
  const auto relevant = static_cast<Index>(
      std::llround(config.relevant_fraction * static_cast<double>(config.p)));
  const Index block = relevant / config.g;
  const Index begin = block * k;
  const Index end = (k == config.g - 1) ? relevant : begin + block;
  Vector mu = Vector::Zero(config.p);
  mu.segment(begin, end - begin).setConstant(config.mean_magnitude);
  return mu;
}

Matrix group_covariance(const ScenarioConfig& config, int k) {
  const double tau = group_tau(config, k);
  Matrix sigma = Matrix::Constant(config.p, config.p, 1.0 - tau);
  sigma.diagonal().setOnes();
  return sigma;
}

LabeledDataset generate(const ScenarioConfig& config) {
  validate_config(config);
  const Index p = config.p;
  const Index n = static_cast<Index>(config.g) * config.n_per_group;

  LabeledDataset out;
  out.x.resize(n, p);
  out.truth.g = config.g;
  out.truth.labels.reserve(static_cast<std::size_t>(n));

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(p);
  Index row = 0;
  for (int k = 0; k < config.g; ++k) {
    const double tau = group_tau(config, k);
    const Vector mu = group_mean(config, k);
    // x = mu + sqrt(tau) z + sqrt(1 - tau) w 1 has covariance
    // tau I + (1 - tau) 11'.
    const double a = std::sqrt(tau);
    const double b = std::sqrt(1.0 - tau);
    for (int i = 0; i < config.n_per_group; ++i, ++row) {
      for (Index j = 0; j < p; ++j) z(j) = normal(rng);
      const double w = normal(rng);
      out.x.row(row) = (mu + a * z + Vector::Constant(p, b * w)).transpose();
      out.truth.labels.push_back(k + 1);
    }
  }

  if (config.rotated) {
    const int flipped_groups = config.g / 2;
    const Index rows = static_cast<Index>(flipped_groups) * config.n_per_group;
    for (Index j = 0, count = 0; j < p && count < 50; j += 2, ++count)
      out.x.col(j).head(rows) *= -1.0;
  }

  if (config.transform != Transform::kNone)
    out.x = out.x.unaryExpr([t = config.transform](double v) { return transform_value(t, v); });
  return out;
}

ScenarioConfig scenario_table(int id) {
  if (id < 1 || id > kScenarioCount)
    throw Error(ErrorCode::kInvalidArgument,
                "scenario id " + std::to_string(id) + " outside 1.." +
                    std::to_string(kScenarioCount));
  ScenarioConfig c;
  c.n_per_group = 100;
  if (id <= 12) {
    static constexpr Index kP[] = {100, 500, 1000};
    const int block = (id - 1) / 3;  // 0: G2 tau.1, 1: G4 tau.1, 2: G2 tau.4, 3: G4 tau.4
    c.p = kP[(id - 1) % 3];
    c.g = (block % 2 == 0) ? 2 : 4;
    c.tau = {block < 2 ? 0.1 : 0.4};
    return c;
  }
  if (id <= 20) {
    const int offset = (id - 13) % 4;  // 0: .1-.6 p100, 1: .1-.3 p100, 2: .1-.6 p500, 3: .1-.3 p500
    c.p = offset < 2 ? 100 : 500;
    c.g = 2;
    c.tau = {0.1, (offset % 2 == 0) ? 0.6 : 0.3};
    c.rotated = id >= 17;
    return c;
  }
  static constexpr Transform kTransforms[] = {Transform::kExp, Transform::kLogAbs,
                                              Transform::kSqrtAbs};
  c.p = 100;
  c.g = id <= 23 ? 2 : 4;
  c.tau = {0.1};
  c.transform = kTransforms[(id - 21) % 3];
  c.relevant_fraction = 0.5;
  return c;
}

}  // namespace rpeclu
