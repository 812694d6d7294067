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

#include "rpeclu/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>

#include "rpeclu/error.hpp"
#include "rpeclu/kernels.hpp"
#include "rpeclu/seed.hpp"

namespace rpeclu {
namespace {

constexpr double kRelativeFloor = 1e-6;
constexpr int kMaxReseeds = 3;
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

struct Component {
  double log_weight = 0.0;
  Vector mean;
  Matrix cov;
  Eigen::LLT<Matrix> chol;
  double log_det = 0.0;
};

struct EStep {
  Matrix resp;          // n x G
  Vector log_density;   // n, mixture log-density per unit
  double loglik = 0.0;
  double rowsum_deviation = 0.0;
};

double min_support(CovStructure cov, Index d) {
  return cov == CovStructure::kFull ? static_cast<double>(d + 1) : 2.0;
}

// Lifts the spectrum of `cov` to at least `floor`, in place.
void apply_floor(Matrix& cov, CovStructure structure, double floor) {
  const Index d = cov.rows();
  switch (structure) {
    case CovStructure::kFull: {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(cov, Eigen::EigenvaluesOnly);
      const double min_eig = eig.eigenvalues()(0);
      if (min_eig < floor) cov.diagonal().array() += floor - min_eig;
      break;
    }
    case CovStructure::kDiagonal:
    case CovStructure::kSpherical:
      for (Index j = 0; j < d; ++j) cov(j, j) = std::max(cov(j, j), floor);
      break;
  }
}

bool factor(Component& c) {
  c.chol.compute(c.cov);
  if (c.chol.info() != Eigen::Success) return false;
  const auto diag = c.chol.matrixLLT().diagonal();
  if ((diag.array() <= 0.0).any()) return false;
  c.log_det = 2.0 * diag.array().log().sum();
  return std::isfinite(c.log_det);
}

// Log-density of every column of `yt` (d x n) under each component, plus
// the normalized responsibilities.
EStep expectation(const Matrix& yt, std::span<const Component> comps) {
  const Index d = yt.rows();
  const Index n = yt.cols();
  const Index g = static_cast<Index>(comps.size());
  EStep e;
  e.resp.resize(n, g);
  Matrix work(d, n);
  Vector quad(n);
  for (Index k = 0; k < g; ++k) {
    const Component& c = comps[k];
    work = yt.colwise() - c.mean;
    c.chol.matrixL().solveInPlace(work);
    kernels::column_sum_squares({work.data(), static_cast<std::size_t>(work.size())},
                                static_cast<std::size_t>(d),
                                {quad.data(), static_cast<std::size_t>(n)});
    const double constant = c.log_weight - 0.5 * (d * kLog2Pi + c.log_det);
    e.resp.col(k) = (constant - 0.5 * quad.array()).matrix();
  }
  e.log_density.resize(n);
  for (Index i = 0; i < n; ++i) {
    auto row = e.resp.row(i);
    const double m = row.maxCoeff();
    const double lse =
        m == -std::numeric_limits<double>::infinity()
            ? m
            : m + std::log((row.array() - m).exp().sum());
    e.log_density(i) = lse;
    row = (row.array() - lse).exp().matrix();
    e.rowsum_deviation = std::max(e.rowsum_deviation, std::abs(row.sum() - 1.0));
  }
  e.loglik = e.log_density.sum();
  return e;
}

class EmRun {
 public:
  EmRun(const Matrix& y, int g, CovStructure structure, const EmConfig& config)
      : yt_(y.transpose()),
        g_(g),
        structure_(structure),
        config_(config),
        n_(y.rows()),
        d_(y.cols()) {
    Vector mu = yt_.rowwise().mean();
    Matrix centered = yt_.colwise() - mu;
    global_cov_ = centered * centered.transpose() / static_cast<double>(n_);
    const double mean_var = global_cov_.trace() / static_cast<double>(d_);
    abs_floor_ = std::max(1e-10 * mean_var, 1e-12);
  }

  // Returns nullopt when the start degenerates beyond recovery.
  std::optional<GmmFit> run(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    reseeds_ = 0;
    std::vector<Component> comps(static_cast<std::size_t>(g_));
    if (!maximize(initial_responsibilities(rng), comps, nullptr)) return std::nullopt;

    EmTrace trace;
    double previous = 0.0;
    EStep e;
    for (int it = 0;; ++it) {
      e = expectation(yt_, comps);
      if (!std::isfinite(e.loglik)) return std::nullopt;
      trace.loglik.push_back(e.loglik);
      trace.rowsum_deviation.push_back(e.rowsum_deviation);
      if (it > 0 && std::abs(e.loglik - previous) < config_.tol * std::abs(e.loglik)) {
        trace.converged = true;
        break;
      }
      if (it >= config_.max_iter) break;
      if (!maximize(e.resp, comps, &e.log_density)) return std::nullopt;
      trace.iterations = it + 1;
      previous = e.loglik;
    }
    trace.reseeds = reseeds_;

    GmmFit fit;
    fit.model.cov_structure = structure_;
    fit.model.q_y = gmm_free_parameters(g_, d_, structure_);
    fit.model.loglik = e.loglik;
    fit.model.weights.resize(g_);
    for (int k = 0; k < g_; ++k) {
      fit.model.weights(k) = std::exp(comps[k].log_weight);
      fit.model.means.push_back(comps[k].mean);
      fit.model.covariances.push_back(comps[k].cov);
    }
    fit.model.weights /= fit.model.weights.sum();
    fit.responsibilities = std::move(e.resp);
    fit.trace = std::move(trace);
    return fit;
  }

 private:
  // k-means++ seeds, then every unit is assigned to its nearest seed.
  Matrix initial_responsibilities(std::mt19937_64& rng) const {
    const auto n = static_cast<std::size_t>(n_);
    const auto d = static_cast<std::size_t>(d_);
    std::span<const double> points(yt_.data(), n * d);
    std::vector<Index> centers;
    std::uniform_int_distribution<Index> first(0, n_ - 1);
    centers.push_back(first(rng));

    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<double> dist(n);
    std::vector<int> nearest(n, 0);
    auto absorb = [&](int k) {
      kernels::squared_distances_to(points, d, {yt_.col(centers[k]).data(), d}, dist);
      for (std::size_t i = 0; i < n; ++i) {
        if (dist[i] < best[i]) {
          best[i] = dist[i];
          nearest[i] = k;
        }
      }
    };
    absorb(0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 1; k < g_; ++k) {
      double total = 0.0;
      for (double b : best) total += b;
      Index pick = 0;
      if (total > 0.0) {
        double target = unit(rng) * total;
        std::size_t i = 0;
        for (; i + 1 < n; ++i) {
          target -= best[i];
          if (target < 0.0) break;
        }
        pick = static_cast<Index>(i);
      } else {
        pick = first(rng);
      }
      centers.push_back(pick);
      absorb(k);
    }

    Matrix resp = Matrix::Zero(n_, g_);
    for (std::size_t i = 0; i < n; ++i) resp(static_cast<Index>(i), nearest[i]) = 1.0;
    return resp;
  }

  bool maximize(const Matrix& resp, std::vector<Component>& comps,
                const Vector* log_density) {
    const Vector mass = resp.colwise().sum().transpose();
    const double support = min_support(structure_, d_);
    std::vector<Index> used_points;
    for (int k = 0; k < g_; ++k) {
      Component& c = comps[k];
      if (mass(k) < support) {
        if (++reseeds_ > kMaxReseeds) return false;
        reseed(c, log_density, used_points);
      } else {
        c.mean = yt_ * resp.col(k) / mass(k);
        Matrix centered = yt_.colwise() - c.mean;
        Matrix weighted = centered * resp.col(k).asDiagonal();
        Matrix s = weighted * centered.transpose() / mass(k);
        switch (structure_) {
          case CovStructure::kFull:
            c.cov = std::move(s);
            break;
          case CovStructure::kDiagonal:
            c.cov = s.diagonal().asDiagonal();
            break;
          case CovStructure::kSpherical:
            c.cov = Matrix::Identity(d_, d_) * (s.trace() / static_cast<double>(d_));
            break;
        }
        c.log_weight = std::log(mass(k) / static_cast<double>(n_));
      }
      const double floor =
          std::max(kRelativeFloor * c.cov.trace() / static_cast<double>(d_), abs_floor_);
      c.cov = (0.5 * (c.cov + c.cov.transpose())).eval();
      apply_floor(c.cov, structure_, floor);
      if (!factor(c)) return false;
    }
    // Re-seeded components carry pseudo-mass; renormalize the weights.
    double total = 0.0;
    for (const auto& c : comps) total += std::exp(c.log_weight);
    const double log_total = std::log(total);
    for (auto& c : comps) c.log_weight -= log_total;
    return true;
  }

  void reseed(Component& c, const Vector* log_density,
              std::vector<Index>& used_points) const {
    // Lowest mixture density; before the first E-step, farthest from the
    // centroid.
    Vector score;
    if (log_density != nullptr) {
      score = *log_density;
    } else {
      const Vector mu = yt_.rowwise().mean();
      score = -(yt_.colwise() - mu).colwise().squaredNorm().transpose();
    }
    Index pick = 0;
    double lowest = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n_; ++i) {
      if (std::find(used_points.begin(), used_points.end(), i) != used_points.end())
        continue;
      if (score(i) < lowest) {
        lowest = score(i);
        pick = i;
      }
    }
    used_points.push_back(pick);
    c.mean = yt_.col(pick);
    switch (structure_) {
      case CovStructure::kFull: c.cov = global_cov_; break;
      case CovStructure::kDiagonal: c.cov = global_cov_.diagonal().asDiagonal(); break;
      case CovStructure::kSpherical:
        c.cov = Matrix::Identity(d_, d_) * (global_cov_.trace() / static_cast<double>(d_));
        break;
    }
    c.log_weight = -std::log(static_cast<double>(g_));
  }

  Matrix yt_;
  int g_;
  CovStructure structure_;
  EmConfig config_;
  Index n_;
  Index d_;
  Matrix global_cov_;
  double abs_floor_ = 0.0;
  int reseeds_ = 0;
};

}  // namespace

std::string_view to_string(CovStructure cov) {
  switch (cov) {
    case CovStructure::kFull: return "full";
    case CovStructure::kDiagonal: return "diagonal";
    case CovStructure::kSpherical: return "spherical";
  }
  return "unknown";
}

CovStructure parse_cov_structure(std::string_view text) {
  if (text == "full") return CovStructure::kFull;
  if (text == "diagonal") return CovStructure::kDiagonal;
  if (text == "spherical") return CovStructure::kSpherical;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown covariance structure '" + std::string(text) + "'");
}

long gmm_free_parameters(int g, Index d, CovStructure cov) {
  const long gl = g;
  const long dl = static_cast<long>(d);
  long cov_terms = 0;
  switch (cov) {
    case CovStructure::kFull: cov_terms = gl * dl * (dl + 1) / 2; break;
    case CovStructure::kDiagonal: cov_terms = gl * dl; break;
    case CovStructure::kSpherical: cov_terms = gl; break;
  }
  return (gl - 1) + gl * dl + cov_terms;
}

GmmFit fit_gmm(const Matrix& y, int g, CovStructure cov, std::uint64_t seed,
               const EmConfig& config) {
  if (g < 1) throw Error(ErrorCode::kInvalidArgument, "fit_gmm needs g >= 1");
  if (y.cols() < 1) throw Error(ErrorCode::kInvalidDimension, "fit_gmm needs d >= 1");
  if (y.rows() < g)
    throw Error(ErrorCode::kInfeasible,
                "fit_gmm needs n >= g (n=" + std::to_string(y.rows()) +
                    ", g=" + std::to_string(g) + ")");
  if (!y.allFinite())
    throw Error(ErrorCode::kInvalidArgument, "fit_gmm input contains non-finite values");

  EmRun em(y, g, cov, config);
  std::optional<GmmFit> best;
  const int starts = std::max(1, config.n_starts);
  for (int s = 0; s < starts; ++s) {
    auto fit = em.run(derive_seed(seed, static_cast<std::uint64_t>(s)));
    if (fit && (!best || fit->model.loglik > best->model.loglik)) best = std::move(fit);
  }
  if (!best)
    throw Error(ErrorCode::kFitFailure,
                "EM degenerated in all " + std::to_string(starts) + " starts");
  return std::move(*best);
}

double gmm_loglik(const GmmModel& model, const Matrix& y) {
  if (y.cols() != model.dim())
    throw Error(ErrorCode::kDimensionMismatch,
                "data has " + std::to_string(y.cols()) + " columns, model expects " +
                    std::to_string(model.dim()));
  std::vector<Component> comps(static_cast<std::size_t>(model.g()));
  for (int k = 0; k < model.g(); ++k) {
    comps[k].log_weight = std::log(model.weights(k));
    comps[k].mean = model.means[k];
    comps[k].cov = model.covariances[k];
    if (!factor(comps[k]))
      throw Error(ErrorCode::kInvalidArgument, "covariance is not positive definite");
  }
  const Matrix yt = y.transpose();
  return expectation(yt, comps).loglik;
}

HardPartition map_partition(const Matrix& responsibilities) {
  if (responsibilities.size() == 0)
    throw Error(ErrorCode::kEmptyInput, "map_partition on an empty matrix");
  HardPartition out;
  out.g = static_cast<int>(responsibilities.cols());
  out.labels.resize(static_cast<std::size_t>(responsibilities.rows()));
  for (Index i = 0; i < responsibilities.rows(); ++i) {
    const auto row = responsibilities.row(i);
    if (std::abs(row.sum() - 1.0) > 1e-8)
      throw Error(ErrorCode::kInvalidArgument,
                  "responsibility row " + std::to_string(i) + " does not sum to 1");
    Index best = 0;
    for (Index k = 1; k < row.size(); ++k)
      if (row(k) > row(best)) best = k;
    out.labels[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
  }
  return out;
}

double bic_gmm(const GmmModel& model, Index n) {
  return 2.0 * model.loglik - static_cast<double>(model.q_y) * std::log(static_cast<double>(n));
}

}  // namespace rpeclu
