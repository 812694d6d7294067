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

#include "rpeclu/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "rpeclu/error.hpp"
#include "rpeclu/kernels.hpp"
#include "rpeclu/seed.hpp"

namespace rpeclu {
namespace {

double choose2(double x) { return x * (x - 1.0) / 2.0; }

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

AriReport adjusted_rand_index(const HardPartition& a, const HardPartition& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::kShapeMismatch,
                "ARI needs equal lengths (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  if (a.labels.empty()) throw Error(ErrorCode::kEmptyInput, "ARI of empty partitions");

  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cells[{a.labels[i], b.labels[i]}] += 1.0;
    rows[a.labels[i]] += 1.0;
    cols[b.labels[i]] += 1.0;
  }
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, count] : cells) index += choose2(count);
  for (const auto& [key, count] : rows) sum_a += choose2(count);
  for (const auto& [key, count] : cols) sum_b += choose2(count);
  const double total = choose2(static_cast<double>(a.size()));

  AriReport report;
  report.n = a.size();
  // Scaled by the pair total so every intermediate is an integer-valued
  // double; hand cases such as -1/2 come out exact.
  const double num = index * total - sum_a * sum_b;
  const double den = 0.5 * (sum_a + sum_b) * total - sum_a * sum_b;
  if (den == 0.0) {
    // Both partitions trivial; identical iff every cell is a full row and column.
    const bool same = cells.size() == rows.size() && cells.size() == cols.size();
    report.ari = same ? 1.0 : 0.0;
  } else {
    report.ari = num / den;
  }
  return report;
}

DiversitySummary pairwise_diversity(std::span<const HardPartition> partitions) {
  if (partitions.size() < 2)
    throw Error(ErrorCode::kInvalidArgument, "pairwise diversity needs >= 2 partitions");
  DiversitySummary s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    for (std::size_t j = i + 1; j < partitions.size(); ++j) {
      const double ari = adjusted_rand_index(partitions[i], partitions[j]).ari;
      s.min = std::min(s.min, ari);
      s.max = std::max(s.max, ari);
      total += ari;
      ++s.pairs;
    }
  }
  s.mean = total / static_cast<double>(s.pairs);
  return s;
}

DistortionReport jl_distortion(const DataMatrix& x, const Matrix& a, double epsilon,
                               double scale) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "epsilon must lie in (0,1)");
  if (!(scale > 0.0)) throw Error(ErrorCode::kInvalidArgument, "scale must be positive");
  if (a.rows() != x.cols())
    throw Error(ErrorCode::kDimensionMismatch,
                "projection has " + std::to_string(a.rows()) + " rows, data has p=" +
                    std::to_string(x.cols()));

  const Matrix xt = x.transpose();                // p x n
  const Matrix yt = scale * (a.transpose() * xt);  // d x n
  const auto p = static_cast<std::size_t>(xt.rows());
  const auto d = static_cast<std::size_t>(yt.rows());
  const Index n = x.rows();

  DistortionReport r;
  r.epsilon = epsilon;
  r.d_used = a.cols();
  std::size_t within = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double orig = std::sqrt(kernels::squared_distance(
          {xt.col(i).data(), p}, {xt.col(j).data(), p}));
      if (orig == 0.0) continue;
      const double proj = std::sqrt(kernels::squared_distance(
          {yt.col(i).data(), d}, {yt.col(j).data(), d}));
      ++r.pairs_counted;
      if (proj >= (1.0 - epsilon) * orig && proj <= (1.0 + epsilon) * orig) ++within;
    }
  }
  r.empty = r.pairs_counted == 0;
  r.fraction_within =
      r.empty ? 0.0 : static_cast<double>(within) / static_cast<double>(r.pairs_counted);
  return r;
}

DistortionReport jl_distortion(const DataMatrix& x, const ProjectionPair& pair,
                               double epsilon) {
  const double scale = std::sqrt(static_cast<double>(pair.p) / static_cast<double>(pair.d));
  return jl_distortion(x, pair.a, epsilon, scale);
}

KmeansResult kmeans(const DataMatrix& x, int g, std::uint64_t seed, int n_starts,
                    int max_iter) {
  const Index n = x.rows();
  if (g < 1) throw Error(ErrorCode::kInvalidArgument, "k-means needs g >= 1");
  if (n < g)
    throw Error(ErrorCode::kInfeasible,
                "k-means needs n >= g (n=" + std::to_string(n) + ", g=" +
                    std::to_string(g) + ")");
  const Matrix xt = x.transpose();  // p x n, one unit per column
  const auto p = static_cast<std::size_t>(xt.rows());
  const auto nu = static_cast<std::size_t>(n);
  const std::span<const double> points(xt.data(), p * nu);

  KmeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (int s = 0; s < std::max(1, n_starts); ++s) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    Matrix centers(xt.rows(), g);  // p x g

    // k-means++ seeding.
    std::vector<double> d2(nu, std::numeric_limits<double>::infinity()), tmp(nu);
    std::uniform_int_distribution<Index> uniform(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    centers.col(0) = xt.col(uniform(rng));
    for (int k = 0; k < g; ++k) {
      if (k > 0) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        Index pick = 0;
        if (total > 0.0) {
          double target = unit(rng) * total;
          std::size_t i = 0;
          for (; i + 1 < nu; ++i) {
            target -= d2[i];
            if (target < 0.0) break;
          }
          pick = static_cast<Index>(i);
        } else {
          pick = uniform(rng);
        }
        centers.col(k) = xt.col(pick);
      }
      kernels::squared_distances_to(points, p, {centers.col(k).data(), p}, tmp);
      for (std::size_t i = 0; i < nu; ++i) d2[i] = std::min(d2[i], tmp[i]);
    }

    std::vector<int> assign(nu, -1);
    std::vector<double> dist(static_cast<std::size_t>(g));
    std::vector<double> own(nu);
    std::vector<double> trace;
    for (int it = 0; it < max_iter; ++it) {
      bool changed = false;
      double wcss = 0.0;
      for (std::size_t i = 0; i < nu; ++i) {
        kernels::squared_distances_to({centers.data(), p * static_cast<std::size_t>(g)}, p,
                                      {xt.col(static_cast<Index>(i)).data(), p}, dist);
        const auto k = static_cast<int>(std::min_element(dist.begin(), dist.end()) -
                                        dist.begin());
        if (k != assign[i]) changed = true;
        assign[i] = k;
        own[i] = dist[static_cast<std::size_t>(k)];
        wcss += own[i];
      }
      // Empty clusters take the unit farthest from its center.
      std::vector<int> counts(static_cast<std::size_t>(g), 0);
      for (int k : assign) ++counts[static_cast<std::size_t>(k)];
      for (int k = 0; k < g; ++k) {
        if (counts[static_cast<std::size_t>(k)] > 0) continue;
        std::size_t far = 0;
        for (std::size_t i = 1; i < nu; ++i)
          if (counts[static_cast<std::size_t>(assign[i])] > 1 &&
              (counts[static_cast<std::size_t>(assign[far])] <= 1 || own[i] > own[far]))
            far = i;
        --counts[static_cast<std::size_t>(assign[far])];
        assign[far] = k;
        ++counts[static_cast<std::size_t>(k)];
        wcss -= own[far];
        own[far] = 0.0;
        centers.col(k) = xt.col(static_cast<Index>(far));
        changed = true;
      }
      trace.push_back(wcss);
      if (!changed && it > 0) break;
      centers.setZero();
      for (std::size_t i = 0; i < nu; ++i) centers.col(assign[i]) += xt.col(static_cast<Index>(i));
      for (int k = 0; k < g; ++k) centers.col(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
    }
    const double final_wcss = trace.back();
    if (final_wcss < best.wcss) {
      best.wcss = final_wcss;
      best.centers = centers.transpose();
      best.partition.g = g;
      best.partition.labels.assign(nu, 0);
      for (std::size_t i = 0; i < nu; ++i) best.partition.labels[i] = assign[i] + 1;
      best.wcss_trace = std::move(trace);
    }
  }
  return best;
}

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::kShapeMismatch, "spearman needs equal lengths");
  if (a.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double m = (static_cast<double>(a.size()) + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - m) * (rb[i] - m);
    saa += (ra[i] - m) * (ra[i] - m);
    sbb += (rb[i] - m) * (rb[i] - m);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

}  // namespace rpeclu
