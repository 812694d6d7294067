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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../oracles/oracles.hpp"
#include "rpeclu/error.hpp"
#include "rpeclu/evaluation.hpp"
#include "rpeclu/rproj.hpp"

namespace {

using namespace rpeclu;

HardPartition hp(std::vector<int> labels, int g) { return {std::move(labels), g}; }

Matrix gaussian(std::mt19937_64& rng, Index n, Index p) {
  std::normal_distribution<double> z;
  Matrix x(n, p);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = z(rng);
  return x;
}

TEST(Ari, HandCases) {
  EXPECT_EQ(adjusted_rand_index(hp({1, 1, 2, 2}, 2), hp({1, 2, 1, 2}, 2)).ari, -0.5);
  EXPECT_EQ(adjusted_rand_index(hp({1, 2, 2, 3}, 3), hp({3, 1, 1, 2}, 3)).ari, 1.0);
  EXPECT_EQ(adjusted_rand_index(hp({1, 1, 1, 1}, 1), hp({1, 2, 1, 2}, 2)).ari, 0.0);
  EXPECT_EQ(adjusted_rand_index(hp({1, 1, 1}, 1), hp({2, 2, 2}, 2)).ari, 1.0);
  EXPECT_NEAR(adjusted_rand_index(hp({1, 1, 1, 2, 2, 2}, 2), hp({1, 1, 2, 2, 3, 3}, 3)).ari, 8.0 / 33.0,
              1e-15);
  EXPECT_EQ(adjusted_rand_index(hp({1, 2, 1}, 2), hp({2, 1, 2}, 2)).n, 3u);
}

TEST(Ari, SymmetricRelabelingInvariantAndMatchesPairOracle) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 40)(rng);
    const int g = std::uniform_int_distribution<int>(1, 4)(rng);
    HardPartition a{std::vector<int>(static_cast<std::size_t>(n)), g};
    HardPartition b = a;
    for (int& l : a.labels) l = std::uniform_int_distribution<int>(1, g)(rng);
    for (int& l : b.labels) l = std::uniform_int_distribution<int>(1, g)(rng);
    const double ab = adjusted_rand_index(a, b).ari;
    EXPECT_EQ(ab, adjusted_rand_index(b, a).ari);
    HardPartition shifted = a;
    for (int& l : shifted.labels) l = g + 1 - l;
    EXPECT_EQ(adjusted_rand_index(shifted, b).ari, ab);
    EXPECT_NEAR(ab, oracle::ari_by_pairs(a.labels, b.labels), 1e-12);
    EXPECT_LE(ab, 1.0);
    EXPECT_GE(ab, -1.0);
  }
}

TEST(Ari, Errors) {
  try {
    adjusted_rand_index(hp({1, 2}, 2), hp({1, 2, 1}, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}

TEST(Diversity, Summaries) {
  const std::vector<HardPartition> same(3, hp({1, 1, 2, 2}, 2));
  const DiversitySummary s = pairwise_diversity(same);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.mean, 1.0);
  EXPECT_EQ(s.max, 1.0);
  EXPECT_EQ(s.pairs, 3u);

  const std::vector<HardPartition> two{hp({1, 1, 2, 2}, 2), hp({1, 2, 1, 2}, 2)};
  const DiversitySummary t = pairwise_diversity(two);
  EXPECT_EQ(t.min, -0.5);
  EXPECT_EQ(t.mean, -0.5);
  EXPECT_EQ(t.max, -0.5);

  const std::vector<HardPartition> three{hp({1, 1, 1, 2, 2, 2}, 2), hp({1, 1, 2, 2, 3, 3}, 3),
                                         hp({1, 2, 1, 2, 1, 2}, 2)};
  const double ab = oracle::ari_by_pairs(three[0].labels, three[1].labels);
  const double ac = oracle::ari_by_pairs(three[0].labels, three[2].labels);
  const double bc = oracle::ari_by_pairs(three[1].labels, three[2].labels);
  const DiversitySummary u = pairwise_diversity(three);
  EXPECT_NEAR(u.min, std::min({ab, ac, bc}), 1e-15);
  EXPECT_NEAR(u.max, std::max({ab, ac, bc}), 1e-15);
  EXPECT_NEAR(u.mean, (ab + ac + bc) / 3.0, 1e-15);

  EXPECT_THROW(pairwise_diversity(std::vector<HardPartition>{hp({1}, 1)}), Error);
}

TEST(JlDistortion, IsometryReportsOne) {
  std::mt19937_64 rng(1);
  const Matrix x = gaussian(rng, 15, 6);
  const ProjectionPair pair = generate_haar(6, 2, 8);
  Matrix full(6, 6);
  full << pair.a, pair.a_comp;
  for (double eps : {0.01, 0.5}) {
    EXPECT_EQ(jl_distortion(x, full, eps, 1.0).fraction_within, 1.0);
    const DistortionReport id = jl_distortion(x, Matrix::Identity(6, 6), eps, 1.0);
    EXPECT_EQ(id.fraction_within, 1.0);
    EXPECT_EQ(id.pairs_counted, 105u);
    EXPECT_EQ(id.d_used, 6);
  }
}

TEST(JlDistortion, CoincidentPointsAreExcluded) {
  const Matrix x = Matrix::Ones(2, 4);
  const DistortionReport r = jl_distortion(x, Matrix::Identity(4, 4), 0.5, 1.0);
  EXPECT_TRUE(r.empty);
  EXPECT_EQ(r.pairs_counted, 0u);
}

TEST(JlDistortion, ConcentratesForModerateDimension) {
  double total = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::mt19937_64 rng(100 + s);
    const Matrix x = gaussian(rng, 50, 200);
    const DistortionReport r = jl_distortion(x, generate_haar(200, 60, s), 0.5);
    EXPECT_EQ(r.d_used, 60);
    total += r.fraction_within;
  }
  EXPECT_GE(total / 20.0, 0.95);
}

TEST(JlDistortion, ScaleMatters) {
  std::mt19937_64 rng(2);
  const Matrix x = gaussian(rng, 30, 100);
  const ProjectionPair pair = generate_haar(100, 10, 3);
  // Unscaled orthonormal projection contracts distances by about sqrt(d/p).
  EXPECT_LT(jl_distortion(x, pair.a, 0.5, 1.0).fraction_within, 0.05);
  EXPECT_GT(jl_distortion(x, pair, 0.5).fraction_within, 0.5);
}

TEST(JlDistortion, Validation) {
  const Matrix x = Matrix::Identity(3, 3);
  EXPECT_THROW(jl_distortion(x, Matrix::Identity(3, 3), 0.0, 1.0), Error);
  EXPECT_THROW(jl_distortion(x, Matrix::Identity(3, 3), 1.0, 1.0), Error);
  EXPECT_THROW(jl_distortion(x, Matrix::Identity(3, 3), 0.5, 0.0), Error);
  EXPECT_THROW(jl_distortion(x, Matrix::Identity(4, 2), 0.5, 1.0), Error);
}

TEST(Kmeans, SeparatedBlobs) {
  std::mt19937_64 rng(3);
  Matrix x = 0.1 * gaussian(rng, 40, 3);
  x.bottomRows(20).array() += 10.0;
  HardPartition truth{std::vector<int>(40, 1), 2};
  std::fill(truth.labels.begin() + 20, truth.labels.end(), 2);
  EXPECT_EQ(adjusted_rand_index(kmeans_baseline(x, 2, 1, 5), truth).ari, 1.0);
}

TEST(Kmeans, SingleClusterCenterIsMean) {
  std::mt19937_64 rng(4);
  const Matrix x = gaussian(rng, 25, 4);
  const KmeansResult r = kmeans(x, 1, 2, 3);
  EXPECT_LE((r.centers.row(0) - x.colwise().mean()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(r.partition.labels, std::vector<int>(25, 1));
}

TEST(Kmeans, WcssNeverIncreases) {
  std::mt19937_64 rng(6);
  const Matrix x = gaussian(rng, 80, 5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const KmeansResult r = kmeans(x, 4, seed, 1);
    ASSERT_FALSE(r.wcss_trace.empty());
    for (std::size_t t = 1; t < r.wcss_trace.size(); ++t)
      EXPECT_LE(r.wcss_trace[t], r.wcss_trace[t - 1] * (1 + 1e-12));
    EXPECT_NEAR(r.wcss, r.wcss_trace.back(), 1e-9 * r.wcss);
  }
}

TEST(Kmeans, DeterministicAndValidated) {
  std::mt19937_64 rng(7);
  const Matrix x = gaussian(rng, 30, 2);
  EXPECT_EQ(kmeans_baseline(x, 3, 9, 5), kmeans_baseline(x, 3, 9, 5));
  try {
    kmeans(x.topRows(2), 3, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
}

TEST(Spearman, KnownValues) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  EXPECT_NEAR(spearman_correlation(a, std::vector<double>{2, 4, 6, 8, 100}), 1.0, 1e-15);
  EXPECT_NEAR(spearman_correlation(a, std::vector<double>{5, 4, 3, 2, 1}), -1.0, 1e-15);
  // Average ranks for ties: ranks (1.5, 1.5, 3, 4) against (1, 2, 3, 4).
  EXPECT_NEAR(spearman_correlation(std::vector<double>{1, 1, 2, 3}, std::vector<double>{1, 2, 3, 4}),
              0.9486832980505138, 1e-12);
  EXPECT_TRUE(std::isnan(spearman_correlation(a, std::vector<double>(5, 1.0))));
  EXPECT_THROW(spearman_correlation(a, std::vector<double>{1, 2}), Error);
}

}  // namespace
