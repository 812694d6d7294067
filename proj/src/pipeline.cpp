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

#include "rpeclu/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "rpeclu/consensus.hpp"
#include "rpeclu/error.hpp"
#include "rpeclu/rproj.hpp"
#include "rpeclu/seed.hpp"

namespace rpeclu {
namespace {

constexpr std::uint64_t kProjectionStream = 0;
constexpr std::uint64_t kGmmStream = 1;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view to_string(RegChoice choice) {
  switch (choice) {
    case RegChoice::kAuto: return "auto";
    case RegChoice::kFull: return "full";
    case RegChoice::kDiagonal: return "diagonal";
  }
  return "unknown";
}

RegChoice parse_reg_choice(std::string_view text) {
  if (text == "auto") return RegChoice::kAuto;
  if (text == "full") return RegChoice::kFull;
  if (text == "diagonal") return RegChoice::kDiagonal;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown regression structure '" + std::string(text) + "'");
}

Index default_d(int g) {
  if (g < 2)
    throw Error(ErrorCode::kInvalidArgument,
                "default d needs g >= 2; pass d explicitly for a single group");
  return static_cast<Index>(std::lround(10.0 * std::log(static_cast<double>(g)))) + 1;
}

ResolvedConfig resolve(const RpecluConfig& config, Index n, Index p) {
  if (config.g < 1) throw Error(ErrorCode::kInvalidArgument, "g must be >= 1");
  if (config.b < 1) throw Error(ErrorCode::kInvalidArgument, "b must be >= 1");
  if (config.b_star < 1 || config.b_star > config.b)
    throw Error(ErrorCode::kInvalidArgument,
                "b_star must satisfy 1 <= b_star <= b (b_star=" +
                    std::to_string(config.b_star) + ", b=" + std::to_string(config.b) + ")");
  ResolvedConfig r;
  r.config = config;
  r.d = config.d ? *config.d : default_d(config.g);
  if (r.d < 1 || r.d >= p)
    throw Error(ErrorCode::kInvalidDimension,
                "projection dimension must satisfy 1 <= d < p (d=" + std::to_string(r.d) +
                    ", p=" + std::to_string(p) + ")");
  if (n < config.g)
    throw Error(ErrorCode::kInfeasible,
                "need n >= g (n=" + std::to_string(n) + ", g=" + std::to_string(config.g) + ")");
  r.config.d = r.d;
  switch (config.reg_structure) {
    case RegChoice::kAuto: r.reg = auto_reg_structure(n, p, r.d); break;
    case RegChoice::kFull: r.reg = RegStructure::kFull; break;
    case RegChoice::kDiagonal: r.reg = RegStructure::kDiagonal; break;
  }
  // Regression feasibility depends only on the shape, so it fails here
  // rather than once per projection.
  if (n <= r.d + 1)
    throw Error(ErrorCode::kInfeasible,
                "regression needs n > d + 1 (n=" + std::to_string(n) + ", d=" + std::to_string(r.d) + ")");
  if (r.reg == RegStructure::kFull && n <= p - r.d)
    throw Error(ErrorCode::kStructureInfeasible,
                "full residual covariance needs n > p - d (n=" + std::to_string(n) +
                    ", p - d=" + std::to_string(p - r.d) + "); use the diagonal structure");
  return r;
}

std::uint64_t projection_seed(std::uint64_t master, int b) {
  return derive_seed(master, static_cast<std::uint64_t>(b));
}

ScoredPartition score_projection(const DataMatrix& x, int b, const ResolvedConfig& config) {
  const std::uint64_t seed = projection_seed(config.config.seed, b);
  const ProjectionPair pair = generate_haar(x.cols(), config.d, derive_seed(seed, kProjectionStream));
  const Projected proj = project(x, pair);
  const GmmFit gmm = fit_gmm(proj.y, config.config.g, config.config.gmm_cov,
                             derive_seed(seed, kGmmStream), config.config.em);
  const RegressionFit reg = fit_regression(proj.y, proj.y_comp, config.reg);

  ScoredPartition out;
  out.projection_index = b;
  out.bic_gmm = bic_gmm(gmm.model, x.rows());
  out.bic_reg = bic_reg(reg, x.rows());
  out.bic = composite_bic(out.bic_gmm, out.bic_reg);
  out.partition = map_partition(gmm.responsibilities);
  return out;
}

std::vector<ScoredPartition> select_top(std::vector<ScoredPartition> scored, int b_star) {
  if (b_star < 0 || static_cast<std::size_t>(b_star) > scored.size())
    throw Error(ErrorCode::kPartialEnsemble,
                "cannot select " + std::to_string(b_star) + " of " +
                    std::to_string(scored.size()) + " scored projections");
  std::sort(scored.begin(), scored.end(), [](const ScoredPartition& a, const ScoredPartition& b) {
    if (a.bic != b.bic) return a.bic > b.bic;
    return a.projection_index < b.projection_index;
  });
  scored.resize(static_cast<std::size_t>(b_star));
  return scored;
}

RunResult run(const DataMatrix& x, const RpecluConfig& config) {
  const ResolvedConfig resolved = resolve(config, x.rows(), x.cols());
  const int b_total = resolved.config.b;

  // Parallel map: slot b-1 is written only by the task scoring projection b.
  std::vector<std::optional<ScoredPartition>> slots(static_cast<std::size_t>(b_total));
  std::vector<std::string> failures(static_cast<std::size_t>(b_total));
  std::vector<std::exception_ptr> fatal(static_cast<std::size_t>(b_total));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < b_total; i = next.fetch_add(1)) {
      const auto slot = static_cast<std::size_t>(i);
      try {
        slots[slot] = score_projection(x, i + 1, resolved);
      } catch (const Error& e) {
        switch (e.code()) {
          case ErrorCode::kInfeasible:
          case ErrorCode::kStructureInfeasible:
          case ErrorCode::kFitFailure:
          case ErrorCode::kScoreInvalid:
            failures[slot] = std::string(error_code_name(e.code())) + ": " + e.what();
            break;
          default:
            fatal[slot] = std::make_exception_ptr(
                Error(e.code(), "projection " + std::to_string(i + 1) + ": " + e.what()));
        }
      } catch (...) {
        fatal[slot] = std::current_exception();
      }
    }
  };

  const auto start = std::chrono::steady_clock::now();
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, b_total);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  RunResult result;
  result.diagnostics.config = resolved;
  result.diagnostics.seconds_scoring = seconds_since(start);
  std::vector<ScoredPartition> scored;
  scored.reserve(slots.size());
  for (const auto& e : fatal)
    if (e) std::rethrow_exception(e);
  for (int i = 0; i < b_total; ++i) {
    auto& slot = slots[static_cast<std::size_t>(i)];
    if (slot)
      scored.push_back(std::move(*slot));
    else
      result.diagnostics.skipped.push_back({i + 1, failures[static_cast<std::size_t>(i)]});
  }
  if (static_cast<int>(scored.size()) < resolved.config.b_star)
    throw Error(ErrorCode::kPartialEnsemble,
                "only " + std::to_string(scored.size()) + " of " + std::to_string(b_total) +
                    " projections scored; b_star=" + std::to_string(resolved.config.b_star));

  const int scored_count = static_cast<int>(scored.size());
  result.ranking = select_top(std::move(scored), scored_count);
  result.b_star = resolved.config.b_star;

  const auto consensus_start = std::chrono::steady_clock::now();
  std::vector<MembershipMatrix> members;
  std::vector<HardPartition> selected;
  for (int i = 0; i < result.b_star; ++i) {
    members.push_back(MembershipMatrix::from_partition(result.ranking[static_cast<std::size_t>(i)].partition));
    selected.push_back(result.ranking[static_cast<std::size_t>(i)].partition);
  }
  result.final_partition = aggregate(members).partition;
  if (selected.size() >= 2) result.diagnostics.selected_diversity = pairwise_diversity(selected);
  result.diagnostics.seconds_consensus = seconds_since(consensus_start);
  return result;
}

}  // namespace rpeclu
