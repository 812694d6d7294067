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

#include "rpeclu/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rpeclu/csv.hpp"
#include "rpeclu/error.hpp"
#include "rpeclu/evaluation.hpp"
#include "rpeclu/kernels.hpp"
#include "rpeclu/pipeline.hpp"
#include "rpeclu/seed.hpp"
#include "rpeclu/simgen.hpp"

namespace rpeclu::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr std::uint64_t kDataStream = 0xda7a;
constexpr std::uint64_t kKmeansStream = 0x6b6d;
constexpr int kKmeansStarts = 5;

struct RunOptions {
  int g = 0;
  long d = 0;
  int b = 1000;
  int b_star = 100;
  std::uint64_t seed = 0;
  std::string cov = "full";
  std::string reg = "auto";
  int threads = 1;
  EmConfig em;
};

void add_run_options(CLI::App* app, RunOptions& o) {
  app->add_option("--g", o.g, "Number of clusters G")->check(CLI::PositiveNumber);
  app->add_option("--d", o.d, "Projection dimension (default round(10 ln G) + 1)");
  app->add_option("--b", o.b, "Number of random projections B")->capture_default_str();
  app->add_option("--b-star", o.b_star, "Number of retained projections B*")->capture_default_str();
  app->add_option("--seed", o.seed, "Master seed; all randomness derives from it")
      ->capture_default_str();
  app->add_option("--cov", o.cov, "GMM covariance structure")
      ->check(CLI::IsMember({"full", "diagonal", "spherical"}))
      ->capture_default_str();
  app->add_option("--reg", o.reg, "Regression residual covariance structure")
      ->check(CLI::IsMember({"auto", "full", "diagonal"}))
      ->capture_default_str();
  app->add_option("--threads", o.threads, "Worker threads for projection scoring (0: all cores)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--em-tol", o.em.tol, "EM relative log-likelihood tolerance")->capture_default_str();
  app->add_option("--em-max-iter", o.em.max_iter, "EM iteration cap")->capture_default_str();
  app->add_option("--em-starts", o.em.n_starts, "EM restarts per projection")->capture_default_str();
}

RpecluConfig to_config(const RunOptions& o, const CLI::App& app, int g) {
  RpecluConfig c;
  c.g = g;
  if (app.count("--d") > 0) c.d = o.d;
  c.b = o.b;
  c.b_star = o.b_star;
  c.seed = o.seed;
  c.gmm_cov = parse_cov_structure(o.cov);
  c.reg_structure = parse_reg_choice(o.reg);
  c.threads = o.threads;
  c.em = o.em;
  return c;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kIo:
    case ErrorCode::kParse:
    case ErrorCode::kEmptyInput:
      return kExitBadInput;
    case ErrorCode::kInvalidDimension:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInfeasible:
    case ErrorCode::kStructureInfeasible:
      return kExitBadConfig;
    default:
      return kExitFailure;
  }
}

json config_json(const ResolvedConfig& r) {
  const RpecluConfig& c = r.config;
  return json{
      {"g", c.g},
      {"d", r.d},
      {"b", c.b},
      {"b_star", c.b_star},
      {"seed", c.seed},
      {"cov", std::string(to_string(c.gmm_cov))},
      {"reg", std::string(to_string(c.reg_structure))},
      {"reg_resolved", std::string(to_string(r.reg))},
      {"threads", c.threads},
      {"em", {{"tol", c.em.tol}, {"max_iter", c.em.max_iter}, {"n_starts", c.em.n_starts}}},
  };
}

void write_partition(const fs::path& path, const HardPartition& partition) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << "row,cluster\n";
  for (std::size_t i = 0; i < partition.labels.size(); ++i)
    out << (i + 1) << ',' << partition.labels[i] << '\n';
}

void write_ranking(const fs::path& path, const RunResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << "projection_index\tbic\tbic_gmm\tbic_reg\tselected\n";
  for (std::size_t i = 0; i < result.ranking.size(); ++i) {
    const auto& s = result.ranking[i];
    out << s.projection_index << '\t' << format_double(s.bic) << '\t'
        << format_double(s.bic_gmm) << '\t' << format_double(s.bic_reg) << '\t'
        << (i < static_cast<std::size_t>(result.b_star) ? 1 : 0) << '\n';
  }
}

struct ClusterOptions {
  std::string input;
  int scenario = 0;
  std::string out_dir;
  std::string truth_col;
  RunOptions run;
};

int cmd_cluster(const ClusterOptions& o, const CLI::App& app, std::ostream& out,
                std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const bool has_input = app.count("--input") > 0;
  const bool has_scenario = app.count("--scenario") > 0;
  if (has_input == has_scenario) {
    err << "error: give exactly one of --input or --scenario\n";
    return kExitBadConfig;
  }

  DataMatrix x;
  std::optional<HardPartition> truth;
  json input;
  int g = o.run.g;
  if (has_input) {
    const std::optional<std::string> truth_col =
        o.truth_col.empty() ? std::nullopt : std::optional<std::string>(o.truth_col);
    LoadedData data = read_csv(o.input, truth_col);
    x = std::move(data.x);
    truth = std::move(data.truth);
    input = {{"path", o.input}};
    if (truth_col) input["truth_col"] = *truth_col;
  } else {
    ScenarioConfig sc = scenario_table(o.scenario);
    sc.seed = scenario_data_seed(o.run.seed);
    LabeledDataset data = generate(sc);
    x = std::move(data.x);
    truth = std::move(data.truth);
    input = {{"scenario", o.scenario}, {"data_seed", sc.seed}};
    if (g == 0) g = sc.g;
  }
  if (g == 0) {
    err << "error: --g is required with --input\n";
    return kExitBadConfig;
  }

  const RpecluConfig config = to_config(o.run, app, g);
  const RunResult result = run(x, config);
  for (const auto& s : result.diagnostics.skipped)
    err << "skipped projection " << s.projection_index << ": " << s.reason << '\n';

  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + dir.string() + "': " + ec.message());
  write_partition(dir / "partition.csv", result.final_partition);
  write_ranking(dir / "ranking.tsv", result);

  json diag;
  diag["n"] = x.rows();
  diag["p"] = x.cols();
  diag["input"] = input;
  diag["config"] = config_json(result.diagnostics.config);
  if (truth) diag["ari"] = adjusted_rand_index(result.final_partition, *truth).ari;
  if (const auto& div = result.diagnostics.selected_diversity) {
    diag["diversity"] = {{"min", div->min}, {"mean", div->mean}, {"max", div->max}, {"pairs", div->pairs}};
  } else {
    diag["diversity"] = nullptr;
  }
  diag["scored"] = result.ranking.size();
  diag["skipped"] = result.diagnostics.skipped.size();
  json skipped = json::array();
  for (const auto& s : result.diagnostics.skipped)
    skipped.push_back({{"projection_index", s.projection_index}, {"reason", s.reason}});
  diag["skipped_projections"] = skipped;
  diag["simd_backend"] = std::string(kernels::backend_name(kernels::active_backend()));
  // Timings are the only run-to-run varying field.
  diag["timings"] = {
      {"scoring_seconds", result.diagnostics.seconds_scoring},
      {"consensus_seconds", result.diagnostics.seconds_consensus},
      {"total_seconds",
       std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
  };
  std::ofstream jf(dir / "diagnostics.json", std::ios::binary);
  if (!jf) throw Error(ErrorCode::kIo, "cannot write diagnostics.json");
  jf << diag.dump(2) << '\n';

  out << "clustered " << x.rows() << " units into " << g << " groups using "
      << result.b_star << " of " << result.ranking.size() << " scored projections";
  if (diag.contains("ari")) out << "; ARI vs truth " << diag["ari"].get<double>();
  out << '\n';
  return kExitOk;
}

struct BenchOptions {
  std::vector<int> scenarios;
  int replicates = 1;
  std::string out_dir;
  RunOptions run;
};

int cmd_bench(const BenchOptions& o, const CLI::App& app, std::ostream& out,
              std::ostream& err) {
  if (o.scenarios.empty()) {
    err << "error: --scenarios is empty\n";
    return kExitBadConfig;
  }
  for (int id : o.scenarios) scenario_table(id);  // validate every id up front
  if (o.replicates < 1) {
    err << "error: --replicates must be >= 1\n";
    return kExitBadConfig;
  }

  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + dir.string() + "': " + ec.message());
  std::ofstream tsv(dir / "bench.tsv", std::ios::binary);
  if (!tsv) throw Error(ErrorCode::kIo, "cannot write bench.tsv");
  tsv << "scenario\treplicate\tmethod\tari\tseconds\n";

  using clock = std::chrono::steady_clock;
  for (int id : o.scenarios) {
    for (int rep = 1; rep <= o.replicates; ++rep) {
      const std::uint64_t rep_seed =
          derive_seed(derive_seed(o.run.seed, static_cast<std::uint64_t>(id)),
                      static_cast<std::uint64_t>(rep));
      ScenarioConfig sc = scenario_table(id);
      sc.seed = scenario_data_seed(rep_seed);
      const LabeledDataset data = generate(sc);

      RpecluConfig config = to_config(o.run, app, o.run.g > 0 ? o.run.g : sc.g);
      config.seed = rep_seed;
      double ari = std::numeric_limits<double>::quiet_NaN();
      auto t = clock::now();
      try {
        ari = adjusted_rand_index(run(data.x, config).final_partition, data.truth).ari;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kPartialEnsemble) throw;
        err << "scenario " << id << " replicate " << rep << ": " << e.what() << '\n';
      }
      const double rp_seconds = std::chrono::duration<double>(clock::now() - t).count();
      tsv << id << '\t' << rep << "\trpeclu\t" << format_double(ari) << '\t'
          << format_double(rp_seconds) << '\n';

      t = clock::now();
      const HardPartition km =
          kmeans_baseline(data.x, config.g, derive_seed(rep_seed, kKmeansStream), kKmeansStarts);
      const double km_ari = adjusted_rand_index(km, data.truth).ari;
      const double km_seconds = std::chrono::duration<double>(clock::now() - t).count();
      tsv << id << '\t' << rep << "\tkmeans\t" << format_double(km_ari) << '\t'
          << format_double(km_seconds) << '\n';
      tsv.flush();
      out << "scenario " << id << " replicate " << rep << ": rpeclu ARI " << ari
          << ", kmeans ARI " << km_ari << '\n';
    }
  }
  return kExitOk;
}

struct GenerateOptions {
  int scenario = 0;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
  ScenarioConfig sc = scenario_table(o.scenario);
  sc.seed = scenario_data_seed(o.seed);
  const LabeledDataset data = generate(sc);
  const fs::path path(o.output);
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  write_dataset_csv(path, data);
  out << "wrote " << data.x.rows() << " rows x " << data.x.cols() << " features to " << o.output
      << '\n';
  return kExitOk;
}

}  // namespace

std::uint64_t scenario_data_seed(std::uint64_t seed) { return derive_seed(seed, kDataStream); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random projection ensemble clustering"};
  app.require_subcommand(1);

  ClusterOptions cluster;
  CLI::App* cluster_cmd = app.add_subcommand("cluster", "Cluster a CSV file or a simulated scenario");
  cluster_cmd->add_option("--input", cluster.input, "Numeric CSV, one observation per row");
  cluster_cmd->add_option("--scenario", cluster.scenario, "Simulated scenario id (1-26)");
  cluster_cmd->add_option("--out", cluster.out_dir, "Output directory")->required();
  cluster_cmd->add_option("--truth-col", cluster.truth_col,
                          "Ground-truth label column (name, or 1-based index without header)");
  add_run_options(cluster_cmd, cluster.run);

  BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Compare against k-means on simulated scenarios");
  bench_cmd->add_option("--scenarios", bench.scenarios, "Scenario ids, e.g. 1,4,13")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--replicates", bench.replicates, "Replicates per scenario")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out_dir, "Output directory")->required();
  add_run_options(bench_cmd, bench.run);

  GenerateOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Write a simulated scenario as CSV");
  gen_cmd->add_option("--scenario", gen.scenario, "Scenario id (1-26)")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--output", gen.output, "Output CSV path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    if (*cluster_cmd) return cmd_cluster(cluster, *cluster_cmd, out, err);
    if (*bench_cmd) return cmd_bench(bench, *bench_cmd, out, err);
    if (*gen_cmd) return cmd_generate(gen, out);
  } catch (const Error& e) {
    err << "error (" << error_code_name(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace rpeclu::cli
