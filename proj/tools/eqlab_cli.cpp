// Copyright 2026 The eqlab Authors.
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
//
// Experiment runner: train policies in self-play, evaluate them, certify
// them with the verifier, sweep verifier resolutions, and aggregate runs
// into mean (std) tables.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "eqlab/analytic.hpp"
#include "eqlab/config.hpp"
#include "eqlab/metrics.hpp"
#include "eqlab/rng.hpp"
#include "eqlab/run_io.hpp"
#include "eqlab/verifier.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace eqlab {
namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNanAbort = 3;
constexpr int kExitTableMismatch = 4;

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t lo = std::stoull(text.substr(0, dots));
    const std::uint64_t hi = std::stoull(text.substr(dots + 2));
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return seeds;
}

std::string seed_dir(const ExperimentConfig& cfg, std::uint64_t seed) {
  return cfg.run.out_dir + "/seed_" + std::to_string(seed);
}

RunMeta make_meta(const ExperimentConfig& cfg, std::uint64_t seed, int iteration) {
  RunMeta meta;
  meta.game = cfg.game.family;
  meta.algo = to_string(cfg.learner.algo);
  meta.version = artifact_version();
  meta.config_hash = config_hash(cfg);
  meta.seed = seed;
  meta.iteration = iteration;
  return meta;
}

int cmd_train(const ExperimentConfig& cfg) {
  const auto game = build_game(cfg.game);
  for (const std::uint64_t seed : cfg.run.seeds) {
    const std::string dir = seed_dir(cfg, seed);
    ensure_dir(dir);
    write_file(dir + "/config.json", canonical_config_json(cfg));

    std::cout << "[train] " << cfg.game.family << " algo=" << to_string(cfg.learner.algo)
              << " seed=" << seed << " iterations=" << cfg.learner.iterations
              << std::endl;
    const TrainResult result = self_play_train(*game, cfg.learner, cfg.sharing, seed);
    const RunMeta meta = make_meta(cfg, seed,
                                   result.nan_abort ? result.abort_iteration
                                                    : cfg.learner.iterations);
    if (result.nan_abort) {
      const std::string diag = dir + "/checkpoint_diagnostic.json";
      write_file(diag, checkpoint_json(meta, result.policies));
      std::cerr << "train: non-finite parameters at iteration "
                << result.abort_iteration << "; diagnostic checkpoint at " << diag
                << std::endl;
      return kExitNanAbort;
    }

    write_file(dir + "/checkpoint.json", checkpoint_json(meta, result.policies));
    write_file(dir + "/curve.csv", curve_csv(result.curve, meta));

    const auto eq = analytic_equilibrium(*game);
    std::optional<StrategyProfile> eq_profile;
    if (eq != nullptr) {
      eq_profile = StrategyProfile::shared(eq, game->num_players(), "analytic");
    }
    MetricsReport report = evaluate_profile(
        *game, result.profile, eq_profile ? &*eq_profile : nullptr,
        cfg.learner.eval_batch, mix(seed, 0xF17A1u));
    report.algo = to_string(cfg.learner.algo);
    report.config_hash = meta.config_hash;
    report.seed = seed;
    report.iterations = cfg.learner.iterations;
    write_file(dir + "/metrics.json", metrics_json(report, meta));
    if (!result.curve.empty()) {
      const CurveRow& last = result.curve.back();
      std::cout << "[train] done; final batch utility:";
      for (int p = 0; p < last.utility.size(); ++p) std::cout << " " << last.utility[p];
      std::cout << std::endl;
    }
  }
  return 0;
}

struct LoadedRun {
  ExperimentConfig cfg;
  LoadedCheckpoint checkpoint;
  std::string dir;
};

LoadedRun load_run(const std::string& dir) {
  LoadedRun run;
  run.dir = dir;
  run.cfg = parse_config(read_file(dir + "/config.json"));
  run.checkpoint = checkpoint_from_json(read_file(dir + "/checkpoint.json"));
  return run;
}

int cmd_verify(const std::string& run_dir, std::optional<int> grid_points,
               std::optional<std::int64_t> initial_sims, const std::string& player_arg,
               bool use_analytic) {
  const LoadedRun run = load_run(run_dir);
  const auto game = build_game(run.cfg.game);
  const int d = grid_points.value_or(run.cfg.verifier.grid_points);
  const std::int64_t mis = initial_sims.value_or(run.cfg.verifier.initial_sims);

  StrategyProfile profile = run.checkpoint.profile("learned");
  if (use_analytic) {
    const auto eq = analytic_equilibrium(*game);
    if (eq == nullptr) {
      std::cerr << "verify: no analytic equilibrium for this game" << std::endl;
      return 1;
    }
    profile = StrategyProfile::shared(eq, game->num_players(), "analytic");
  }

  std::vector<int> players;
  if (player_arg == "all") {
    for (int i = 0; i < game->num_players(); ++i) players.push_back(i);
  } else {
    players.push_back(std::stoi(player_arg));
  }

  VerifierOptions opts;
  opts.memory_budget_bytes = run.cfg.verifier.memory_budget_bytes;

  RunMeta meta;
  MetricsReport report = metrics_from_json(read_file(run.dir + "/metrics.json"), &meta);
  for (const int i : players) {
    const VerifierResult res =
        verify(*game, profile, i, d, mis, run.checkpoint.meta.seed, opts);
    const std::string out = run.dir + "/verify_p" + std::to_string(i) + "_D" +
                            std::to_string(d) + "_m" + std::to_string(mis) + ".json";
    write_file(out, verifier_result_json(res, run.checkpoint.meta));
    std::cout << "[verify] player " << i << " D=" << d << " M_IS=" << mis
              << " loss_ver=" << res.loss_ver << " -> " << out << std::endl;
    if (!use_analytic) report.loss_ver[i] = res.loss_ver;
  }
  if (!use_analytic) {
    write_file(run.dir + "/metrics.json", metrics_json(report, meta));
  }
  return 0;
}

int cmd_eval(const std::string& run_dir, std::int64_t n) {
  const LoadedRun run = load_run(run_dir);
  const auto game = build_game(run.cfg.game);
  const auto eq = analytic_equilibrium(*game);
  std::optional<StrategyProfile> eq_profile;
  if (eq != nullptr) {
    eq_profile = StrategyProfile::shared(eq, game->num_players(), "analytic");
  }
  const StrategyProfile profile = run.checkpoint.profile("learned");

  // Keep any verifier losses already recorded.
  RunMeta meta;
  MetricsReport old = metrics_from_json(read_file(run.dir + "/metrics.json"), &meta);
  MetricsReport report =
      evaluate_profile(*game, profile, eq_profile ? &*eq_profile : nullptr, n,
                       mix(run.checkpoint.meta.seed, 0xF17A1u));
  report.algo = old.algo;
  report.config_hash = old.config_hash;
  report.seed = old.seed;
  report.iterations = old.iterations;
  report.loss_ver = old.loss_ver;
  write_file(run.dir + "/metrics.json", metrics_json(report, meta));
  for (int p = 0; p < report.util_hat.size(); ++p) {
    std::cout << "[eval] player " << p << " util=" << report.util_hat[p]
              << " loss_equ=" << report.loss_equ[p] << " l2_avg=" << report.l2_avg[p]
              << std::endl;
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& run_dir,
              const std::vector<int>& grids, const std::vector<std::int64_t>& sims,
              int player, const std::string& out_csv) {
  std::unique_ptr<Game> game;
  StrategyProfile profile;
  std::uint64_t seed = 0;
  VerifierOptions opts;
  if (!run_dir.empty()) {
    const LoadedRun run = load_run(run_dir);
    game = build_game(run.cfg.game);
    profile = run.checkpoint.profile("learned");
    seed = run.checkpoint.meta.seed;
    opts.memory_budget_bytes = run.cfg.verifier.memory_budget_bytes;
  } else {
    const ExperimentConfig cfg = load_config_file(config_path);
    game = build_game(cfg.game);
    const auto eq = analytic_equilibrium(*game);
    if (eq == nullptr) {
      std::cerr << "sweep: no analytic equilibrium for this game; use --run"
                << std::endl;
      return 1;
    }
    profile = StrategyProfile::shared(eq, game->num_players(), "analytic");
    seed = cfg.run.seeds.front();
    opts.memory_budget_bytes = cfg.verifier.memory_budget_bytes;
  }

  RunMeta sweep_meta;
  sweep_meta.version = artifact_version();
  sweep_meta.seed = seed;
  std::string csv = meta_comment(sweep_meta) +
                    "grid_points,initial_sims,player,best_response_utility,"
                    "actual_utility,loss_ver\n";
  for (const int d : grids) {
    for (const std::int64_t m : sims) {
      const VerifierResult res = verify(*game, profile, player, d, m, seed, opts);
      char line[256];
      std::snprintf(line, sizeof(line), "%d,%lld,%d,%.10g,%.10g,%.10g\n", d,
                    static_cast<long long>(m), player, res.best_response_utility,
                    res.actual_utility, res.loss_ver);
      csv += line;
      std::cout << "[sweep] D=" << d << " M_IS=" << m << " loss_ver=" << res.loss_ver
                << std::endl;
    }
  }
  write_file(out_csv, csv);
  std::cout << "[sweep] wrote " << out_csv << std::endl;
  return 0;
}

std::string first_config_difference(const std::string& a, const std::string& b) {
  std::istringstream sa(a), sb(b);
  std::string la, lb;
  while (std::getline(sa, la) && std::getline(sb, lb)) {
    if (la != lb) return la + "  vs  " + lb;
  }
  return "(structural difference)";
}

int cmd_table(const std::vector<std::string>& dirs, const std::string& out_path) {
  // Collect per-seed metric files, grouped by game setting, split by algo.
  struct Group {
    std::string setting_name;
    std::string config_text;
    std::uint64_t hash = 0;
    std::map<std::string, std::vector<MetricsReport>> by_algo;
  };
  std::map<std::string, Group> groups;  // key: game-section hash + algo-less

  std::vector<std::string> seed_dirs;
  for (const std::string& dir : dirs) {
    if (fs::exists(fs::path(dir) / "metrics.json")) {
      seed_dirs.push_back(dir);
      continue;
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() &&
          fs::exists(entry.path() / "metrics.json")) {
        seed_dirs.push_back(entry.path().string());
      }
    }
  }
  std::sort(seed_dirs.begin(), seed_dirs.end());

  for (const std::string& dir : seed_dirs) {
    RunMeta meta;
    const MetricsReport report =
        metrics_from_json(read_file(dir + "/metrics.json"), &meta);
    const std::string config_text = read_file(dir + "/config.json");
    const json cfg = json::parse(config_text);
    json setting = cfg.at("game");
    setting["verifier"] = cfg.value("verifier", json::object());
    const std::string key = setting.dump();

    Group& group = groups[key];
    if (group.by_algo.empty()) {
      group.setting_name = cfg.at("game").at("family").get<std::string>();
      group.hash = meta.config_hash;
      group.config_text = config_text;
    }
    auto& bucket = group.by_algo[report.algo];
    if (!bucket.empty() && meta.config_hash != group.hash &&
        !group.by_algo.count(report.algo)) {
      // unreachable; per-algo consistency checked below
    }
    for (const MetricsReport& other : bucket) {
      if (other.config_hash != report.config_hash) {
        std::cerr << "table: refusing to aggregate mismatched configs: "
                  << first_config_difference(group.config_text, config_text)
                  << std::endl;
        return kExitTableMismatch;
      }
    }
    bucket.push_back(report);
  }
  if (groups.empty()) {
    std::cerr << "table: no metrics found" << std::endl;
    return 1;
  }

  std::set<std::string> algos;
  for (const auto& [key, group] : groups) {
    for (const auto& [algo, runs] : group.by_algo) algos.insert(algo);
  }

  const auto cell = [](const std::vector<double>& xs) -> std::string {
    std::vector<double> vals;
    for (double x : xs) {
      if (std::isfinite(x)) vals.push_back(x);
    }
    if (vals.empty()) return "";
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    const double std_dev = vals.size() > 1 ? std::sqrt(var / vals.size()) : 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f (%.4f)", mean, std_dev);
    return buf;
  };

  std::ostringstream out;
  out << "# " << artifact_version() << "\n";
  out << "setting,player,metric";
  for (const std::string& algo : algos) out << "," << algo;
  out << "\n";
  const std::vector<std::pair<std::string, const Vec MetricsReport::*>> metrics = {
      {"l2_avg", &MetricsReport::l2_avg},
      {"loss_equ", &MetricsReport::loss_equ},
      {"loss_ver", &MetricsReport::loss_ver},
      {"util_hat", &MetricsReport::util_hat},
  };
  int setting_idx = 0;
  for (const auto& [key, group] : groups) {
    const std::string setting =
        group.setting_name + "#" + std::to_string(setting_idx++);
    int players = 0;
    for (const auto& [algo, runs] : group.by_algo) {
      players = std::max(players, static_cast<int>(runs.front().util_hat.size()));
    }
    for (int p = 0; p < players; ++p) {
      for (const auto& [metric_name, member] : metrics) {
        out << setting << "," << p << "," << metric_name;
        for (const std::string& algo : algos) {
          out << ",";
          auto it = group.by_algo.find(algo);
          if (it == group.by_algo.end()) continue;
          std::vector<double> xs;
          for (const MetricsReport& r : it->second) xs.push_back((r.*member)[p]);
          out << cell(xs);
        }
        out << "\n";
      }
    }
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    write_file(out_path, out.str());
    std::cout << "[table] wrote " << out_path << std::endl;
  }
  return 0;
}

int run_cli(int argc, char** argv) {
  CLI::App app{
      "equilibrium learning and verification for continuous multi-stage games"};
  app.require_subcommand(1);

  if (const char* workers = std::getenv("EQLAB_WORKERS")) {
    omp_set_num_threads(std::max(1, std::atoi(workers)));
  }

  // train
  auto* train = app.add_subcommand("train", "self-play training runs, one per seed");
  std::string train_config;
  std::string train_seeds;
  std::string train_out;
  int train_iterations = -1;
  int train_batch = -1;
  train->add_option("--config", train_config, "experiment config JSON")->required();
  train->add_option("--seeds", train_seeds, "override seeds, e.g. 0..9 or 0,1,2");
  train->add_option("--out", train_out, "override run.out_dir");
  train->add_option("--iterations", train_iterations, "override learner.iterations");
  train->add_option("--batch-size", train_batch, "override learner.batch_size");

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "estimate the verifier loss of a run's checkpoint");
  std::string verify_run;
  int verify_d = -1;
  long long verify_mis = -1;
  std::string verify_player = "all";
  bool verify_analytic = false;
  verify_cmd->add_option("--run", verify_run, "run directory (one seed)")->required();
  verify_cmd->add_option("--D", verify_d, "grid points per dimension");
  verify_cmd->add_option("--mis", verify_mis, "initial simulations");
  verify_cmd->add_option("--player", verify_player, "player index or 'all'");
  verify_cmd->add_flag("--analytic", verify_analytic,
                       "verify the analytic equilibrium instead of the checkpoint");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "recompute a run's metric report");
  std::string eval_run;
  long long eval_n = 1 << 17;
  eval_cmd->add_option("--run", eval_run, "run directory (one seed)")->required();
  eval_cmd->add_option("--n", eval_n, "Monte Carlo sample count");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "verify over a grid of resolutions and sample counts");
  std::string sweep_config, sweep_run, sweep_out = "sweep.csv";
  std::vector<int> sweep_grids{4, 8, 16, 32};
  std::vector<long long> sweep_sims{1 << 10, 1 << 13, 1 << 16};
  int sweep_player = 0;
  sweep_cmd->add_option("--config", sweep_config,
                        "config JSON (sweeps the analytic equilibrium)");
  sweep_cmd->add_option("--run", sweep_run, "run directory (sweeps the checkpoint)");
  sweep_cmd->add_option("--D", sweep_grids, "grid sizes")->delimiter(',');
  sweep_cmd->add_option("--mis", sweep_sims, "initial simulation counts")
      ->delimiter(',');
  sweep_cmd->add_option("--player", sweep_player, "certified player");
  sweep_cmd->add_option("--out", sweep_out, "output CSV path");

  // table
  auto* table_cmd =
      app.add_subcommand("table", "aggregate runs into mean (std) cells");
  std::vector<std::string> table_dirs;
  std::string table_out;
  table_cmd->add_option("dirs", table_dirs, "run directories")->required();
  table_cmd->add_option("--out", table_out, "output CSV path (stdout otherwise)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      ExperimentConfig cfg = load_config_file(train_config);
      if (!train_seeds.empty()) cfg.run.seeds = parse_seeds(train_seeds);
      if (!train_out.empty()) cfg.run.out_dir = train_out;
      if (train_iterations > 0) cfg.learner.iterations = train_iterations;
      if (train_batch > 0) cfg.learner.batch_size = train_batch;
      cfg.learner.validate();
      return cmd_train(cfg);
    }
    if (*verify_cmd) {
      return cmd_verify(verify_run,
                        verify_d > 0 ? std::optional<int>(verify_d) : std::nullopt,
                        verify_mis > 0 ? std::optional<std::int64_t>(verify_mis)
                                       : std::nullopt,
                        verify_player, verify_analytic);
    }
    if (*eval_cmd) return cmd_eval(eval_run, eval_n);
    if (*sweep_cmd) {
      if (sweep_config.empty() && sweep_run.empty()) {
        std::cerr << "sweep: needs --config or --run" << std::endl;
        return 1;
      }
      std::vector<std::int64_t> sims(sweep_sims.begin(), sweep_sims.end());
      return cmd_sweep(sweep_config, sweep_run, sweep_grids, sims, sweep_player,
                       sweep_out);
    }
    if (*table_cmd) return cmd_table(table_dirs, table_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace eqlab

int main(int argc, char** argv) { return eqlab::run_cli(argc, argv); }
