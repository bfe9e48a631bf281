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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eqlab/config.hpp"
#include "eqlab/run_io.hpp"

using namespace eqlab;

namespace {

const char* kConfig = R"json({
  "game": {"family": "sequential_auction", "mechanism": "first_price",
           "n_bidders": 3, "n_stages": 2,
           "prior": {"kind": "independent_uniform", "low": 0.0, "high": 1.0}},
  "learner": {"algo": "reinforce", "sharing": "shared", "learning_rate": 1e-4,
              "batch_size": 4096, "iterations": 50},
  "verifier": {"grid_points": 8, "initial_sims": 1024},
  "run": {"seeds": [0, 1], "out_dir": "runs/demo"}
})json";

}  // namespace

TEST_CASE("configs parse, validate and hash stably") {
  const ExperimentConfig cfg = parse_config(kConfig);
  CHECK(cfg.game.family == "sequential_auction");
  CHECK(cfg.learner.algo == Algo::kReinforce);
  CHECK(cfg.run.seeds.size() == 2);
  const auto game = build_game(cfg.game);
  CHECK(game->num_players() == 3);
  CHECK(game->num_stages() == 2);

  CHECK(config_hash(cfg) == config_hash(parse_config(kConfig)));
  ExperimentConfig other = cfg;
  other.learner.learning_rate = 2e-4;
  CHECK(config_hash(cfg) != config_hash(other));
  // Moving the output directory does not change the identity of a run.
  ExperimentConfig moved = cfg;
  moved.run.out_dir = "elsewhere";
  CHECK(config_hash(cfg) == config_hash(moved));

  // The canonical form round-trips through the parser.
  const ExperimentConfig reparsed = parse_config(canonical_config_json(cfg));
  CHECK(config_hash(reparsed) == config_hash(cfg));
}

TEST_CASE("missing fields name their JSON path") {
  try {
    parse_config(R"({"game": {"family": "bertrand"}, "learner": {}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("learner.algo") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"learner": {"algo": "ppo"}})"), ConfigError);
  try {
    parse_config(R"({"game": {"family": "sequential_auction", "n_bidders": 2,
                     "n_stages": 2},
                     "learner": {"algo": "ppo"}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("N > T") != std::string::npos);
  }
}

TEST_CASE("environment constraints are validated before any compute") {
  ExperimentConfig cfg = parse_config(kConfig);
  cfg.game.n_bidders = 2;
  cfg.game.n_stages = 2;
  CHECK_THROWS_AS(build_game(cfg.game), ConfigError);
  cfg.game.family = "nope";
  CHECK_THROWS_AS(build_game(cfg.game), ConfigError);
}

TEST_CASE("checkpoints round-trip bit-exact parameters and aliasing") {
  const InputCodec codec{2, 3};
  auto shared_policy = std::make_shared<GaussianPolicy>(codec, 1, -2.0, 5);
  std::vector<std::shared_ptr<GaussianPolicy>> policies{shared_policy,
                                                        shared_policy};
  RunMeta meta;
  meta.game = "demo";
  meta.algo = "reinforce";
  meta.version = artifact_version();
  meta.config_hash = 42;
  meta.seed = 7;
  meta.iteration = 100;

  const std::string text = checkpoint_json(meta, policies);
  const LoadedCheckpoint loaded = checkpoint_from_json(text);
  CHECK(loaded.meta.seed == 7);
  CHECK(loaded.meta.config_hash == 42);
  REQUIRE(loaded.policies.size() == 2);
  CHECK(loaded.policies[0] == loaded.policies[1]);  // aliasing restored

  const auto orig_w = shared_policy->mlp().weight_params();
  const auto load_w = loaded.policies[0]->mlp().weight_params();
  for (std::size_t k = 0; k < orig_w.size(); ++k) {
    CHECK((*orig_w[k] - *load_w[k]).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((shared_policy->log_std() - loaded.policies[0]->log_std())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // Distinct networks stay distinct.
  auto other = std::make_shared<GaussianPolicy>(codec, 1, -2.0, 6);
  const LoadedCheckpoint two =
      checkpoint_from_json(checkpoint_json(meta, {shared_policy, other}));
  CHECK(two.policies[0] != two.policies[1]);
}

TEST_CASE("metric reports serialize absent values as null") {
  MetricsReport report;
  report.game = "demo";
  report.algo = "ppo";
  report.config_hash = 9;
  report.seed = 3;
  report.eval_samples = 128;
  report.iterations = 10;
  report.util_hat = Vec::Constant(2, 0.25);
  report.loss_equ = Vec::Constant(2, 0.001);
  report.loss_ver = Vec::Constant(2, std::numeric_limits<double>::quiet_NaN());
  report.l2_stage = Mat::Constant(2, 2, 0.01);
  report.l2_stage(0, 1) = std::numeric_limits<double>::quiet_NaN();
  report.l2_avg = Vec::Constant(2, 0.01);

  RunMeta meta;
  meta.config_hash = 9;
  const std::string text = metrics_json(report, meta);
  CHECK(text.find("null") != std::string::npos);
  RunMeta back_meta;
  const MetricsReport back = metrics_from_json(text, &back_meta);
  CHECK(back.util_hat[0] == 0.25);
  CHECK(std::isnan(back.loss_ver[1]));
  CHECK(std::isnan(back.l2_stage(0, 1)));
  CHECK(back.l2_stage(1, 1) == 0.01);
  CHECK(back_meta.config_hash == 9);
}

TEST_CASE("curve CSV layout") {
  CurveRow row;
  row.iteration = 5;
  row.utility = Vec::Constant(2, 0.5);
  row.loss_equ = Vec::Constant(2, std::numeric_limits<double>::quiet_NaN());
  row.l2_avg = Vec::Constant(2, 0.125);
  RunMeta meta;
  meta.version = artifact_version();
  meta.config_hash = 77;
  meta.seed = 3;
  const std::string csv = curve_csv({row}, meta);
  CHECK(csv.find("# eqlab-") == 0);
  CHECK(csv.find("config_hash=77 seed=3") != std::string::npos);
  CHECK(csv.find("iteration,utility_p0,utility_p1,loss_equ_p0") != std::string::npos);
  CHECK(csv.find("5,0.5,0.5,nan,nan,0.125,0.125") != std::string::npos);
}
