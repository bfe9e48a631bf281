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

#ifndef EQLAB_CONFIG_HPP_
#define EQLAB_CONFIG_HPP_

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqlab/game.hpp"
#include "eqlab/learners.hpp"

namespace eqlab {

// Invalid or missing configuration; the message names the JSON path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GameConfig {
  std::string family;                   // sequential_auction | elimination_contest | bertrand
  std::string mechanism = "first_price";
  int n_bidders = 2;
  int n_stages = 1;
  bool reveal_prices = true;
  std::string reveal = "valuations";    // contest information case
  std::string prior = "independent_uniform";
  std::vector<double> prior_low;        // scalar broadcast or per-agent
  std::vector<double> prior_high;
  std::string costs = "standard";       // bertrand cost model
  double rho = 0.0;
};

struct VerifierConfig {
  int grid_points = 16;
  std::int64_t initial_sims = 1 << 15;
  std::int64_t memory_budget_bytes = 6LL << 30;
};

struct RunSettings {
  std::vector<std::uint64_t> seeds{0};
  std::string out_dir = "runs/out";
};

struct ExperimentConfig {
  GameConfig game;
  LearnerConfig learner;
  Sharing sharing = Sharing::kShared;
  VerifierConfig verifier;
  RunSettings run;
};

// Parses and validates; unknown families, inconsistent counts and missing
// required fields raise ConfigError naming the offending JSON path.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

std::unique_ptr<Game> build_game(const GameConfig& cfg);

// Canonical resolved form (defaults filled in, keys sorted); two configs are
// interchangeable for aggregation exactly when these match.
std::string canonical_config_json(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

// Fixed content-version string embedded in every artifact.
std::string artifact_version();

}  // namespace eqlab

#endif  // EQLAB_CONFIG_HPP_
