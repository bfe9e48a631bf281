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

#include "eqlab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eqlab/environments/bertrand.hpp"
#include "eqlab/environments/elimination_contest.hpp"
#include "eqlab/environments/sequential_auction.hpp"

namespace eqlab {

namespace {

using nlohmann::json;

const json* find(const json& node, const std::string& key) {
  auto it = node.find(key);
  return it == node.end() ? nullptr : &*it;
}

template <typename T>
T require(const json& node, const std::string& key, const std::string& path) {
  const json* child = find(node, key);
  if (child == nullptr) {
    throw ConfigError("missing field: " + path + "." + key);
  }
  try {
    return child->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("invalid value for field: " + path + "." + key);
  }
}

template <typename T>
T optional(const json& node, const std::string& key, const std::string& path,
           T fallback) {
  if (find(node, key) == nullptr) return fallback;
  return require<T>(node, key, path);
}

std::vector<double> bounds_list(const json& node, const std::string& key,
                                const std::string& path) {
  const json* child = find(node, key);
  if (child == nullptr) return {};
  if (child->is_number()) return {child->get<double>()};
  try {
    return child->get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ConfigError("invalid value for field: " + path + "." + key);
  }
}

std::vector<double> broadcast(std::vector<double> v, int n, double fallback) {
  if (v.empty()) v.assign(1, fallback);
  if (static_cast<int>(v.size()) == 1) v.assign(n, v[0]);
  return v;
}

PriorModel build_prior(const GameConfig& cfg, int agents) {
  const PriorKind kind = prior_kind_from_string(cfg.prior);
  switch (kind) {
    case PriorKind::kIndependentUniform: {
      auto lows = broadcast(cfg.prior_low, agents, 0.0);
      auto highs = broadcast(cfg.prior_high, agents, 1.0);
      if (static_cast<int>(lows.size()) != agents ||
          static_cast<int>(highs.size()) != agents) {
        throw ConfigError("invalid value for field: game.prior_low");
      }
      return PriorModel::independent_uniform(std::move(lows), std::move(highs));
    }
    case PriorKind::kMineralRights:
      return PriorModel::mineral_rights(agents);
    case PriorKind::kAffiliated:
      return PriorModel::affiliated(agents);
  }
  throw ConfigError("invalid value for field: game.prior");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  const json* game = find(root, "game");
  if (game == nullptr) throw ConfigError("missing field: game");
  cfg.game.family = require<std::string>(*game, "family", "game");
  cfg.game.mechanism = optional<std::string>(*game, "mechanism", "game",
                                             cfg.game.mechanism);
  cfg.game.n_bidders = optional<int>(*game, "n_bidders", "game", cfg.game.n_bidders);
  cfg.game.n_stages = optional<int>(*game, "n_stages", "game", cfg.game.n_stages);
  cfg.game.reveal_prices =
      optional<bool>(*game, "reveal_prices", "game", cfg.game.reveal_prices);
  cfg.game.reveal = optional<std::string>(*game, "reveal", "game", cfg.game.reveal);
  cfg.game.costs = optional<std::string>(*game, "costs", "game", cfg.game.costs);
  cfg.game.rho = optional<double>(*game, "rho", "game", 0.0);
  if (const json* prior = find(*game, "prior")) {
    if (prior->is_string()) {
      cfg.game.prior = prior->get<std::string>();
    } else {
      cfg.game.prior = require<std::string>(*prior, "kind", "game.prior");
      cfg.game.prior_low = bounds_list(*prior, "low", "game.prior");
      cfg.game.prior_high = bounds_list(*prior, "high", "game.prior");
    }
  }

  const json* learner = find(root, "learner");
  if (learner == nullptr) throw ConfigError("missing field: learner");
  cfg.learner.algo =
      algo_from_string(require<std::string>(*learner, "algo", "learner"));
  cfg.sharing = sharing_from_string(
      optional<std::string>(*learner, "sharing", "learner", "shared"));
  cfg.learner.learning_rate =
      optional<double>(*learner, "learning_rate", "learner", 1e-3);
  cfg.learner.init_log_std =
      optional<double>(*learner, "init_log_std", "learner", -1.0);
  cfg.learner.batch_size = optional<int>(*learner, "batch_size", "learner", 1 << 14);
  cfg.learner.iterations = optional<int>(*learner, "iterations", "learner", 2000);
  cfg.learner.eval_every = optional<int>(*learner, "eval_every", "learner", 100);
  cfg.learner.eval_batch = optional<std::int64_t>(*learner, "eval_batch",
                                                  "learner", 1 << 16);
  if (const json* ppo = find(*learner, "ppo")) {
    cfg.learner.ppo.clip = optional<double>(*ppo, "clip", "learner.ppo", 0.2);
    cfg.learner.ppo.epochs = optional<int>(*ppo, "epochs", "learner.ppo", 10);
    cfg.learner.ppo.minibatches =
        optional<int>(*ppo, "minibatches", "learner.ppo", 4);
    cfg.learner.ppo.gae_lambda =
        optional<double>(*ppo, "gae_lambda", "learner.ppo", 0.95);
    cfg.learner.ppo.discount =
        optional<double>(*ppo, "discount", "learner.ppo", 1.0);
    cfg.learner.ppo.normalize_reward =
        optional<bool>(*ppo, "normalize_reward", "learner.ppo", true);
    cfg.learner.ppo.max_grad_norm =
        optional<double>(*ppo, "max_grad_norm", "learner.ppo", 0.5);
  }

  if (const json* verifier = find(root, "verifier")) {
    cfg.verifier.grid_points =
        optional<int>(*verifier, "grid_points", "verifier", 16);
    cfg.verifier.initial_sims = optional<std::int64_t>(
        *verifier, "initial_sims", "verifier", cfg.verifier.initial_sims);
    cfg.verifier.memory_budget_bytes = optional<std::int64_t>(
        *verifier, "memory_budget_bytes", "verifier",
        cfg.verifier.memory_budget_bytes);
  }

  if (const json* run = find(root, "run")) {
    if (find(*run, "seeds") != nullptr) {
      cfg.run.seeds = require<std::vector<std::uint64_t>>(*run, "seeds", "run");
    }
    cfg.run.out_dir = optional<std::string>(*run, "out_dir", "run", cfg.run.out_dir);
  }
  if (cfg.run.seeds.empty()) throw ConfigError("invalid value for field: run.seeds");

  cfg.learner.validate();
  build_game(cfg.game);  // surface game-side validation errors now
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::unique_ptr<Game> build_game(const GameConfig& cfg) {
  try {
    if (cfg.family == "sequential_auction") {
      SeqAuctionSpec spec;
      spec.mechanism = mechanism_from_string(cfg.mechanism);
      spec.n_stages = cfg.n_stages;
      spec.n_bidders = cfg.n_bidders;
      GameConfig tmp = cfg;
      spec.prior = build_prior(tmp, cfg.n_bidders);
      spec.risk = RiskTransform(cfg.rho);
      spec.reveal_prices = cfg.reveal_prices;
      return std::make_unique<SequentialAuction>(std::move(spec));
    }
    if (cfg.family == "elimination_contest") {
      ContestSpec spec;
      GameConfig tmp = cfg;
      if (tmp.prior == "independent_uniform" && tmp.prior_low.empty()) {
        tmp.prior_low = {1.0};
        tmp.prior_high = {1.5};
      }
      spec.prior = build_prior(tmp, 4);
      spec.risk = RiskTransform(cfg.rho);
      spec.reveal = contest_reveal_from_string(cfg.reveal);
      return std::make_unique<EliminationContest>(std::move(spec));
    }
    if (cfg.family == "bertrand") {
      BertrandSpec spec;
      spec.costs = bertrand_costs_from_string(cfg.costs);
      spec.risk = RiskTransform(cfg.rho);
      return std::make_unique<BertrandCompetition>(std::move(spec));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("game: ") + e.what());
  }
  throw ConfigError("invalid value for field: game.family");
}

std::string canonical_config_json(const ExperimentConfig& cfg) {
  json root;
  json& game = root["game"];
  game["family"] = cfg.game.family;
  game["mechanism"] = cfg.game.mechanism;
  game["n_bidders"] = cfg.game.n_bidders;
  game["n_stages"] = cfg.game.n_stages;
  game["reveal_prices"] = cfg.game.reveal_prices;
  game["reveal"] = cfg.game.reveal;
  game["prior"] = {{"kind", cfg.game.prior},
                   {"low", cfg.game.prior_low},
                   {"high", cfg.game.prior_high}};
  game["costs"] = cfg.game.costs;
  game["rho"] = cfg.game.rho;

  json& learner = root["learner"];
  learner["algo"] = to_string(cfg.learner.algo);
  learner["sharing"] = to_string(cfg.sharing);
  learner["learning_rate"] = cfg.learner.learning_rate;
  learner["init_log_std"] = cfg.learner.init_log_std;
  learner["batch_size"] = cfg.learner.batch_size;
  learner["iterations"] = cfg.learner.iterations;
  learner["eval_every"] = cfg.learner.eval_every;
  learner["eval_batch"] = cfg.learner.eval_batch;
  learner["ppo"] = {{"clip", cfg.learner.ppo.clip},
                    {"epochs", cfg.learner.ppo.epochs},
                    {"minibatches", cfg.learner.ppo.minibatches},
                    {"gae_lambda", cfg.learner.ppo.gae_lambda},
                    {"discount", cfg.learner.ppo.discount},
                    {"normalize_reward", cfg.learner.ppo.normalize_reward},
                    {"max_grad_norm", cfg.learner.ppo.max_grad_norm}};

  root["verifier"] = {{"grid_points", cfg.verifier.grid_points},
                      {"initial_sims", cfg.verifier.initial_sims}};
  root["run"] = {{"seeds", cfg.run.seeds}, {"out_dir", cfg.run.out_dir}};
  return root.dump(2);
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  // FNV-1a over the canonical form, with the output directory excluded so
  // relocated runs still aggregate.
  ExperimentConfig canon = cfg;
  canon.run.out_dir = "";
  const std::string text = canonical_config_json(canon);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string artifact_version() { return "eqlab-0.1.0"; }

}  // namespace eqlab
