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

#ifndef EQLAB_LEARNERS_HPP_
#define EQLAB_LEARNERS_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "eqlab/game.hpp"
#include "eqlab/policy.hpp"
#include "eqlab/rollout.hpp"

namespace eqlab {

enum class Algo { kReinforce, kPpo };
enum class Sharing { kShared, kIndependent };

std::string to_string(Algo a);
Algo algo_from_string(const std::string& s);
std::string to_string(Sharing s);
Sharing sharing_from_string(const std::string& s);

struct PpoConfig {
  double clip = 0.2;
  int epochs = 10;
  int minibatches = 4;
  double gae_lambda = 0.95;
  double discount = 1.0;  // finite horizon, terminal-only utility
  bool normalize_reward = true;
  double max_grad_norm = 0.5;
};

struct LearnerConfig {
  Algo algo = Algo::kReinforce;
  double learning_rate = 1e-3;
  double init_log_std = -1.0;
  int batch_size = 1 << 14;
  int iterations = 2000;
  int eval_every = 100;
  std::int64_t eval_batch = 1 << 16;
  PpoConfig ppo;

  void validate() const;
};

// Gradients of sum_k coeff_k * log pi(raw_k | signal_k) at one stage, with
// respect to the policy network parameters and the log standard deviation.
// Both learners are built on this; tests check it against finite differences.
struct PolicyLogProbGrads {
  Mlp::Grads mlp;
  Vec log_std;
};
PolicyLogProbGrads policy_log_prob_gradient(const GaussianPolicy& policy,
                                            int stage, const Mat& signals,
                                            const Mat& raw, const Vec& coeff);

// One Gaussian-log-density gradient step on the score-function estimator:
// batch returns are normalized per player (centered only when the variance
// vanishes) and weight the summed per-stage log-probabilities. `players`
// lists the players whose trajectories train this policy (several under
// weight sharing).
void reinforce_update(GaussianPolicy& policy, Adam& opt, const RolloutBatch& batch,
                      const std::vector<int>& players, const LearnerConfig& cfg);

// Clipped-surrogate update with generalized advantage estimation from a
// separate value network; several epochs of minibatch ascent per batch.
// Minibatches with non-finite ratios are rejected. Returns the number of
// applied minibatches.
int ppo_update(GaussianPolicy& policy, Mlp& value_net, Adam& policy_opt,
               Adam& value_opt, const RolloutBatch& batch,
               const std::vector<int>& players, const LearnerConfig& cfg,
               std::uint64_t shuffle_key);

struct CurveRow {
  int iteration = 0;
  Vec utility;   // per player, batch estimate
  Vec loss_equ;  // per player, NaN without an analytic baseline
  Vec l2_avg;    // per player, NaN without an analytic baseline
};

struct TrainResult {
  StrategyProfile profile;
  std::vector<std::shared_ptr<GaussianPolicy>> policies;  // per player
  std::vector<std::shared_ptr<Mlp>> value_nets;           // per player, may be null
  std::vector<CurveRow> curve;
  bool nan_abort = false;
  int abort_iteration = -1;
};

// Iterated rollout -> per-player update self-play. With sharing, one network
// plays every seat of a symmetric game and pools all seats' trajectories.
// The whole run is a pure function of (game, cfg, sharing, seed).
TrainResult self_play_train(const Game& game, const LearnerConfig& cfg,
                            Sharing sharing, std::uint64_t seed);

}  // namespace eqlab

#endif  // EQLAB_LEARNERS_HPP_
