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

#ifndef EQLAB_METRICS_HPP_
#define EQLAB_METRICS_HPP_

#include <cstdint>
#include <string>

#include "eqlab/game.hpp"
#include "eqlab/strategy.hpp"

namespace eqlab {

// Utility loss in equilibrium: the equilibrium profile's utility minus the
// utility of `learned` deviating unilaterally as `player` against the
// equilibrium opponents. Both estimates share one random-number stream
// (common random numbers) for variance reduction.
double loss_in_equilibrium(const Game& game, const Strategy& learned, int player,
                           const StrategyProfile& equilibrium, std::int64_t n,
                           std::uint64_t seed);

// Probability-weighted root mean squared distance between the learned mean
// action and the equilibrium action at `stage`, over signals generated by the
// full equilibrium profile. NaN marks stages where the player never acts.
double l2_distance(const Game& game, const Strategy& learned, int player,
                   const StrategyProfile& equilibrium, int stage, std::int64_t n,
                   std::uint64_t seed);

struct MetricsReport {
  std::string game;
  std::string algo;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::int64_t eval_samples = 0;
  int iterations = 0;

  Vec util_hat;     // per player, under the evaluated profile
  Vec loss_equ;     // per player; NaN when no analytic baseline exists
  Vec loss_ver;     // per player; NaN until a verifier run fills it in
  Mat l2_stage;     // players x stages; NaN where the player never acts
  Vec l2_avg;       // per player, mean over present stages
};

// Utility, loss-in-equilibrium and L2 metrics for a learned profile.
// `equilibrium` may be empty (no analytic baseline).
MetricsReport evaluate_profile(const Game& game, const StrategyProfile& learned,
                               const StrategyProfile* equilibrium,
                               std::int64_t n, std::uint64_t seed);

}  // namespace eqlab

#endif  // EQLAB_METRICS_HPP_
