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

#ifndef EQLAB_ROLLOUT_HPP_
#define EQLAB_ROLLOUT_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqlab/game.hpp"
#include "eqlab/strategy.hpp"

namespace eqlab {

// A non-finite action or utility; carries the offending trajectory index.
class NumericFault : public std::runtime_error {
 public:
  NumericFault(const std::string& what, std::int64_t trajectory)
      : std::runtime_error(what + " (trajectory " + std::to_string(trajectory) + ")"),
        trajectory_(trajectory) {}
  std::int64_t trajectory() const { return trajectory_; }

 private:
  std::int64_t trajectory_;
};

// n complete rollouts in batch-major form. Every random draw is keyed by
// (seed, trajectory index, stage, player), so the batch is a pure function of
// (game, profile parameters, n, seed) no matter how work is scheduled.
struct RolloutBatch {
  std::uint64_t seed = 0;
  std::string profile_id;
  int n = 0;

  Mat values;        // n x players
  Mat observations;  // n x players

  // Indexed [stage][player]; rows where the player does not act hold zeros.
  std::vector<std::vector<Mat>> signals;
  std::vector<std::vector<Mat>> raw_actions;  // pre-clamp Gaussian samples
  std::vector<std::vector<Mat>> actions;      // clamped into the action box
  std::vector<std::vector<std::vector<std::uint8_t>>> acted;
  std::vector<std::vector<Vec>> log_probs;    // NaN for pure strategies

  Mat utilities;  // n x players
};

RolloutBatch rollout(const Game& game, const StrategyProfile& profile, int n,
                     std::uint64_t seed);

// Trajectories [first, first + n) of the same stream: rollout(n, seed) equals
// the concatenation of its slices, which lets consumers process a long
// stream block by block.
RolloutBatch rollout_slice(const Game& game, const StrategyProfile& profile,
                           std::int64_t first, int n, std::uint64_t seed);

// Arithmetic mean of the player's utility over the batch.
double estimate_utility(const RolloutBatch& batch, int player);

// Streaming per-player mean utility over n rollouts; avoids materializing
// large batches when only the estimate is needed.
Vec expected_utilities(const Game& game, const StrategyProfile& profile,
                       std::int64_t n, std::uint64_t seed);

// Compensated (Kahan) accumulator used for all utility sums.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace eqlab

#endif  // EQLAB_ROLLOUT_HPP_
