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
// Certification of a strategy profile by explicit search over finite
// precision step functions: the certified player's signal spaces are split
// into grid cells, its action spaces into grid lattices, and a branching
// simulation explores every discrete action at every stage. Backward
// induction over the estimated counterfactual conditional utilities yields
// the best step-function response, whose estimated utility minus the
// profile's estimated utility is the reported verifier loss. Negative values
// are legitimate: the profile then beats every finite precision step
// function at this resolution.

#ifndef EQLAB_VERIFIER_HPP_
#define EQLAB_VERIFIER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "eqlab/game.hpp"
#include "eqlab/strategy.hpp"

namespace eqlab {

// Grids for one certified player: per stage, a uniform lattice over the
// action box (grid_points per dimension, endpoints included) and a partition
// of the signal box into half-open uniform cells. Signal coordinates that
// echo the player's own earlier actions are not binned; the earlier action's
// grid index enters the cell id directly, so every cell pins down a unique
// history of grid actions.
struct Discretization {
  struct StageGrid {
    std::vector<Vec> action_grid;   // per action dimension, grid_points values
    int action_points = 1;          // grid_points ^ action_dim
    std::vector<int> ext_dims;      // binned signal coordinates
    std::vector<double> ext_lo;     // bounds per binned coordinate
    std::vector<double> ext_hi;
    std::vector<int> own_stages;    // earlier stages encoded via action index
    std::int64_t n_cells = 1;

    // Flat action index -> action vector on the lattice.
    Vec action(int index) const;
    // Cell id from the stage signal and the player's own action-index trail.
    std::int64_t cell_of(const Vec& signal, const std::vector<int>& own_trail,
                         int grid_points) const;
  };

  int player = 0;
  int grid_points = 0;  // D
  std::vector<StageGrid> stages;
};

Discretization build_grid(const Game& game, int player, int grid_points);

// The simulated decision tree, stored level by level in flat arrays. Nodes
// where the player does not act carry no cell and a single pass-through
// child. Children of a node are contiguous in the next level (leaves for the
// last stage), so a path is resolved by index arithmetic alone.
struct VerifierTree {
  static constexpr std::uint32_t kNoCell = 0xFFFFFFFFu;

  struct Level {
    std::vector<std::uint32_t> cell;
    std::vector<std::int64_t> child_base;
    std::vector<std::uint16_t> n_children;
    std::vector<std::int64_t> visits;  // per cell id
  };

  std::int64_t n_samples = 0;
  std::vector<Level> levels;
  std::vector<double> leaf_util;

  std::int64_t visit_total(int stage) const;
};

struct VerifierOptions {
  std::int64_t memory_budget_bytes = 6LL << 30;
  int sample_block = 256;
};

VerifierTree simulate_tree(const Game& game, const StrategyProfile& opponents,
                           int player, const Discretization& disc,
                           std::int64_t initial_sims, std::uint64_t seed,
                           const VerifierOptions& opts = {});

// A finite precision step function: one action-grid index per signal cell.
struct StepStrategy {
  std::vector<std::vector<std::uint16_t>> action_index;  // [stage][cell]
};

struct BackwardInductionResult {
  StepStrategy strategy;
  double best_response_utility = 0.0;
  int first_acting_stage = 0;
};

// Stage T downward: per cell pick the action maximizing the mean utility of
// the consistent leaves; earlier stages resolve leaves through the already
// selected continuation. Ties pick the lowest action index; unvisited cells
// get value zero and action 0.
BackwardInductionResult backward_induction(const VerifierTree& tree,
                                           const Discretization& disc);

struct VerifierResult {
  int player = 0;
  int grid_points = 0;
  std::int64_t initial_sims = 0;
  std::uint64_t seed = 0;
  double best_response_utility = 0.0;
  double actual_utility = 0.0;
  double loss_ver = 0.0;
  StepStrategy strategy;
  // Diagnostics.
  std::vector<std::int64_t> cells_per_stage;
  std::vector<std::int64_t> visited_cells_per_stage;
  std::int64_t leaf_count = 0;
};

VerifierResult verify(const Game& game, const StrategyProfile& profile,
                      int player, int grid_points, std::int64_t initial_sims,
                      std::uint64_t seed, const VerifierOptions& opts = {});

// Replays a certified step-function response as an ordinary strategy; own
// past grid actions are recovered from the signal by nearest-lattice lookup.
class StepStrategyPlayer final : public Strategy {
 public:
  StepStrategyPlayer(const Game& game, Discretization disc, StepStrategy steps);

  Vec mean_action(int player, int stage, const Vec& signal) const override;

 private:
  const Game* game_;
  Discretization disc_;
  StepStrategy steps_;
};

}  // namespace eqlab

#endif  // EQLAB_VERIFIER_HPP_
