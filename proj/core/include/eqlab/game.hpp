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

#ifndef EQLAB_GAME_HPP_
#define EQLAB_GAME_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "eqlab/box.hpp"
#include "eqlab/priors.hpp"
#include "eqlab/rng.hpp"

namespace eqlab {

// One trajectory's evolving history. The type draw happens before stage 0 and
// is kept as stage-0 metadata; player stages are indexed 0..T-1 throughout the
// code base. Environments maintain the derived caches (winners, prices,
// activity) so signals and utilities stay pure functions of the history.
struct GameState {
  TypeDraw types;
  std::vector<Vec> nature;                 // per completed stage
  std::vector<std::vector<Vec>> actions;   // [stage][player], clamped
  std::vector<std::uint8_t> active;        // per player, maintained by the env
  std::vector<int> winners;                // per completed stage, -1 if unused
  std::vector<double> prices;              // per completed stage, 0 if unused
  int completed = 0;                       // number of advanced stages
};

// A multi-stage game with continuous signal and action boxes, realized as a
// sampling engine: nature draws types once, then for each stage every acting
// player receives a signal derived from the history and commits an action.
// Utilities are defined on complete outcomes only.
class Game {
 public:
  virtual ~Game() = default;

  virtual std::string name() const = 0;
  virtual int num_players() const = 0;
  virtual int num_stages() const = 0;

  virtual const Box& action_space(int player, int stage) const = 0;
  virtual const Box& signal_space(int player, int stage) const = 0;

  virtual TypeDraw draw_types(Prng& rng) const = 0;

  // Dimension of nature's per-stage action (tie-break draws and the like).
  virtual int nature_dim(int stage) const { (void)stage; return 0; }
  virtual Vec draw_nature(int stage, Prng& rng) const {
    Vec u(nature_dim(stage));
    for (int d = 0; d < u.size(); ++d) u[d] = rng.uniform();
    return u;
  }

  GameState init(TypeDraw types) const {
    GameState s;
    s.types = std::move(types);
    s.active.assign(num_players(), 1);
    return s;
  }

  // Whether the player takes a real decision at this stage of this history.
  // Non-acting players are filled in with a sentinel action the utility model
  // ignores, keeping trajectory shapes rectangular.
  virtual bool acts(const GameState& s, int player, int stage) const = 0;

  // sigma_it: the player's stage signal, a deterministic function of the
  // history before `stage`. Only meaningful when acts() holds.
  virtual Vec signal(const GameState& s, int player, int stage) const = 0;

  // Commit one stage: `actions` holds one (clamped) action per player,
  // `nature` is nature's simultaneous stage action.
  virtual void advance(GameState& s, const std::vector<Vec>& actions,
                       const Vec& nature) const = 0;

  virtual Vec utilities(const GameState& s) const = 0;
  virtual double utility_bound() const = 0;

  // Perfect recall: a stage-`from` signal embeds the player's own earlier
  // actions and signals. These recover them exactly (no tolerance).
  virtual Vec own_action_from_signal(int player, int from_stage, int at_stage,
                                     const Vec& sig) const = 0;
  virtual Vec own_signal_from_signal(int player, int from_stage, int at_stage,
                                     const Vec& sig) const = 0;

  // Verifier cell structure: indices of the signal coordinates that are not
  // the player's own past actions, and the earlier stages whose own action is
  // embedded in the stage signal (valid on histories where the player acts).
  virtual std::vector<int> external_signal_dims(int player, int stage) const = 0;
  virtual std::vector<int> own_action_stages(int player, int stage) const = 0;

  // Whether every player faces the same decision problem (enables weight
  // sharing across players).
  virtual bool symmetric() const { return false; }

  int signal_dim(int player, int stage) const {
    return signal_space(player, stage).dim();
  }
  int action_dim(int player, int stage) const {
    return action_space(player, stage).dim();
  }

  // Largest signal dimension over stages where the player acts.
  int max_signal_dim(int player) const {
    int m = 0;
    for (int t = 0; t < num_stages(); ++t) {
      m = std::max(m, signal_dim(player, t));
    }
    return m;
  }
};

}  // namespace eqlab

#endif  // EQLAB_GAME_HPP_
