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

#ifndef EQLAB_ENVIRONMENTS_ELIMINATION_CONTEST_HPP_
#define EQLAB_ENVIRONMENTS_ELIMINATION_CONTEST_HPP_

#include <array>
#include <string>
#include <vector>

#include "eqlab/game.hpp"
#include "eqlab/priors.hpp"

namespace eqlab {

enum class ContestReveal { kValuations, kBids };

std::string to_string(ContestReveal r);
ContestReveal contest_reveal_from_string(const std::string& s);

struct ContestSpec {
  PriorModel prior;  // 4 agents
  RiskTransform risk{0.0};
  ContestReveal reveal = ContestReveal::kValuations;
};

// Expected terminal utilities given round-1 bids, the finalists' round-2
// efforts and the prize valuations. Finalists get the Tullock-weighted prize
// minus both efforts; first-round losers lose their all-pay bid. The risk
// transform is applied last. `finalists` are the two round-1 group winners.
Vec contest_payoffs(const ContestSpec& spec, const Vec& round1_bids,
                    const std::array<int, 2>& finalists,
                    const std::array<double, 2>& round2_bids,
                    const Vec& values);

// Two-round elimination contest with four contestants: an all-pay auction
// inside the fixed groups (0,1) and (2,3), then a Tullock lottery between the
// two group winners. Between rounds either the finalists' observations or
// their winning bids are made public.
class EliminationContest : public Game {
 public:
  explicit EliminationContest(ContestSpec spec);

  std::string name() const override { return "elimination_contest"; }
  int num_players() const override { return 4; }
  int num_stages() const override { return 2; }
  const Box& action_space(int player, int stage) const override;
  const Box& signal_space(int player, int stage) const override;
  TypeDraw draw_types(Prng& rng) const override;
  int nature_dim(int stage) const override { return stage == 0 ? 2 : 0; }
  bool acts(const GameState& s, int player, int stage) const override;
  Vec signal(const GameState& s, int player, int stage) const override;
  void advance(GameState& s, const std::vector<Vec>& actions,
               const Vec& nature) const override;
  Vec utilities(const GameState& s) const override;
  double utility_bound() const override;
  Vec own_action_from_signal(int player, int from_stage, int at_stage,
                             const Vec& sig) const override;
  Vec own_signal_from_signal(int player, int from_stage, int at_stage,
                             const Vec& sig) const override;
  std::vector<int> external_signal_dims(int player, int stage) const override;
  std::vector<int> own_action_stages(int player, int stage) const override;
  bool symmetric() const override;

  const ContestSpec& spec() const { return spec_; }
  static int group_of(int player) { return player / 2; }
  static int group_mate(int player) { return player ^ 1; }

 private:
  ContestSpec spec_;
  Box action_box_;
  std::vector<Box> stage1_boxes_;  // per player
  std::vector<Box> stage2_boxes_;  // per player
};

}  // namespace eqlab

#endif  // EQLAB_ENVIRONMENTS_ELIMINATION_CONTEST_HPP_
