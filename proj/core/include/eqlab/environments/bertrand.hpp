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

#ifndef EQLAB_ENVIRONMENTS_BERTRAND_HPP_
#define EQLAB_ENVIRONMENTS_BERTRAND_HPP_

#include <string>
#include <utility>
#include <vector>

#include "eqlab/game.hpp"
#include "eqlab/priors.hpp"

namespace eqlab {

enum class BertrandCosts { kStandardF, kMineralRights, kAffiliated };

std::string to_string(BertrandCosts c);
BertrandCosts bertrand_costs_from_string(const std::string& s);

struct BertrandSpec {
  BertrandCosts costs = BertrandCosts::kStandardF;
  RiskTransform risk{0.0};
};

// Cost distribution of the standard setting, F(c) = c/2 + c^2/2 on [0, 1],
// sampled through the closed-form inverse (positive root of c^2 + c = 2u).
double bertrand_cost_cdf(double c);
double bertrand_cost_from_uniform(double u);

// Winner takes the market at its own price against demand Q(p) = 10 - p; the
// leader needs the strictly lower price, ties go to the follower.
std::pair<double, double> bertrand_payoffs(const BertrandSpec& spec, double p1,
                                           double p2, double c1, double c2);

// Stackelberg-Bertrand duopoly: the leader (player 0) posts a price knowing
// its own cost; the follower (player 1) observes its cost and the leader's
// price before posting. Under interdependent costs the realized common value
// is the winner's unit cost and the observations are noisy cost signals.
class BertrandCompetition : public Game {
 public:
  explicit BertrandCompetition(BertrandSpec spec);

  std::string name() const override { return "bertrand"; }
  int num_players() const override { return 2; }
  int num_stages() const override { return 2; }
  const Box& action_space(int player, int stage) const override;
  const Box& signal_space(int player, int stage) const override;
  TypeDraw draw_types(Prng& rng) const override;
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

  const BertrandSpec& spec() const { return spec_; }

 private:
  BertrandSpec spec_;
  Box price_box_;
  Box cost_box_;
  Box empty_box_;
  Box follower_box_;
};

}  // namespace eqlab

#endif  // EQLAB_ENVIRONMENTS_BERTRAND_HPP_
