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

#include "eqlab/environments/bertrand.hpp"

#include <cmath>
#include <stdexcept>

namespace eqlab {

namespace {
constexpr double kPriceCap = 10.0;
constexpr double kDemandIntercept = 10.0;
}

std::string to_string(BertrandCosts c) {
  switch (c) {
    case BertrandCosts::kStandardF: return "standard";
    case BertrandCosts::kMineralRights: return "mineral_rights";
    case BertrandCosts::kAffiliated: return "affiliated";
  }
  return "?";
}

BertrandCosts bertrand_costs_from_string(const std::string& s) {
  if (s == "standard") return BertrandCosts::kStandardF;
  if (s == "mineral_rights") return BertrandCosts::kMineralRights;
  if (s == "affiliated") return BertrandCosts::kAffiliated;
  throw std::invalid_argument("unknown bertrand cost model: " + s);
}

double bertrand_cost_cdf(double c) { return 0.5 * c + 0.5 * c * c; }

double bertrand_cost_from_uniform(double u) {
  // F(c) = u  <=>  c^2 + c - 2u = 0, positive root.
  return -0.5 + std::sqrt(0.25 + 2.0 * u);
}

std::pair<double, double> bertrand_payoffs(const BertrandSpec& spec, double p1,
                                           double p2, double c1, double c2) {
  const bool leader_wins = p1 < p2;
  const double p = leader_wins ? p1 : p2;
  const double c = leader_wins ? c1 : c2;
  const double profit = (p - c) * (kDemandIntercept - p);
  const double w = spec.risk.apply(profit);
  const double l = spec.risk.apply(0.0);
  return leader_wins ? std::make_pair(w, l) : std::make_pair(l, w);
}

BertrandCompetition::BertrandCompetition(BertrandSpec spec) : spec_(std::move(spec)) {
  price_box_ = Box::interval(0.0, kPriceCap);
  cost_box_ = spec_.costs == BertrandCosts::kStandardF ? Box::interval(0.0, 1.0)
                                                       : Box::interval(0.0, 2.0);
  empty_box_ = Box::empty();
  follower_box_ = cost_box_.concat(price_box_);
}

const Box& BertrandCompetition::action_space(int, int) const { return price_box_; }

const Box& BertrandCompetition::signal_space(int player, int stage) const {
  if (player == 0) return stage == 0 ? cost_box_ : empty_box_;
  return stage == 0 ? empty_box_ : follower_box_;
}

TypeDraw BertrandCompetition::draw_types(Prng& rng) const {
  if (spec_.costs == BertrandCosts::kStandardF) {
    TypeDraw d;
    d.values.resize(2);
    d.observations.resize(2);
    for (int i = 0; i < 2; ++i) {
      const double c = bertrand_cost_from_uniform(rng.uniform());
      d.values[i] = c;
      d.observations[i] = c;
    }
    return d;
  }
  const PriorModel prior = spec_.costs == BertrandCosts::kMineralRights
                               ? PriorModel::mineral_rights(2)
                               : PriorModel::affiliated(2);
  return prior.sample(rng);
}

bool BertrandCompetition::acts(const GameState&, int player, int stage) const {
  return (player == 0 && stage == 0) || (player == 1 && stage == 1);
}

Vec BertrandCompetition::signal(const GameState& s, int player, int stage) const {
  if (player == 0 && stage == 0) {
    Vec sig(1);
    sig[0] = s.types.observations[0];
    return sig;
  }
  if (player == 1 && stage == 1) {
    Vec sig(2);
    sig[0] = s.types.observations[1];
    sig[1] = s.prices[0];
    return sig;
  }
  throw std::invalid_argument("bertrand: no signal at a non-acting slot");
}

void BertrandCompetition::advance(GameState& s, const std::vector<Vec>& actions,
                                  const Vec& nature) const {
  s.prices.push_back(actions[s.completed == 0 ? 0 : 1][0]);
  s.actions.push_back(actions);
  s.nature.push_back(nature);
  ++s.completed;
}

Vec BertrandCompetition::utilities(const GameState& s) const {
  const auto [u1, u2] =
      bertrand_payoffs(spec_, s.prices[0], s.prices[1], s.types.values[0],
                       s.types.values[1]);
  Vec u(2);
  u[0] = u1;
  u[1] = u2;
  return u;
}

double BertrandCompetition::utility_bound() const {
  // Worst profit: sell at price 0 with the highest cost; best: the monopoly
  // profit 25 at zero cost.
  const double c_max = cost_box_.high(0);
  return std::max(std::abs(spec_.risk.apply(-c_max * kDemandIntercept)),
                  std::abs(spec_.risk.apply(25.0)));
}

Vec BertrandCompetition::own_action_from_signal(int, int, int, const Vec&) const {
  // Neither firm acts twice, so no own action is ever embedded in a signal.
  throw std::invalid_argument("bertrand: no recallable own actions");
}

Vec BertrandCompetition::own_signal_from_signal(int player, int from_stage,
                                                int at_stage, const Vec& sig) const {
  if (at_stage == from_stage) return sig;
  // The follower's stage-0 signal is empty; nothing to recover.
  if (player == 1 && from_stage == 1 && at_stage == 0) return Vec(0);
  throw std::invalid_argument("bertrand: invalid recall stages");
}

std::vector<int> BertrandCompetition::external_signal_dims(int player,
                                                           int stage) const {
  if (player == 0 && stage == 0) return {0};
  if (player == 1 && stage == 1) return {0, 1};
  return {};
}

std::vector<int> BertrandCompetition::own_action_stages(int, int) const {
  return {};
}

}  // namespace eqlab
