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

#include "eqlab/environments/elimination_contest.hpp"

#include <algorithm>
#include <stdexcept>

namespace eqlab {

namespace {
constexpr double kEffortCap = 2.0;
}

std::string to_string(ContestReveal r) {
  return r == ContestReveal::kValuations ? "valuations" : "bids";
}

ContestReveal contest_reveal_from_string(const std::string& s) {
  if (s == "valuations") return ContestReveal::kValuations;
  if (s == "bids") return ContestReveal::kBids;
  throw std::invalid_argument("unknown contest reveal mode: " + s);
}

Vec contest_payoffs(const ContestSpec& spec, const Vec& round1_bids,
                    const std::array<int, 2>& finalists,
                    const std::array<double, 2>& round2_bids,
                    const Vec& values) {
  Vec u(4);
  for (int k = 0; k < 4; ++k) u[k] = -round1_bids[k];
  const double total = round2_bids[0] + round2_bids[1];
  for (int f = 0; f < 2; ++f) {
    const int i = finalists[f];
    // Tullock prize weight; a 0/0 split is half-half by symmetry.
    const double w = total == 0.0 ? 0.5 : round2_bids[f] / total;
    u[i] += w * values[i] - round2_bids[f];
  }
  for (int k = 0; k < 4; ++k) u[k] = spec.risk.apply(u[k]);
  return u;
}

EliminationContest::EliminationContest(ContestSpec spec) : spec_(std::move(spec)) {
  if (spec_.prior.n_agents != 4) {
    throw std::invalid_argument("elimination contest: prior must have 4 agents");
  }
  action_box_ = Box::interval(0.0, kEffortCap);
  for (int i = 0; i < 4; ++i) {
    stage1_boxes_.push_back(spec_.prior.observation_box(i));
    Box rev;
    if (spec_.reveal == ContestReveal::kValuations) {
      // The other group's winner can be either of its members.
      const Box a = spec_.prior.observation_box(group_of(i) == 0 ? 2 : 0);
      const Box b = spec_.prior.observation_box(group_of(i) == 0 ? 3 : 1);
      rev = Box::interval(std::min(a.low(0), b.low(0)),
                          std::max(a.high(0), b.high(0)));
    } else {
      rev = action_box_;
    }
    stage2_boxes_.push_back(
        spec_.prior.observation_box(i).concat(action_box_).concat(rev));
  }
}

const Box& EliminationContest::action_space(int, int) const { return action_box_; }

const Box& EliminationContest::signal_space(int player, int stage) const {
  return stage == 0 ? stage1_boxes_[player] : stage2_boxes_[player];
}

TypeDraw EliminationContest::draw_types(Prng& rng) const {
  return spec_.prior.sample(rng);
}

bool EliminationContest::acts(const GameState& s, int player, int stage) const {
  if (stage == 0) return true;
  return s.winners[0] == player || s.winners[1] == player;
}

Vec EliminationContest::signal(const GameState& s, int player, int stage) const {
  if (stage == 0) {
    Vec sig(1);
    sig[0] = s.types.observations[player];
    return sig;
  }
  const int other = group_of(player) == 0 ? s.winners[1] : s.winners[0];
  Vec sig(3);
  sig[0] = s.types.observations[player];
  sig[1] = s.actions[0][player][0];
  sig[2] = spec_.reveal == ContestReveal::kValuations
               ? s.types.observations[other]
               : s.actions[0][other][0];
  return sig;
}

void EliminationContest::advance(GameState& s, const std::vector<Vec>& actions,
                                 const Vec& nature) const {
  if (s.completed == 0) {
    for (int g = 0; g < 2; ++g) {
      const int a = 2 * g, b = 2 * g + 1;
      int w;
      if (actions[a][0] > actions[b][0]) {
        w = a;
      } else if (actions[b][0] > actions[a][0]) {
        w = b;
      } else {
        w = nature[g] < 0.5 ? a : b;
      }
      s.winners.push_back(w);
    }
    s.active.assign(4, 0);
    s.active[s.winners[0]] = 1;
    s.active[s.winners[1]] = 1;
  }
  s.actions.push_back(actions);
  s.nature.push_back(nature);
  ++s.completed;
}

Vec EliminationContest::utilities(const GameState& s) const {
  Vec round1(4);
  for (int k = 0; k < 4; ++k) round1[k] = s.actions[0][k][0];
  const std::array<int, 2> finalists{s.winners[0], s.winners[1]};
  const std::array<double, 2> round2{s.actions[1][finalists[0]][0],
                                     s.actions[1][finalists[1]][0]};
  return contest_payoffs(spec_, round1, finalists, round2, s.types.values);
}

double EliminationContest::utility_bound() const {
  const double v_max = spec_.prior.observation_upper_bound();
  return std::max(std::abs(spec_.risk.apply(-2.0 * kEffortCap)),
                  std::abs(spec_.risk.apply(v_max)));
}

Vec EliminationContest::own_action_from_signal(int, int from_stage, int at_stage,
                                               const Vec& sig) const {
  if (from_stage != 1 || at_stage != 0) {
    throw std::invalid_argument("contest: invalid recall stages");
  }
  Vec a(1);
  a[0] = sig[1];
  return a;
}

Vec EliminationContest::own_signal_from_signal(int, int from_stage, int at_stage,
                                               const Vec& sig) const {
  if (from_stage != 1 || at_stage > 1) {
    throw std::invalid_argument("contest: invalid recall stages");
  }
  if (at_stage == 1) return sig;
  return sig.head(1);
}

std::vector<int> EliminationContest::external_signal_dims(int, int stage) const {
  if (stage == 0) return {0};
  return {0, 2};
}

std::vector<int> EliminationContest::own_action_stages(int, int stage) const {
  if (stage == 0) return {};
  return {0};
}

bool EliminationContest::symmetric() const {
  if (spec_.prior.kind != PriorKind::kIndependentUniform) return true;
  for (int i = 1; i < 4; ++i) {
    if (spec_.prior.lows[i] != spec_.prior.lows[0] ||
        spec_.prior.highs[i] != spec_.prior.highs[0]) {
      return false;
    }
  }
  return true;
}

}  // namespace eqlab
