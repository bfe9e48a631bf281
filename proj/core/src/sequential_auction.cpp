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

#include "eqlab/environments/sequential_auction.hpp"

#include <algorithm>
#include <stdexcept>

namespace eqlab {

std::string to_string(Mechanism m) {
  return m == Mechanism::kFirstPrice ? "first_price" : "second_price";
}

Mechanism mechanism_from_string(const std::string& s) {
  if (s == "first_price") return Mechanism::kFirstPrice;
  if (s == "second_price") return Mechanism::kSecondPrice;
  throw std::invalid_argument("unknown mechanism: " + s);
}

StageClearing seq_auction_step(const SeqAuctionSpec& spec,
                               const std::vector<double>& bids,
                               const std::vector<int>& bidder_ids,
                               double tie_u) {
  if (bids.size() < 2 || bids.size() != bidder_ids.size()) {
    throw std::invalid_argument(
        "seq_auction_step: needs at least 2 active bidders");
  }
  const double top = *std::max_element(bids.begin(), bids.end());
  std::vector<int> tied;
  for (int k = 0; k < static_cast<int>(bids.size()); ++k) {
    if (bids[k] == top) tied.push_back(k);
  }
  int pick = tied[static_cast<int>(tie_u * tied.size()) %
                  static_cast<int>(tied.size())];

  StageClearing out;
  out.winner = bidder_ids[pick];
  if (spec.mechanism == Mechanism::kFirstPrice) {
    out.price = top;
  } else {
    // Highest losing bid; with a tie at the top this equals the top bid.
    double second = -1.0;
    for (int k = 0; k < static_cast<int>(bids.size()); ++k) {
      if (k == pick) continue;
      second = std::max(second, bids[k]);
    }
    out.price = second;
  }
  return out;
}

SequentialAuction::SequentialAuction(SeqAuctionSpec spec) : spec_(std::move(spec)) {
  if (spec_.n_bidders <= spec_.n_stages) {
    throw std::invalid_argument("sequential auction: requires N > T");
  }
  if (spec_.prior.n_agents != spec_.n_bidders) {
    throw std::invalid_argument("sequential auction: prior/bidder count mismatch");
  }
  bid_cap_ = 2.0 * spec_.prior.observation_upper_bound();
  action_box_ = Box::interval(0.0, bid_cap_);

  signal_boxes_.resize(spec_.n_bidders);
  for (int i = 0; i < spec_.n_bidders; ++i) {
    signal_boxes_[i].reserve(spec_.n_stages);
    Box b = spec_.prior.observation_box(i);
    for (int t = 0; t < spec_.n_stages; ++t) {
      signal_boxes_[i].push_back(b);
      if (spec_.reveal_prices) b = b.concat(Box::interval(0.0, bid_cap_));
      b = b.concat(action_box_);
    }
  }
}

const Box& SequentialAuction::action_space(int, int) const { return action_box_; }

const Box& SequentialAuction::signal_space(int player, int stage) const {
  return signal_boxes_[player][stage];
}

TypeDraw SequentialAuction::draw_types(Prng& rng) const {
  return spec_.prior.sample(rng);
}

bool SequentialAuction::acts(const GameState& s, int player, int stage) const {
  (void)stage;
  return s.active[player] != 0;
}

Vec SequentialAuction::signal(const GameState& s, int player, int stage) const {
  Vec sig(1 + stage * stride());
  sig[0] = s.types.observations[player];
  int k = 1;
  for (int r = 0; r < stage; ++r) {
    if (spec_.reveal_prices) sig[k++] = s.prices[r];
    sig[k++] = s.actions[r][player][0];
  }
  return sig;
}

void SequentialAuction::advance(GameState& s, const std::vector<Vec>& actions,
                                const Vec& nature) const {
  std::vector<double> bids;
  std::vector<int> ids;
  for (int i = 0; i < spec_.n_bidders; ++i) {
    if (s.active[i]) {
      bids.push_back(actions[i][0]);
      ids.push_back(i);
    }
  }
  const StageClearing c = seq_auction_step(spec_, bids, ids, nature[0]);
  s.active[c.winner] = 0;
  s.winners.push_back(c.winner);
  s.prices.push_back(c.price);
  s.actions.push_back(actions);
  s.nature.push_back(nature);
  ++s.completed;
}

Vec SequentialAuction::utilities(const GameState& s) const {
  Vec u = Vec::Zero(spec_.n_bidders);
  for (int t = 0; t < s.completed; ++t) {
    const int w = s.winners[t];
    u[w] = spec_.risk.apply(s.types.values[w] - s.prices[t]);
  }
  return u;
}

double SequentialAuction::utility_bound() const {
  // Payoffs live in [-bid_cap, v_max]; values never exceed the observation
  // bound under any of the prior families. h_rho is increasing.
  const double v_max = spec_.prior.observation_upper_bound();
  return std::max(std::abs(spec_.risk.apply(-bid_cap_)),
                  std::abs(spec_.risk.apply(v_max)));
}

Vec SequentialAuction::own_action_from_signal(int, int from_stage, int at_stage,
                                              const Vec& sig) const {
  if (at_stage >= from_stage) {
    throw std::invalid_argument("own_action_from_signal: at_stage >= from_stage");
  }
  Vec a(1);
  a[0] = sig[1 + at_stage * stride() + (spec_.reveal_prices ? 1 : 0)];
  return a;
}

Vec SequentialAuction::own_signal_from_signal(int, int from_stage, int at_stage,
                                              const Vec& sig) const {
  if (at_stage > from_stage) {
    throw std::invalid_argument("own_signal_from_signal: at_stage > from_stage");
  }
  return sig.head(1 + at_stage * stride());
}

std::vector<int> SequentialAuction::external_signal_dims(int, int stage) const {
  std::vector<int> dims{0};
  if (spec_.reveal_prices) {
    for (int r = 0; r < stage; ++r) dims.push_back(1 + r * stride());
  }
  return dims;
}

std::vector<int> SequentialAuction::own_action_stages(int, int stage) const {
  std::vector<int> stages(stage);
  for (int r = 0; r < stage; ++r) stages[r] = r;
  return stages;
}

bool SequentialAuction::symmetric() const {
  if (spec_.prior.kind != PriorKind::kIndependentUniform) return true;
  for (int i = 1; i < spec_.n_bidders; ++i) {
    if (spec_.prior.lows[i] != spec_.prior.lows[0] ||
        spec_.prior.highs[i] != spec_.prior.highs[0]) {
      return false;
    }
  }
  return true;
}

}  // namespace eqlab
