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

#ifndef EQLAB_ENVIRONMENTS_SEQUENTIAL_AUCTION_HPP_
#define EQLAB_ENVIRONMENTS_SEQUENTIAL_AUCTION_HPP_

#include <string>
#include <vector>

#include "eqlab/game.hpp"
#include "eqlab/priors.hpp"

namespace eqlab {

enum class Mechanism { kFirstPrice, kSecondPrice };

std::string to_string(Mechanism m);
Mechanism mechanism_from_string(const std::string& s);

struct SeqAuctionSpec {
  Mechanism mechanism = Mechanism::kFirstPrice;
  int n_stages = 1;   // units for sale, one per stage
  int n_bidders = 2;  // must exceed n_stages
  PriorModel prior;
  RiskTransform risk{0.0};
  bool reveal_prices = true;  // append past winning prices to signals
};

// Result of clearing one stage given the active bidders' sealed bids.
struct StageClearing {
  int winner = -1;
  double price = 0.0;
};

// Allocation and price for one stage. `bids` holds one bid per active bidder,
// `bidder_ids` their player indices; `tie_u` is nature's tie-break draw.
StageClearing seq_auction_step(const SeqAuctionSpec& spec,
                               const std::vector<double>& bids,
                               const std::vector<int>& bidder_ids,
                               double tie_u);

// T units sold in T consecutive sealed-bid stages to N > T unit-demand
// bidders; a winner never bids again. Signals carry the bidder's observation,
// past winning prices (when revealed) and the bidder's own past bids.
class SequentialAuction : public Game {
 public:
  explicit SequentialAuction(SeqAuctionSpec spec);

  std::string name() const override { return "sequential_auction"; }
  int num_players() const override { return spec_.n_bidders; }
  int num_stages() const override { return spec_.n_stages; }
  const Box& action_space(int player, int stage) const override;
  const Box& signal_space(int player, int stage) const override;
  TypeDraw draw_types(Prng& rng) const override;
  int nature_dim(int stage) const override { (void)stage; return 1; }
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

  const SeqAuctionSpec& spec() const { return spec_; }
  double bid_cap() const { return bid_cap_; }

 private:
  int stride() const { return spec_.reveal_prices ? 2 : 1; }

  SeqAuctionSpec spec_;
  double bid_cap_;
  Box action_box_;
  // signal_boxes_[player][stage]
  std::vector<std::vector<Box>> signal_boxes_;
};

}  // namespace eqlab

#endif  // EQLAB_ENVIRONMENTS_SEQUENTIAL_AUCTION_HPP_
