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
// Closed-form equilibrium strategies for the three standard settings. These
// serve as baselines, as opponents when measuring the utility loss in
// equilibrium, and as oracles in the test suites.

#ifndef EQLAB_ANALYTIC_HPP_
#define EQLAB_ANALYTIC_HPP_

#include <functional>
#include <memory>

#include "eqlab/environments/bertrand.hpp"
#include "eqlab/environments/elimination_contest.hpp"
#include "eqlab/environments/sequential_auction.hpp"
#include "eqlab/game.hpp"
#include "eqlab/strategy.hpp"

namespace eqlab {

// Root of f on [lo, hi] (f(lo) and f(hi) must straddle zero).
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-12, int max_iter = 200);

// Sequential sales, uniform [0,1] unit-demand values: the symmetric
// equilibrium bid at (0-based) stage t with T units and N > T bidders.
double seq_auction_eq(Mechanism mechanism, int n_bidders, int n_units, int stage,
                      double value);

// Two-round elimination contest on [1, 1.5] valuations.
double contest_we(double v);
double contest_se(double v);
double contest_eq_round1(ContestReveal reveal, double v);
// Round 2 given the other finalist's revealed valuation, or revealed round-1
// bid (inverted through the monotone round-1 strategy, clamped to its range).
double contest_eq_round2_valuations(double v_i, double v_j);
double contest_eq_round2_bids(double v_i, double revealed_bid);

// Stackelberg-Bertrand standard setting.
double bertrand_leader_inverse(double p1);            // beta_11^{-1}
double bertrand_leader_eq(double c1);                 // numerical inverse of the above
double bertrand_monopoly_price(double c2);            // 5 + c/2
double bertrand_follower_eq(double c2, double p1);

// The analytic profile for a game's standard setting, or nullptr when no
// closed form exists (interdependent priors, risk aversion, asymmetry).
std::shared_ptr<const Strategy> analytic_equilibrium(const Game& game);

}  // namespace eqlab

#endif  // EQLAB_ANALYTIC_HPP_
