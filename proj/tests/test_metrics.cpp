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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eqlab/analytic.hpp"
#include "eqlab/environments/bertrand.hpp"
#include "eqlab/environments/sequential_auction.hpp"
#include "eqlab/metrics.hpp"
#include "eqlab/policy.hpp"
#include "eqlab/rollout.hpp"
#include "test_games.hpp"

using namespace eqlab;

namespace {

SequentialAuction fpsb1() {
  SeqAuctionSpec spec;
  spec.mechanism = Mechanism::kFirstPrice;
  spec.n_stages = 1;
  spec.n_bidders = 2;
  spec.prior = PriorModel::independent_uniform(2, 0.0, 1.0);
  return SequentialAuction(spec);
}

class OffsetOf : public Strategy {
 public:
  OffsetOf(std::shared_ptr<const Strategy> base, double offset)
      : base_(std::move(base)), offset_(offset) {}
  Vec mean_action(int player, int stage, const Vec& signal) const override {
    Vec a = base_->mean_action(player, stage, signal);
    a.array() += offset_;
    return a;
  }

 private:
  std::shared_ptr<const Strategy> base_;
  double offset_;
};

}  // namespace

TEST_CASE("deviating to the equilibrium strategy itself loses nothing") {
  const auto game = fpsb1();
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 2, "eq");
  // With common random numbers the two estimates coincide exactly.
  const double loss = loss_in_equilibrium(game, *eq, 0, profile, 1 << 14, 3);
  CHECK(loss == 0.0);
}

TEST_CASE("loss in equilibrium of the analytic strategy across seeds") {
  const auto game = fpsb1();
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 2, "eq");
  double mean = 0.0;
  std::vector<double> losses;
  for (int s = 0; s < 10; ++s) {
    losses.push_back(loss_in_equilibrium(game, *eq, 0, profile, 1 << 12, 100 + s));
    mean += losses.back();
  }
  mean /= 10.0;
  double var = 0.0;
  for (double l : losses) var += (l - mean) * (l - mean);
  const double se = std::sqrt(var / 9.0) / std::sqrt(10.0);
  CHECK(std::abs(mean) <= std::max(3.0 * se, 1e-12));
}

TEST_CASE("truthful bidding loses one sixth against the equilibrium") {
  // Truthful earns zero in a first-price auction; the equilibrium earns 1/6.
  const auto game = fpsb1();
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 2, "eq");
  const auto truthful = std::make_shared<testing::NoisyLinear>(
      1.0, 0.0, 0.0, Box::interval(0.0, 2.0));
  const double loss = loss_in_equilibrium(game, *truthful, 0, profile, 1 << 18, 5);
  CHECK(loss == doctest::Approx(1.0 / 6.0).epsilon(0.03));
}

TEST_CASE("l2 distance of the equilibrium to itself is exactly zero") {
  const auto game = fpsb1();
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 2, "eq");
  CHECK(l2_distance(game, *eq, 0, profile, 0, 4096, 7) == 0.0);
}

TEST_CASE("a constant offset shows up as exactly that distance") {
  const auto game = fpsb1();
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 2, "eq");
  const OffsetOf shifted(eq, 0.1);
  CHECK(l2_distance(game, shifted, 0, profile, 0, 4096, 9) ==
        doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("l2 ignores the policy's log standard deviation") {
  const auto game = fpsb1();
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 2, "eq");
  GaussianPolicy narrow(InputCodec::for_player(game, 0), 1, -3.0, 55);
  GaussianPolicy wide = narrow;
  wide.log_std().setConstant(1.0);
  const double a = l2_distance(game, narrow, 0, profile, 0, 2048, 11);
  const double b = l2_distance(game, wide, 0, profile, 0, 2048, 11);
  CHECK(a == b);
}

TEST_CASE("stages without actions are absent markers") {
  const BertrandCompetition game(BertrandSpec{});
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 2, "eq");
  // The leader never acts at stage 1.
  CHECK(std::isnan(l2_distance(game, *eq, 0, profile, 1, 1024, 3)));
  CHECK(std::isfinite(l2_distance(game, *eq, 0, profile, 0, 1024, 3)));
}

TEST_CASE("evaluate_profile aggregates per stage and player") {
  const auto game = fpsb1();
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 2, "eq");
  const MetricsReport report = evaluate_profile(game, profile, &profile, 1 << 14, 13);
  CHECK(report.util_hat.size() == 2);
  CHECK(report.util_hat[0] == doctest::Approx(1.0 / 6.0).epsilon(0.05));
  CHECK(report.loss_equ[0] == 0.0);
  CHECK(report.l2_stage(0, 0) == 0.0);
  CHECK(report.l2_avg[0] == 0.0);
  CHECK(std::isnan(report.loss_ver[0]));

  // The average equals the arithmetic mean of the present per-stage values.
  SUBCASE("l2 average is the mean over present stages") {
    const BertrandCompetition bertrand(BertrandSpec{});
    const auto beq = analytic_equilibrium(bertrand);
    const auto bprofile = StrategyProfile::shared(beq, 2, "eq");
    const MetricsReport r = evaluate_profile(bertrand, bprofile, &bprofile, 4096, 17);
    CHECK(r.l2_avg[0] == r.l2_stage(0, 0));  // single present stage
    CHECK(r.l2_avg[1] == r.l2_stage(1, 1));
  }
}

TEST_CASE("common random numbers cancel shared noise") {
  // The deviation run reuses the equilibrium run's type stream, so the loss
  // of a nearly identical strategy has far less variance than the utilities.
  const auto game = fpsb1();
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 2, "eq");
  const OffsetOf nearly(eq, 1e-3);
  std::vector<double> losses;
  for (int s = 0; s < 5; ++s) {
    losses.push_back(loss_in_equilibrium(game, nearly, 0, profile, 4096, 300 + s));
  }
  for (const double l : losses) CHECK(std::abs(l) < 5e-3);
}
