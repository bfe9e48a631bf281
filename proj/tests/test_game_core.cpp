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

#include <omp.h>

#include "eqlab/analytic.hpp"
#include "eqlab/environments/sequential_auction.hpp"
#include "eqlab/policy.hpp"
#include "eqlab/rollout.hpp"
#include "test_games.hpp"

using namespace eqlab;

namespace {

SequentialAuction fpsb(int stages, int bidders,
                       Mechanism mech = Mechanism::kFirstPrice) {
  SeqAuctionSpec spec;
  spec.mechanism = mech;
  spec.n_stages = stages;
  spec.n_bidders = bidders;
  spec.prior = PriorModel::independent_uniform(bidders, 0.0, 1.0);
  return SequentialAuction(spec);
}

class ScaledValueBid : public Strategy {
 public:
  explicit ScaledValueBid(double scale) : scale_(scale) {}
  Vec mean_action(int, int, const Vec& signal) const override {
    Vec a(1);
    a[0] = scale_ * signal[0];
    return a;
  }

 private:
  double scale_;
};

bool batches_equal(const RolloutBatch& a, const RolloutBatch& b) {
  if (a.n != b.n) return false;
  if ((a.utilities - b.utilities).cwiseAbs().maxCoeff() != 0.0) return false;
  for (std::size_t t = 0; t < a.actions.size(); ++t) {
    for (std::size_t i = 0; i < a.actions[t].size(); ++i) {
      if ((a.actions[t][i] - b.actions[t][i]).cwiseAbs().maxCoeff() != 0.0) return false;
      if ((a.signals[t][i] - b.signals[t][i]).cwiseAbs().maxCoeff() != 0.0) return false;
      if (a.acted[t][i] != b.acted[t][i]) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("truthful bidding in a first-price auction earns exactly zero") {
  const auto game = fpsb(1, 2);
  const auto profile =
      StrategyProfile::shared(std::make_shared<ScaledValueBid>(1.0), 2, "truthful");
  const Vec u = expected_utilities(game, profile, 1 << 14, 1);
  CHECK(u[0] == 0.0);  // winner pays its own bid, which equals its value
  CHECK(u[1] == 0.0);
}

TEST_CASE("half bids in a 2-bidder first-price auction earn one sixth") {
  // E[1{v_i > v_j} v_i / 2] = 1/6 per player, by direct integration.
  const auto game = fpsb(1, 2);
  const auto profile =
      StrategyProfile::shared(std::make_shared<ScaledValueBid>(0.5), 2, "half");
  const Vec u = expected_utilities(game, profile, 1 << 20, 2);
  CHECK(u[0] == doctest::Approx(1.0 / 6.0).epsilon(0.012));
  CHECK(std::abs(u[0] - 1.0 / 6.0) < 0.002);
  CHECK(std::abs(u[1] - 1.0 / 6.0) < 0.002);
}

TEST_CASE("rollouts are a pure function of (spec, profile, n, seed)") {
  const auto game = fpsb(2, 3);
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 3, "eq");
  const RolloutBatch a = rollout(game, profile, 512, 77);
  const RolloutBatch b = rollout(game, profile, 512, 77);
  CHECK(batches_equal(a, b));
  const RolloutBatch c = rollout(game, profile, 512, 78);
  CHECK_FALSE(batches_equal(a, c));
}

TEST_CASE("rollout is independent of the worker count") {
  const auto game = fpsb(2, 3);
  const auto policy = std::make_shared<GaussianPolicy>(
      InputCodec::for_player(game, 0), 1, -1.0, 5);
  const auto profile = StrategyProfile::shared(policy, 3, "mlp");
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const RolloutBatch a = rollout(game, profile, 1024, 9);
  omp_set_num_threads(2);
  const RolloutBatch b = rollout(game, profile, 1024, 9);
  omp_set_num_threads(saved);
  CHECK(batches_equal(a, b));
  CHECK((a.raw_actions[0][0] - b.raw_actions[0][0]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rollout slices compose to the full stream") {
  const auto game = fpsb(1, 2);
  const auto profile =
      StrategyProfile::shared(std::make_shared<ScaledValueBid>(0.5), 2, "half");
  const RolloutBatch full = rollout(game, profile, 64, 5);
  const RolloutBatch tail = rollout_slice(game, profile, 32, 32, 5);
  for (int r = 0; r < 32; ++r) {
    CHECK(full.utilities(32 + r, 0) == tail.utilities(r, 0));
    CHECK(full.values(32 + r, 1) == tail.values(r, 1));
  }
}

TEST_CASE("estimate_utility is the batch mean") {
  RolloutBatch batch;
  batch.n = 4;
  batch.utilities.resize(4, 1);
  batch.utilities << 1.0, 0.0, 0.0, 1.0;
  CHECK(estimate_utility(batch, 0) == 0.5);

  RolloutBatch single;
  single.n = 1;
  single.utilities.resize(1, 1);
  single.utilities << -3.2;
  CHECK(estimate_utility(single, 0) == -3.2);

  RolloutBatch empty;
  CHECK_THROWS_AS(estimate_utility(empty, 0), std::domain_error);
}

TEST_CASE("second-price two-stage equilibrium utility is about one quarter") {
  const auto game = fpsb(2, 3, Mechanism::kSecondPrice);
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 3, "eq");
  const Vec u = expected_utilities(game, profile, 1 << 20, 4);
  for (int i = 0; i < 3; ++i) {
    CHECK(u[i] == doctest::Approx(0.25).epsilon(0.02));
  }
}

TEST_CASE("profile size and output dimension are validated") {
  const auto game = fpsb(1, 2);
  StrategyProfile short_profile;
  short_profile.players.push_back(std::make_shared<ScaledValueBid>(0.5));
  short_profile.id = "short";
  CHECK_THROWS_AS(rollout(game, short_profile, 8, 1), std::invalid_argument);

  class WrongDim : public Strategy {
   public:
    Vec mean_action(int, int, const Vec&) const override { return Vec::Zero(2); }
  };
  const auto bad = StrategyProfile::shared(std::make_shared<WrongDim>(), 2, "bad");
  CHECK_THROWS_AS(rollout(game, bad, 8, 1), std::invalid_argument);
}

TEST_CASE("non-finite actions raise a numeric fault with the trajectory index") {
  class NanAt3 : public Strategy {
   public:
    Vec mean_action(int, int, const Vec& signal) const override {
      Vec a(1);
      a[0] = signal[0] > 0.0 ? 0.1 : 0.1;
      return a;
    }
    Mat mean_action_batch(int, int, const Mat& signals) const override {
      Mat a = Mat::Constant(signals.rows(), 1, 0.1);
      if (signals.rows() > 3) a(3, 0) = std::numeric_limits<double>::quiet_NaN();
      return a;
    }
  };
  const auto game = fpsb(1, 2);
  const auto profile = StrategyProfile::shared(std::make_shared<NanAt3>(), 2, "nan");
  try {
    rollout(game, profile, 16, 1);
    FAIL("expected NumericFault");
  } catch (const NumericFault& e) {
    CHECK(e.trajectory() == 3);
  }
}

TEST_CASE("perfect recall: later signals decompose exactly") {
  for (const bool reveal : {true, false}) {
    SeqAuctionSpec spec;
    spec.mechanism = Mechanism::kFirstPrice;
    spec.n_stages = 3;
    spec.n_bidders = 4;
    spec.prior = PriorModel::independent_uniform(4, 0.0, 1.0);
    spec.reveal_prices = reveal;
    const SequentialAuction game(spec);
    const auto eq = std::make_shared<ScaledValueBid>(0.25);
    const auto profile = StrategyProfile::shared(eq, 4, "q");
    const RolloutBatch batch = rollout(game, profile, 64, 13);
    for (int r = 0; r < batch.n; ++r) {
      for (int i = 0; i < 4; ++i) {
        for (int from = 1; from < 3; ++from) {
          if (!batch.acted[from][i][r]) continue;
          const Vec sig = batch.signals[from][i].row(r).transpose();
          for (int at = 0; at < from; ++at) {
            const Vec a = game.own_action_from_signal(i, from, at, sig);
            CHECK(a[0] == batch.actions[at][i](r, 0));
            const Vec s = game.own_signal_from_signal(i, from, at, sig);
            const Vec expect = batch.signals[at][i].row(r).transpose();
            CHECK(s.size() == expect.size());
            CHECK((s - expect).cwiseAbs().maxCoeff() == 0.0);
          }
        }
      }
    }
  }
}

TEST_CASE("utilities respect the declared bound") {
  SeqAuctionSpec spec;
  spec.mechanism = Mechanism::kSecondPrice;
  spec.n_stages = 2;
  spec.n_bidders = 3;
  spec.prior = PriorModel::mineral_rights(3);
  spec.risk = RiskTransform(2.0);
  const SequentialAuction game(spec);
  const auto policy = std::make_shared<GaussianPolicy>(
      InputCodec::for_player(game, 0), 1, 0.5, 3);  // wide noise on purpose
  const auto profile = StrategyProfile::shared(policy, 3, "mlp");
  const RolloutBatch batch = rollout(game, profile, 4096, 21);
  CHECK(batch.utilities.cwiseAbs().maxCoeff() <= game.utility_bound());
}

TEST_CASE("Monte Carlo estimates tighten with the sample count") {
  const auto game = fpsb(1, 2);
  const auto profile =
      StrategyProfile::shared(std::make_shared<ScaledValueBid>(0.5), 2, "half");
  const double truth = 1.0 / 6.0;
  double err_small = 0.0, err_large = 0.0;
  for (int s = 0; s < 20; ++s) {
    err_small += std::abs(expected_utilities(game, profile, 1 << 8, 100 + s)[0] - truth);
    err_large += std::abs(expected_utilities(game, profile, 1 << 10, 200 + s)[0] - truth);
  }
  CHECK(err_small >= 1.5 * err_large);
}

TEST_CASE("tiny game frame: both players act every stage") {
  testing::TinyTwoStage game({}, true);
  const auto opp = std::make_shared<testing::NoisyLinear>(0.5, 0.1, 0.0,
                                                          Box::interval(0.0, 1.0));
  const auto profile = StrategyProfile::shared(opp, 2, "lin");
  const RolloutBatch batch = rollout(game, profile, 32, 3);
  for (int t = 0; t < 2; ++t) {
    for (int i = 0; i < 2; ++i) {
      for (int r = 0; r < batch.n; ++r) CHECK(batch.acted[t][i][r] == 1);
    }
  }
}
