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

#include <benchmark/benchmark.h>

#include "eqlab/analytic.hpp"
#include "eqlab/environments/sequential_auction.hpp"
#include "eqlab/policy.hpp"
#include "eqlab/rollout.hpp"

namespace {

eqlab::SequentialAuction make_auction(int stages, int bidders) {
  eqlab::SeqAuctionSpec spec;
  spec.mechanism = eqlab::Mechanism::kFirstPrice;
  spec.n_stages = stages;
  spec.n_bidders = bidders;
  spec.prior = eqlab::PriorModel::independent_uniform(bidders, 0.0, 1.0);
  return eqlab::SequentialAuction(spec);
}

void BM_RolloutAnalytic(benchmark::State& state) {
  const auto game = make_auction(2, 3);
  const auto eq = eqlab::analytic_equilibrium(game);
  const auto profile = eqlab::StrategyProfile::shared(eq, 3, "eq");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eqlab::expected_utilities(game, profile, n, 17));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RolloutAnalytic)->Arg(1 << 12)->Arg(1 << 14);

void BM_RolloutPolicy(benchmark::State& state) {
  const auto game = make_auction(2, 3);
  const auto policy = std::make_shared<eqlab::GaussianPolicy>(
      eqlab::InputCodec::for_player(game, 0), 1, -1.0, 7);
  const auto profile = eqlab::StrategyProfile::shared(policy, 3, "mlp");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eqlab::rollout(game, profile, n, 17));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RolloutPolicy)->Arg(1 << 12)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
