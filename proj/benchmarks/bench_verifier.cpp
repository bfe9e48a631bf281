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
#include "eqlab/verifier.hpp"

namespace {

void BM_VerifyEquilibrium(benchmark::State& state) {
  eqlab::SeqAuctionSpec spec;
  spec.mechanism = eqlab::Mechanism::kFirstPrice;
  spec.n_stages = 2;
  spec.n_bidders = 3;
  spec.prior = eqlab::PriorModel::independent_uniform(3, 0.0, 1.0);
  const eqlab::SequentialAuction game(spec);
  const auto eq = eqlab::analytic_equilibrium(game);
  const auto profile = eqlab::StrategyProfile::shared(eq, 3, "eq");
  const int d = static_cast<int>(state.range(0));
  const std::int64_t mis = state.range(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eqlab::verify(game, profile, 0, d, mis, 3));
  }
  state.SetItemsProcessed(state.iterations() * mis);
}
BENCHMARK(BM_VerifyEquilibrium)
    ->Args({8, 1 << 10})
    ->Args({16, 1 << 12})
    ->Unit(benchmark::kMillisecond);

}  // namespace
