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

#include "eqlab/mlp.hpp"

namespace {

void BM_MlpForward(benchmark::State& state) {
  const eqlab::Mlp mlp(4, 1, 11);
  const eqlab::Mat x = eqlab::Mat::Random(state.range(0), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mlp.forward(x));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(256)->Arg(1 << 14);

void BM_MlpBackward(benchmark::State& state) {
  const eqlab::Mlp mlp(4, 1, 11);
  const eqlab::Mat x = eqlab::Mat::Random(state.range(0), 4);
  const eqlab::Mat d = eqlab::Mat::Random(state.range(0), 1);
  for (auto _ : state) {
    const auto cache = mlp.forward_cached(x);
    benchmark::DoNotOptimize(mlp.backward(cache, d));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpBackward)->Arg(256)->Arg(1 << 14);

}  // namespace
