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

#include "eqlab/metrics.hpp"

#include <cmath>
#include <limits>

#include "eqlab/rollout.hpp"

namespace eqlab {

namespace {
constexpr std::int64_t kBlockRows = 1 << 16;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

double loss_in_equilibrium(const Game& game, const Strategy& learned, int player,
                           const StrategyProfile& equilibrium, std::int64_t n,
                           std::uint64_t seed) {
  const Vec u_star = expected_utilities(game, equilibrium, n, seed);
  StrategyProfile deviated = equilibrium;
  deviated.players[player] =
      std::shared_ptr<const Strategy>(&learned, [](const Strategy*) {});
  deviated.id = equilibrium.id + "+dev";
  const Vec u_dev = expected_utilities(game, deviated, n, seed);
  return u_star[player] - u_dev[player];
}

double l2_distance(const Game& game, const Strategy& learned, int player,
                   const StrategyProfile& equilibrium, int stage, std::int64_t n,
                   std::uint64_t seed) {
  KahanSum sq;
  std::int64_t count = 0;
  for (std::int64_t base = 0; base < n; base += kBlockRows) {
    const int rows = static_cast<int>(std::min<std::int64_t>(kBlockRows, n - base));
    const RolloutBatch batch =
        rollout_slice(game, equilibrium, base, rows, seed);
    std::vector<int> acting;
    for (int r = 0; r < rows; ++r) {
      if (batch.acted[stage][player][r]) acting.push_back(r);
    }
    if (acting.empty()) continue;
    Mat sig(static_cast<int>(acting.size()), game.signal_dim(player, stage));
    for (std::size_t k = 0; k < acting.size(); ++k) {
      sig.row(static_cast<int>(k)) = batch.signals[stage][player].row(acting[k]);
    }
    // Deterministic evaluation head: the Gaussian mean, no sampling.
    const Mat a_learned = learned.mean_action_batch(player, stage, sig);
    const Mat a_star =
        equilibrium.at(player).mean_action_batch(player, stage, sig);
    const Mat diff = a_learned - a_star;
    for (int k = 0; k < diff.rows(); ++k) {
      sq.add(diff.row(k).squaredNorm());
    }
    count += diff.rows();
  }
  if (count == 0) return kNaN;
  return std::sqrt(sq.value() / static_cast<double>(count));
}

MetricsReport evaluate_profile(const Game& game, const StrategyProfile& learned,
                               const StrategyProfile* equilibrium,
                               std::int64_t n, std::uint64_t seed) {
  const int players = game.num_players();
  const int stages = game.num_stages();
  MetricsReport report;
  report.game = game.name();
  report.eval_samples = n;
  report.seed = seed;
  report.util_hat = expected_utilities(game, learned, n, seed);
  report.loss_equ = Vec::Constant(players, kNaN);
  report.loss_ver = Vec::Constant(players, kNaN);
  report.l2_stage = Mat::Constant(players, stages, kNaN);
  report.l2_avg = Vec::Constant(players, kNaN);
  if (equilibrium == nullptr) return report;

  for (int i = 0; i < players; ++i) {
    report.loss_equ[i] = loss_in_equilibrium(game, learned.at(i), i,
                                             *equilibrium, n, mix(seed, i));
    KahanSum sum;
    int present = 0;
    for (int t = 0; t < stages; ++t) {
      const double l2 = l2_distance(game, learned.at(i), i, *equilibrium, t, n,
                                    mix(seed, i, t));
      report.l2_stage(i, t) = l2;
      if (std::isfinite(l2)) {
        sum.add(l2);
        ++present;
      }
    }
    if (present > 0) report.l2_avg[i] = sum.value() / present;
  }
  return report;
}

}  // namespace eqlab
