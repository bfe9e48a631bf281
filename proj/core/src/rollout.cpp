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

#include "eqlab/rollout.hpp"

#include <cmath>

#include "eqlab/rng.hpp"

namespace eqlab {

namespace {

constexpr std::int64_t kBlockRows = 1 << 16;

// Rolls out trajectories [first, first + rows) of the stream defined by
// `seed`, writing per-stage data into `batch` at row offset `out_base` when a
// batch is provided, and always accumulating utilities into `util_sums`.
void roll_block(const Game& game, const StrategyProfile& profile,
                std::int64_t first, int rows, std::uint64_t seed,
                RolloutBatch* batch, std::int64_t out_base,
                std::vector<KahanSum>* util_sums) {
  const int players = game.num_players();
  const int stages = game.num_stages();

  std::vector<GameState> states(rows);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    Prng rng = stream_rng(seed, RngStream::kTypes,
                          static_cast<std::uint64_t>(first + r));
    states[r] = game.init(game.draw_types(rng));
  }

  std::vector<Vec> stage_actions(players);
  for (int t = 0; t < stages; ++t) {
    // One matrix of clamped actions per player for this stage.
    std::vector<Mat> clamped(players);
    for (int i = 0; i < players; ++i) {
      const int sig_dim = game.signal_dim(i, t);
      const int act_dim = game.action_dim(i, t);
      const Box& box = game.action_space(i, t);

      std::vector<int> rows_acting;
      rows_acting.reserve(rows);
      for (int r = 0; r < rows; ++r) {
        if (game.acts(states[r], i, t)) rows_acting.push_back(r);
      }
      const int m = static_cast<int>(rows_acting.size());

      Mat sig(m, sig_dim), eps(m, act_dim);
#pragma omp parallel for schedule(static)
      for (int k = 0; k < m; ++k) {
        const int r = rows_acting[k];
        sig.row(k) = game.signal(states[r], i, t).transpose();
        Prng rng = stream_rng(seed, RngStream::kPolicyNoise,
                              static_cast<std::uint64_t>(first + r), t, i);
        for (int d = 0; d < act_dim; ++d) eps(k, d) = rng.normal();
      }

      Mat raw = m > 0 ? profile.at(i).act_with_noise_batch(i, t, sig, eps)
                      : Mat(0, act_dim);
      if (raw.cols() != act_dim || raw.rows() != m) {
        throw std::invalid_argument(
            "rollout: strategy output does not match the action box for player " +
            std::to_string(i));
      }

      clamped[i] = Mat::Zero(rows, act_dim);
      const bool stochastic = profile.at(i).stochastic();
      Vec lp;
      if (batch != nullptr && stochastic && m > 0) {
        lp = profile.at(i).log_prob_batch(i, t, sig, raw);
      }
      for (int k = 0; k < m; ++k) {
        const int r = rows_acting[k];
        for (int d = 0; d < act_dim; ++d) {
          const double a = raw(k, d);
          if (!std::isfinite(a)) {
            throw NumericFault("rollout: non-finite action", first + r);
          }
          clamped[i](r, d) = std::clamp(a, box.low(d), box.high(d));
        }
        if (batch != nullptr) {
          batch->signals[t][i].row(out_base + r) = sig.row(k);
          batch->raw_actions[t][i].row(out_base + r) = raw.row(k);
          batch->acted[t][i][out_base + r] = 1;
          if (stochastic) {
            batch->log_probs[t][i][out_base + r] = lp[k];
          }
        }
      }
      if (batch != nullptr) {
        for (int r = 0; r < rows; ++r) {
          batch->actions[t][i].row(out_base + r) = clamped[i].row(r);
        }
      }
    }

#pragma omp parallel for schedule(static) firstprivate(stage_actions)
    for (int r = 0; r < rows; ++r) {
      Prng rng = stream_rng(seed, RngStream::kNature,
                            static_cast<std::uint64_t>(first + r), t);
      const Vec nature = game.draw_nature(t, rng);
      for (int i = 0; i < players; ++i) {
        stage_actions[i] = clamped[i].row(r).transpose();
      }
      game.advance(states[r], stage_actions, nature);
    }
  }

  for (int r = 0; r < rows; ++r) {
    const Vec u = game.utilities(states[r]);
    for (int i = 0; i < players; ++i) {
      if (!std::isfinite(u[i])) {
        throw NumericFault("rollout: non-finite utility", first + r);
      }
      if (batch != nullptr) batch->utilities(out_base + r, i) = u[i];
      if (util_sums != nullptr) (*util_sums)[i].add(u[i]);
    }
    if (batch != nullptr) {
      batch->values.row(out_base + r) = states[r].types.values.transpose();
      batch->observations.row(out_base + r) =
          states[r].types.observations.transpose();
    }
  }
}

}  // namespace

RolloutBatch rollout(const Game& game, const StrategyProfile& profile, int n,
                     std::uint64_t seed) {
  return rollout_slice(game, profile, 0, n, seed);
}

RolloutBatch rollout_slice(const Game& game, const StrategyProfile& profile,
                           std::int64_t first, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("rollout: n must be >= 1");
  if (profile.size() != game.num_players()) {
    throw std::invalid_argument("rollout: profile must supply one strategy per player");
  }
  const int players = game.num_players();
  const int stages = game.num_stages();

  RolloutBatch batch;
  batch.seed = seed;
  batch.profile_id = profile.id;
  batch.n = n;
  batch.values.resize(n, players);
  batch.observations.resize(n, players);
  batch.utilities.resize(n, players);
  batch.signals.resize(stages);
  batch.raw_actions.resize(stages);
  batch.actions.resize(stages);
  batch.acted.resize(stages);
  batch.log_probs.resize(stages);
  for (int t = 0; t < stages; ++t) {
    for (int i = 0; i < players; ++i) {
      batch.signals[t].push_back(Mat::Zero(n, game.signal_dim(i, t)));
      batch.raw_actions[t].push_back(Mat::Zero(n, game.action_dim(i, t)));
      batch.actions[t].push_back(Mat::Zero(n, game.action_dim(i, t)));
      batch.acted[t].emplace_back(n, 0);
      batch.log_probs[t].push_back(
          Vec::Constant(n, std::numeric_limits<double>::quiet_NaN()));
    }
  }

  for (std::int64_t base = 0; base < n; base += kBlockRows) {
    const int rows = static_cast<int>(std::min<std::int64_t>(kBlockRows, n - base));
    roll_block(game, profile, first + base, rows, seed, &batch, base, nullptr);
  }
  return batch;
}

double estimate_utility(const RolloutBatch& batch, int player) {
  if (batch.n < 1) throw std::domain_error("estimate_utility: empty batch");
  KahanSum sum;
  for (int r = 0; r < batch.n; ++r) sum.add(batch.utilities(r, player));
  return sum.value() / batch.n;
}

Vec expected_utilities(const Game& game, const StrategyProfile& profile,
                       std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("expected_utilities: n must be >= 1");
  if (profile.size() != game.num_players()) {
    throw std::invalid_argument(
        "expected_utilities: profile must supply one strategy per player");
  }
  std::vector<KahanSum> sums(game.num_players());
  for (std::int64_t base = 0; base < n; base += kBlockRows) {
    const int rows = static_cast<int>(std::min<std::int64_t>(kBlockRows, n - base));
    roll_block(game, profile, base, rows, seed, nullptr, 0, &sums);
  }
  Vec out(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    out[i] = sums[i].value() / static_cast<double>(n);
  }
  return out;
}

}  // namespace eqlab
