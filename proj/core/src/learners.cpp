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

#include "eqlab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eqlab/analytic.hpp"
#include "eqlab/metrics.hpp"
#include "eqlab/rng.hpp"

namespace eqlab {

std::string to_string(Algo a) {
  return a == Algo::kReinforce ? "reinforce" : "ppo";
}

Algo algo_from_string(const std::string& s) {
  if (s == "reinforce") return Algo::kReinforce;
  if (s == "ppo") return Algo::kPpo;
  throw std::invalid_argument("unknown algo: " + s);
}

std::string to_string(Sharing s) {
  return s == Sharing::kShared ? "shared" : "independent";
}

Sharing sharing_from_string(const std::string& s) {
  if (s == "shared") return Sharing::kShared;
  if (s == "independent") return Sharing::kIndependent;
  throw std::invalid_argument("unknown sharing mode: " + s);
}

void LearnerConfig::validate() const {
  if (learning_rate <= 0.0) {
    throw std::invalid_argument("learner.learning_rate must be > 0");
  }
  if (batch_size < 2) {
    throw std::invalid_argument("learner.batch_size must be >= 2");
  }
  if (iterations < 1) {
    throw std::invalid_argument("learner.iterations must be >= 1");
  }
  if (ppo.clip < 0.0 || ppo.epochs < 1 || ppo.minibatches < 1) {
    throw std::invalid_argument("learner.ppo configuration invalid");
  }
}

namespace {

// Per-player batch returns, normalized to zero mean and unit variance; only
// centered when every return is identical.
Vec normalized_returns(const RolloutBatch& batch, int player) {
  Vec u = batch.utilities.col(player);
  const double mean = u.mean();
  u.array() -= mean;
  const double var = u.squaredNorm() / u.size();
  if (var > 0.0) u /= std::sqrt(var);
  return u;
}

struct StageSteps {
  std::vector<int> rows;     // source row in the batch
  std::vector<int> players;  // source player column
};

// Gradient of L = sum_k coeff_k * logpi(raw_k | sig_k) with respect to the
// policy parameters, accumulated over stages. Signs are chosen by the caller
// through `coeff`.
struct PolicyGrads {
  Mlp::Grads mlp;
  Vec log_std;
  bool initialized = false;
};

void accumulate_policy_gradient(const GaussianPolicy& policy, int stage,
                                const Mat& signals, const Mat& raw,
                                const Vec& coeff, PolicyGrads& out) {
  const PolicyLogProbGrads g = policy_log_prob_gradient(policy, stage, signals,
                                                        raw, coeff);
  if (!out.initialized) {
    out.mlp = g.mlp;
    out.log_std = g.log_std;
    out.initialized = true;
  } else {
    out.mlp.w1 += g.mlp.w1;
    out.mlp.w2 += g.mlp.w2;
    out.mlp.w3 += g.mlp.w3;
    out.mlp.b1 += g.mlp.b1;
    out.mlp.b2 += g.mlp.b2;
    out.mlp.b3 += g.mlp.b3;
    out.log_std += g.log_std;
  }
}

void clip_global_norm(PolicyGrads& g, double max_norm) {
  double sq = g.mlp.w1.squaredNorm() + g.mlp.w2.squaredNorm() +
              g.mlp.w3.squaredNorm() + g.mlp.b1.squaredNorm() +
              g.mlp.b2.squaredNorm() + g.mlp.b3.squaredNorm() +
              g.log_std.squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm <= max_norm || norm == 0.0) return;
  const double scale = max_norm / norm;
  g.mlp.w1 *= scale;
  g.mlp.w2 *= scale;
  g.mlp.w3 *= scale;
  g.mlp.b1 *= scale;
  g.mlp.b2 *= scale;
  g.mlp.b3 *= scale;
  g.log_std *= scale;
}

void apply_policy_step(GaussianPolicy& policy, Adam& opt, PolicyGrads& g) {
  std::vector<Mat*> weights = policy.mlp().weight_params();
  std::vector<Vec*> biases = policy.mlp().bias_params();
  biases.push_back(&policy.log_std());
  std::vector<Vec> bias_grads{g.mlp.b1, g.mlp.b2, g.mlp.b3, g.log_std};
  opt.step(weights, biases, {g.mlp.w1, g.mlp.w2, g.mlp.w3}, bias_grads);
  // Keep the density well defined.
  for (int d = 0; d < policy.log_std().size(); ++d) {
    policy.log_std()[d] = std::clamp(policy.log_std()[d], -10.0, 2.0);
  }
}

void clip_mlp_norm(Mlp::Grads& g, double max_norm) {
  double sq = g.w1.squaredNorm() + g.w2.squaredNorm() + g.w3.squaredNorm() +
              g.b1.squaredNorm() + g.b2.squaredNorm() + g.b3.squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm <= max_norm || norm == 0.0) return;
  const double scale = max_norm / norm;
  g.w1 *= scale;
  g.w2 *= scale;
  g.w3 *= scale;
  g.b1 *= scale;
  g.b2 *= scale;
  g.b3 *= scale;
}

}  // namespace

PolicyLogProbGrads policy_log_prob_gradient(const GaussianPolicy& policy,
                                            int stage, const Mat& signals,
                                            const Mat& raw, const Vec& coeff) {
  const Mat x = policy.codec().encode(stage, signals);
  const Mlp::Cache cache = policy.mlp().forward_cached(x);
  const Vec std = policy.std();
  Mat d_mean(raw.rows(), raw.cols());
  for (int d = 0; d < raw.cols(); ++d) {
    const double s = std[d];
    d_mean.col(d) =
        coeff.cwiseProduct((raw.col(d) - cache.out.col(d)) / (s * s));
  }
  PolicyLogProbGrads out;
  out.mlp = policy.mlp().backward(cache, d_mean);
  out.log_std = Vec::Zero(raw.cols());
  for (int d = 0; d < raw.cols(); ++d) {
    const double s = std[d];
    const auto z = (raw.col(d) - cache.out.col(d)).array() / s;
    out.log_std[d] = (coeff.array() * (z.square() - 1.0)).sum();
  }
  return out;
}

void reinforce_update(GaussianPolicy& policy, Adam& opt, const RolloutBatch& batch,
                      const std::vector<int>& players, const LearnerConfig& cfg) {
  (void)cfg;
  const int stages = static_cast<int>(batch.signals.size());
  const double n_norm =
      static_cast<double>(batch.n) * static_cast<double>(players.size());

  std::vector<Vec> weights;
  weights.reserve(players.size());
  for (int p : players) weights.push_back(normalized_returns(batch, p));

  PolicyGrads grads;
  for (int t = 0; t < stages; ++t) {
    std::vector<int> rows, cols;
    for (std::size_t k = 0; k < players.size(); ++k) {
      const int p = players[k];
      for (int r = 0; r < batch.n; ++r) {
        if (batch.acted[t][p][r]) {
          rows.push_back(r);
          cols.push_back(static_cast<int>(k));
        }
      }
    }
    if (rows.empty()) continue;
    const int m = static_cast<int>(rows.size());
    const int sig_dim = static_cast<int>(batch.signals[t][players[0]].cols());
    const int act_dim = static_cast<int>(batch.raw_actions[t][players[0]].cols());
    Mat sig(m, sig_dim), raw(m, act_dim);
    Vec coeff(m);
    for (int k = 0; k < m; ++k) {
      const int p = players[cols[k]];
      sig.row(k) = batch.signals[t][p].row(rows[k]);
      raw.row(k) = batch.raw_actions[t][p].row(rows[k]);
      // Loss is the negative weighted log-likelihood mean.
      coeff[k] = -weights[cols[k]][rows[k]] / n_norm;
    }
    accumulate_policy_gradient(policy, t, sig, raw, coeff, grads);
  }
  if (!grads.initialized) return;
  apply_policy_step(policy, opt, grads);
}

int ppo_update(GaussianPolicy& policy, Mlp& value_net, Adam& policy_opt,
               Adam& value_opt, const RolloutBatch& batch,
               const std::vector<int>& players, const LearnerConfig& cfg,
               std::uint64_t shuffle_key) {
  const int stages = static_cast<int>(batch.signals.size());
  const PpoConfig& pc = cfg.ppo;

  // Per-player rewards, optionally normalized.
  std::vector<Vec> rewards;
  for (int p : players) {
    rewards.push_back(pc.normalize_reward ? normalized_returns(batch, p)
                                          : Vec(batch.utilities.col(p)));
  }

  // Flattened decision steps.
  struct Step {
    int stage, row, player_slot;
    double old_logp, value, advantage, ret;
  };
  std::vector<Step> steps;
  std::vector<std::vector<int>> step_of;  // [player_slot] trajectory-major scratch

  // Value predictions per (stage, player).
  std::vector<std::vector<Vec>> values(stages);
  for (int t = 0; t < stages; ++t) {
    values[t].resize(players.size());
    for (std::size_t k = 0; k < players.size(); ++k) {
      const int p = players[k];
      const Mat x = policy.codec().encode(t, batch.signals[t][p]);
      values[t][k] = value_net.forward(x).col(0);
    }
  }

  for (std::size_t k = 0; k < players.size(); ++k) {
    const int p = players[k];
    for (int r = 0; r < batch.n; ++r) {
      // The trajectory's acted stages, in order.
      int prev_index = -1;
      std::vector<int> traj;
      for (int t = 0; t < stages; ++t) {
        if (!batch.acted[t][p][r]) continue;
        Step s;
        s.stage = t;
        s.row = r;
        s.player_slot = static_cast<int>(k);
        s.old_logp = batch.log_probs[t][p][r];
        s.value = values[t][k][r];
        steps.push_back(s);
        traj.push_back(static_cast<int>(steps.size()) - 1);
        (void)prev_index;
      }
      if (traj.empty()) continue;
      // Terminal-only reward; generalized advantage estimation backward.
      double gae = 0.0;
      for (int j = static_cast<int>(traj.size()) - 1; j >= 0; --j) {
        Step& s = steps[traj[j]];
        const bool last = j == static_cast<int>(traj.size()) - 1;
        const double next_value = last ? 0.0 : steps[traj[j + 1]].value;
        const double reward = last ? rewards[k][r] : 0.0;
        const double delta = reward + pc.discount * next_value - s.value;
        gae = delta + pc.discount * pc.gae_lambda * gae;
        s.advantage = gae;
        s.ret = gae + s.value;
      }
    }
  }
  (void)step_of;
  if (steps.empty()) return 0;

  const int n_steps = static_cast<int>(steps.size());
  std::vector<int> order(n_steps);
  std::iota(order.begin(), order.end(), 0);

  int applied = 0;
  Prng shuffle_rng(mix(shuffle_key, 0x5u));
  for (int epoch = 0; epoch < pc.epochs; ++epoch) {
    // Fisher-Yates with the run's own stream.
    for (int i = n_steps - 1; i > 0; --i) {
      const int j = shuffle_rng.uniform_int(i + 1);
      std::swap(order[i], order[j]);
    }
    const int mb_size = std::max(1, n_steps / pc.minibatches);
    for (int mb = 0; mb < pc.minibatches; ++mb) {
      const int lo = mb * mb_size;
      const int hi = mb + 1 == pc.minibatches ? n_steps : std::min(n_steps, lo + mb_size);
      if (lo >= hi) continue;
      const int m = hi - lo;

      // Advantage normalization per minibatch.
      double a_mean = 0.0;
      for (int k = lo; k < hi; ++k) a_mean += steps[order[k]].advantage;
      a_mean /= m;
      double a_var = 0.0;
      for (int k = lo; k < hi; ++k) {
        const double d = steps[order[k]].advantage - a_mean;
        a_var += d * d;
      }
      const double a_std = std::sqrt(a_var / m) + 1e-8;

      // Group the minibatch by stage for batched evaluation.
      bool finite = true;
      PolicyGrads pol_grads;
      Mlp::Grads val_grads;
      bool val_init = false;
      for (int t = 0; t < stages && finite; ++t) {
        std::vector<int> members;
        for (int k = lo; k < hi; ++k) {
          if (steps[order[k]].stage == t) members.push_back(order[k]);
        }
        if (members.empty()) continue;
        const int mm = static_cast<int>(members.size());
        const int p0 = players[0];
        Mat sig(mm, batch.signals[t][p0].cols());
        Mat raw(mm, batch.raw_actions[t][p0].cols());
        Vec old_lp(mm), adv(mm), ret(mm);
        for (int k = 0; k < mm; ++k) {
          const Step& s = steps[members[k]];
          const int p = players[s.player_slot];
          sig.row(k) = batch.signals[t][p].row(s.row);
          raw.row(k) = batch.raw_actions[t][p].row(s.row);
          old_lp[k] = s.old_logp;
          adv[k] = (s.advantage - a_mean) / a_std;
          ret[k] = s.ret;
        }

        // Policy side.
        const Mat x = policy.codec().encode(t, sig);
        const Mlp::Cache cache = policy.mlp().forward_cached(x);
        const Vec std_vec = policy.std();
        Vec new_lp = Vec::Zero(mm);
        for (int d = 0; d < raw.cols(); ++d) {
          const double s = std_vec[d];
          const auto z = (raw.col(d) - cache.out.col(d)).array() / s;
          new_lp.array() +=
              -std::log(s) - 0.5 * std::log(2.0 * M_PI) - 0.5 * z.square();
        }
        Vec ratio = (new_lp - old_lp).array().exp();
        if (!ratio.allFinite()) {
          finite = false;
          break;
        }
        Vec coeff(mm);
        for (int k = 0; k < mm; ++k) {
          const double clipped =
              std::clamp(ratio[k], 1.0 - pc.clip, 1.0 + pc.clip) * adv[k];
          const double raw_surr = ratio[k] * adv[k];
          // Gradient flows only when the unclipped branch attains the min.
          coeff[k] = raw_surr <= clipped ? -(ratio[k] * adv[k]) / m : 0.0;
        }
        accumulate_policy_gradient(policy, t, sig, raw, coeff, pol_grads);

        // Value regression toward the returns.
        const Mlp::Cache vcache = value_net.forward_cached(x);
        Mat d_v = 2.0 * (vcache.out.col(0) - ret) / static_cast<double>(m);
        Mlp::Grads vg = value_net.backward(vcache, d_v);
        if (!val_init) {
          val_grads = vg;
          val_init = true;
        } else {
          val_grads.w1 += vg.w1;
          val_grads.w2 += vg.w2;
          val_grads.w3 += vg.w3;
          val_grads.b1 += vg.b1;
          val_grads.b2 += vg.b2;
          val_grads.b3 += vg.b3;
        }
      }
      if (!finite || !pol_grads.initialized) continue;
      clip_global_norm(pol_grads, pc.max_grad_norm);
      apply_policy_step(policy, policy_opt, pol_grads);
      if (val_init) {
        clip_mlp_norm(val_grads, pc.max_grad_norm);
        value_opt.step(value_net.weight_params(), value_net.bias_params(),
                       {val_grads.w1, val_grads.w2, val_grads.w3},
                       {val_grads.b1, val_grads.b2, val_grads.b3});
      }
      ++applied;
    }
  }
  return applied;
}

TrainResult self_play_train(const Game& game, const LearnerConfig& cfg,
                            Sharing sharing, std::uint64_t seed) {
  cfg.validate();
  if (sharing == Sharing::kShared && !game.symmetric()) {
    throw std::invalid_argument("self_play_train: weight sharing needs a symmetric game");
  }
  const int players = game.num_players();

  // Player groups: one policy per group.
  std::vector<std::vector<int>> groups;
  if (sharing == Sharing::kShared) {
    groups.emplace_back();
    for (int i = 0; i < players; ++i) groups[0].push_back(i);
  } else {
    for (int i = 0; i < players; ++i) groups.push_back({i});
  }

  TrainResult result;
  result.policies.resize(players);
  result.value_nets.resize(players);
  std::vector<std::shared_ptr<GaussianPolicy>> group_policies;
  std::vector<std::shared_ptr<Mlp>> group_values;
  std::vector<Adam> policy_opts, value_opts;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    int sig_dim = 0;
    for (int p : groups[g]) sig_dim = std::max(sig_dim, game.max_signal_dim(p));
    const InputCodec codec{game.num_stages(), sig_dim};
    const int act_dim = game.action_dim(groups[g][0], 0);
    auto policy = std::make_shared<GaussianPolicy>(
        codec, act_dim, cfg.init_log_std, mix(seed, 0x9017Cu, g));
    group_policies.push_back(policy);
    policy_opts.emplace_back(cfg.learning_rate);
    if (cfg.algo == Algo::kPpo) {
      group_values.push_back(
          std::make_shared<Mlp>(codec.in_dim(), 1, mix(seed, 0x7A1EEu, g)));
    } else {
      group_values.push_back(nullptr);
    }
    value_opts.emplace_back(cfg.learning_rate);
    for (int p : groups[g]) {
      result.policies[p] = policy;
      result.value_nets[p] = group_values.back();
    }
  }

  StrategyProfile profile;
  profile.id = to_string(cfg.algo);
  for (int p = 0; p < players; ++p) profile.players.push_back(result.policies[p]);

  const auto equilibrium_strategy = analytic_equilibrium(game);
  StrategyProfile equilibrium;
  if (equilibrium_strategy != nullptr) {
    equilibrium = StrategyProfile::shared(equilibrium_strategy, players, "analytic");
  }

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const RolloutBatch batch =
        rollout(game, profile, cfg.batch_size, mix(seed, 0xB47C4u, iter));

    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (cfg.algo == Algo::kReinforce) {
        reinforce_update(*group_policies[g], policy_opts[g], batch, groups[g], cfg);
      } else {
        ppo_update(*group_policies[g], *group_values[g], policy_opts[g],
                   value_opts[g], batch, groups[g], cfg,
                   mix(seed, 0x504Fu, iter, g));
      }
      if (!group_policies[g]->finite()) {
        result.nan_abort = true;
        result.abort_iteration = iter;
        result.profile = profile;
        return result;
      }
    }

    if (iter % cfg.eval_every == 0 || iter + 1 == cfg.iterations) {
      CurveRow row;
      row.iteration = iter;
      row.utility.resize(players);
      for (int p = 0; p < players; ++p) row.utility[p] = estimate_utility(batch, p);
      row.loss_equ = Vec::Constant(players, std::numeric_limits<double>::quiet_NaN());
      row.l2_avg = Vec::Constant(players, std::numeric_limits<double>::quiet_NaN());
      if (equilibrium_strategy != nullptr) {
        for (int p = 0; p < players; ++p) {
          row.loss_equ[p] =
              loss_in_equilibrium(game, *result.policies[p], p, equilibrium,
                                  cfg.eval_batch, mix(seed, 0xE7A1u, iter, p));
          KahanSum sum;
          int present = 0;
          for (int t = 0; t < game.num_stages(); ++t) {
            const double l2 =
                l2_distance(game, *result.policies[p], p, equilibrium, t,
                            cfg.eval_batch, mix(seed, 0xE7A2u, iter, p, t));
            if (std::isfinite(l2)) {
              sum.add(l2);
              ++present;
            }
          }
          if (present > 0) row.l2_avg[p] = sum.value() / present;
        }
      }
      result.curve.push_back(std::move(row));
    }
  }

  result.profile = profile;
  return result;
}

}  // namespace eqlab
