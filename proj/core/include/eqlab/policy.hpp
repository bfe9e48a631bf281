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

#ifndef EQLAB_POLICY_HPP_
#define EQLAB_POLICY_HPP_

#include <cstdint>
#include <memory>

#include "eqlab/game.hpp"
#include "eqlab/mlp.hpp"
#include "eqlab/strategy.hpp"

namespace eqlab {

// One network serves all stages: the raw signal is zero-padded to the largest
// stage signal and prefixed with the normalized stage index.
struct InputCodec {
  int n_stages = 0;
  int signal_dim = 0;  // padded signal width

  int in_dim() const { return 1 + signal_dim; }

  Mat encode(int stage, const Mat& signals) const {
    Mat x = Mat::Zero(signals.rows(), in_dim());
    x.col(0).setConstant(static_cast<double>(stage + 1) / n_stages);
    x.block(0, 1, signals.rows(), signals.cols()) = signals;
    return x;
  }

  static InputCodec for_player(const Game& game, int player) {
    return InputCodec{game.num_stages(), game.max_signal_dim(player)};
  }
};

// Stochastic strategy: an MLP maps the encoded signal to the action mean and
// a state-independent learnable log standard deviation scales the noise.
// Sampled actions are mean + std * eps; the environment clamps them into the
// action box, while densities are always taken at the pre-clamp sample.
class GaussianPolicy final : public Strategy {
 public:
  GaussianPolicy(InputCodec codec, int action_dim, double init_log_std,
                 std::uint64_t init_key)
      : codec_(codec),
        mlp_(codec.in_dim(), action_dim, init_key, 64, 0.01),
        log_std_(Vec::Constant(action_dim, init_log_std)) {}

  const InputCodec& codec() const { return codec_; }
  Mlp& mlp() { return mlp_; }
  const Mlp& mlp() const { return mlp_; }
  Vec& log_std() { return log_std_; }
  const Vec& log_std() const { return log_std_; }
  int action_dim() const { return static_cast<int>(log_std_.size()); }
  Vec std() const { return log_std_.array().exp().matrix(); }

  Vec mean_action(int player, int stage, const Vec& signal) const override {
    (void)player;
    return mlp_.forward(codec_.encode(stage, signal.transpose())).row(0).transpose();
  }

  Mat mean_action_batch(int player, int stage, const Mat& signals) const override {
    (void)player;
    return mlp_.forward(codec_.encode(stage, signals));
  }

  Vec act_with_noise(int player, int stage, const Vec& signal,
                     const Vec& eps) const override {
    return mean_action(player, stage, signal) + std().cwiseProduct(eps);
  }

  Mat act_with_noise_batch(int player, int stage, const Mat& signals,
                           const Mat& eps) const override {
    Mat mean = mean_action_batch(player, stage, signals);
    mean.noalias() += eps * std().asDiagonal();
    return mean;
  }

  double log_prob(int player, int stage, const Vec& signal,
                  const Vec& raw_action) const override {
    const Vec mean = mean_action(player, stage, signal);
    return log_prob_given_mean(mean, raw_action);
  }

  Vec log_prob_batch(int player, int stage, const Mat& signals,
                     const Mat& raw_actions) const override {
    const Mat mean = mean_action_batch(player, stage, signals);
    Vec lp = Vec::Zero(signals.rows());
    for (int d = 0; d < action_dim(); ++d) {
      const double s = std::exp(log_std_[d]);
      const auto z = (raw_actions.col(d) - mean.col(d)).array() / s;
      lp.array() += -log_std_[d] - 0.5 * std::log(2.0 * M_PI) - 0.5 * z.square();
    }
    return lp;
  }

  // Sum over action dimensions of the Gaussian log-density.
  double log_prob_given_mean(const Vec& mean, const Vec& raw_action) const {
    double lp = 0.0;
    for (int d = 0; d < action_dim(); ++d) {
      const double s = std::exp(log_std_[d]);
      const double z = (raw_action[d] - mean[d]) / s;
      lp += -log_std_[d] - 0.5 * std::log(2.0 * M_PI) - 0.5 * z * z;
    }
    return lp;
  }

  bool stochastic() const override { return true; }

  bool finite() const { return mlp_.finite() && log_std_.allFinite(); }

  std::shared_ptr<GaussianPolicy> clone() const {
    return std::make_shared<GaussianPolicy>(*this);
  }

 private:
  InputCodec codec_;
  Mlp mlp_;
  Vec log_std_;
};

}  // namespace eqlab

#endif  // EQLAB_POLICY_HPP_
