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

#ifndef EQLAB_STRATEGY_HPP_
#define EQLAB_STRATEGY_HPP_

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "eqlab/box.hpp"

namespace eqlab {

// A per-stage map from signals to actions. Pure strategies ignore the noise
// argument; Gaussian policies add exp(log_std) * eps to the mean so that the
// caller controls every random draw.
class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual Vec mean_action(int player, int stage, const Vec& signal) const = 0;

  // Rows of `signals` are evaluated independently.
  virtual Mat mean_action_batch(int player, int stage, const Mat& signals) const {
    Mat out;
    for (int r = 0; r < signals.rows(); ++r) {
      Vec a = mean_action(player, stage, signals.row(r).transpose());
      if (r == 0) out.resize(signals.rows(), a.size());
      out.row(r) = a.transpose();
    }
    return out;
  }

  virtual Vec act_with_noise(int player, int stage, const Vec& signal,
                             const Vec& eps) const {
    (void)eps;
    return mean_action(player, stage, signal);
  }

  virtual Mat act_with_noise_batch(int player, int stage, const Mat& signals,
                                   const Mat& eps) const {
    (void)eps;
    return mean_action_batch(player, stage, signals);
  }

  // Log-density of a raw (pre-clamp) action; NaN for pure strategies.
  virtual double log_prob(int player, int stage, const Vec& signal,
                          const Vec& raw_action) const {
    (void)player; (void)stage; (void)signal; (void)raw_action;
    return std::numeric_limits<double>::quiet_NaN();
  }

  virtual Vec log_prob_batch(int player, int stage, const Mat& signals,
                             const Mat& raw_actions) const {
    Vec lp(signals.rows());
    for (int r = 0; r < signals.rows(); ++r) {
      lp[r] = log_prob(player, stage, signals.row(r).transpose(),
                       raw_actions.row(r).transpose());
    }
    return lp;
  }

  virtual bool stochastic() const { return false; }
};

// One strategy per player; shared policies alias the same object.
struct StrategyProfile {
  std::vector<std::shared_ptr<const Strategy>> players;
  std::string id;

  int size() const { return static_cast<int>(players.size()); }
  const Strategy& at(int i) const { return *players[i]; }

  static StrategyProfile shared(std::shared_ptr<const Strategy> s, int n,
                                std::string id) {
    StrategyProfile p;
    p.players.assign(n, std::move(s));
    p.id = std::move(id);
    return p;
  }

  StrategyProfile with_player(int i, std::shared_ptr<const Strategy> s,
                              std::string new_id) const {
    StrategyProfile p = *this;
    p.players[i] = std::move(s);
    p.id = std::move(new_id);
    return p;
  }
};

}  // namespace eqlab

#endif  // EQLAB_STRATEGY_HPP_
