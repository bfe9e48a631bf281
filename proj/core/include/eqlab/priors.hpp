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

#ifndef EQLAB_PRIORS_HPP_
#define EQLAB_PRIORS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "eqlab/box.hpp"
#include "eqlab/rng.hpp"

namespace eqlab {

enum class PriorKind { kIndependentUniform, kMineralRights, kAffiliated };

// One joint draw of the agents' types. `values` enter the utility function,
// `observations` are what agents get to see. The two coincide for private
// values; under the common-value priors every agent shares the same value but
// observes only a noisy estimate of it.
struct TypeDraw {
  Vec values;
  Vec observations;
};

struct PriorModel {
  PriorKind kind = PriorKind::kIndependentUniform;
  int n_agents = 0;
  // Per-agent bounds, used by the independent-uniform prior only.
  std::vector<double> lows;
  std::vector<double> highs;

  static PriorModel independent_uniform(int n_agents, double low, double high);
  static PriorModel independent_uniform(std::vector<double> lows,
                                        std::vector<double> highs);
  static PriorModel mineral_rights(int n_agents);
  static PriorModel affiliated(int n_agents);

  void validate() const;

  // Support of agent i's observation.
  Box observation_box(int agent) const;
  // Largest observation any agent can receive.
  double observation_upper_bound() const;

  TypeDraw sample(Prng& rng) const;
};

// Batched sampling; sample k uses the rng derived from (seed, k) so batches
// partition across workers without changing the draw.
struct TypeBatch {
  Mat values;        // n x agents
  Mat observations;  // n x agents
};
TypeBatch sample_types(const PriorModel& prior, int n, std::uint64_t seed);

// Constant absolute risk aversion, h_rho(x) = (1 - exp(-rho x)) / rho.
// rho = 0 is the identity (taken as an exact branch, not a limit).
class RiskTransform {
 public:
  explicit RiskTransform(double rho = 0.0);

  double rho() const { return rho_; }
  bool is_identity() const { return rho_ == 0.0; }

  double apply(double payoff) const;

 private:
  double rho_;
};

std::string to_string(PriorKind kind);
PriorKind prior_kind_from_string(const std::string& s);

}  // namespace eqlab

#endif  // EQLAB_PRIORS_HPP_
