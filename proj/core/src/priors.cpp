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

#include "eqlab/priors.hpp"

#include <cmath>
#include <stdexcept>

namespace eqlab {

PriorModel PriorModel::independent_uniform(int n_agents, double low,
                                           double high) {
  PriorModel m;
  m.kind = PriorKind::kIndependentUniform;
  m.n_agents = n_agents;
  m.lows.assign(n_agents, low);
  m.highs.assign(n_agents, high);
  m.validate();
  return m;
}

PriorModel PriorModel::independent_uniform(std::vector<double> lows,
                                           std::vector<double> highs) {
  PriorModel m;
  m.kind = PriorKind::kIndependentUniform;
  m.n_agents = static_cast<int>(lows.size());
  m.lows = std::move(lows);
  m.highs = std::move(highs);
  m.validate();
  return m;
}

PriorModel PriorModel::mineral_rights(int n_agents) {
  PriorModel m;
  m.kind = PriorKind::kMineralRights;
  m.n_agents = n_agents;
  m.validate();
  return m;
}

PriorModel PriorModel::affiliated(int n_agents) {
  PriorModel m;
  m.kind = PriorKind::kAffiliated;
  m.n_agents = n_agents;
  m.validate();
  return m;
}

void PriorModel::validate() const {
  if (n_agents < 1) throw std::invalid_argument("prior: n_agents must be >= 1");
  if (kind == PriorKind::kIndependentUniform) {
    if (static_cast<int>(lows.size()) != n_agents ||
        static_cast<int>(highs.size()) != n_agents) {
      throw std::invalid_argument("prior: per-agent bounds size mismatch");
    }
    for (int i = 0; i < n_agents; ++i) {
      if (!(lows[i] < highs[i])) {
        throw std::invalid_argument("prior: requires low < high per agent");
      }
    }
  }
}

Box PriorModel::observation_box(int agent) const {
  switch (kind) {
    case PriorKind::kIndependentUniform:
      return Box::interval(lows[agent], highs[agent]);
    case PriorKind::kMineralRights:
      // x_i ~ U[0, 2v] with v ~ U[0, 1].
      return Box::interval(0.0, 2.0);
    case PriorKind::kAffiliated:
      // x_i = z_i + s with z_i, s ~ U[0, 1].
      return Box::interval(0.0, 2.0);
  }
  throw std::logic_error("unreachable");
}

double PriorModel::observation_upper_bound() const {
  double hi = 0.0;
  for (int i = 0; i < n_agents; ++i) {
    hi = std::max(hi, observation_box(i).high(0));
  }
  return hi;
}

TypeDraw PriorModel::sample(Prng& rng) const {
  TypeDraw draw;
  draw.values.resize(n_agents);
  draw.observations.resize(n_agents);
  switch (kind) {
    case PriorKind::kIndependentUniform: {
      for (int i = 0; i < n_agents; ++i) {
        const double x = rng.uniform(lows[i], highs[i]);
        draw.values[i] = x;
        draw.observations[i] = x;
      }
      break;
    }
    case PriorKind::kMineralRights: {
      const double v = rng.uniform();
      for (int i = 0; i < n_agents; ++i) {
        draw.values[i] = v;
        // v = 0 pins every observation to 0 exactly.
        draw.observations[i] = (v == 0.0) ? 0.0 : rng.uniform(0.0, 2.0 * v);
      }
      break;
    }
    case PriorKind::kAffiliated: {
      const double s = rng.uniform();
      double sum = 0.0;
      for (int i = 0; i < n_agents; ++i) {
        const double x = rng.uniform() + s;
        draw.observations[i] = x;
        sum += x;
      }
      const double v = sum / n_agents;
      draw.values.setConstant(v);
      break;
    }
  }
  return draw;
}

TypeBatch sample_types(const PriorModel& prior, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_types: n must be >= 1");
  TypeBatch batch;
  batch.values.resize(n, prior.n_agents);
  batch.observations.resize(n, prior.n_agents);
  for (int k = 0; k < n; ++k) {
    Prng rng = stream_rng(seed, RngStream::kTypes, static_cast<std::uint64_t>(k));
    const TypeDraw draw = prior.sample(rng);
    batch.values.row(k) = draw.values.transpose();
    batch.observations.row(k) = draw.observations.transpose();
  }
  return batch;
}

RiskTransform::RiskTransform(double rho) : rho_(rho) {
  if (rho < 0.0 || !std::isfinite(rho)) {
    throw std::invalid_argument("risk: rho must be finite and >= 0");
  }
}

double RiskTransform::apply(double payoff) const {
  if (rho_ == 0.0) return payoff;
  // h(x) = (1 - exp(-rho x)) / rho = -expm1(-rho x) / rho.
  // exp overflows past ~709 at double precision; saturate the exponent so the
  // transform stays finite for arbitrarily negative payoffs.
  const double e = -rho_ * payoff;
  constexpr double kExpSaturation = 700.0;
  return -std::expm1(std::min(e, kExpSaturation)) / rho_;
}

std::string to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::kIndependentUniform: return "independent_uniform";
    case PriorKind::kMineralRights: return "mineral_rights";
    case PriorKind::kAffiliated: return "affiliated";
  }
  return "?";
}

PriorKind prior_kind_from_string(const std::string& s) {
  if (s == "independent_uniform") return PriorKind::kIndependentUniform;
  if (s == "mineral_rights") return PriorKind::kMineralRights;
  if (s == "affiliated") return PriorKind::kAffiliated;
  throw std::invalid_argument("unknown prior kind: " + s);
}

}  // namespace eqlab
