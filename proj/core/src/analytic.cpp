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

#include "eqlab/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace eqlab {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::runtime_error("bisect: endpoints do not straddle a root");
  }
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  if (hi - lo > tol) {
    throw std::runtime_error("bisect: did not converge");
  }
  return 0.5 * (lo + hi);
}

double seq_auction_eq(Mechanism mechanism, int n_bidders, int n_units, int stage,
                      double value) {
  if (n_bidders <= n_units || stage < 0 || stage >= n_units) {
    throw std::domain_error("seq_auction_eq: requires N > T and 0 <= t < T");
  }
  const double num = n_bidders - n_units;
  const double den = mechanism == Mechanism::kFirstPrice
                         ? n_bidders - stage
                         : n_bidders - stage - 1;
  return value * num / den;
}

double contest_we(double v) {
  const double l1 = std::log(v + 1.5);
  const double l2 = std::log(v + 1.0);
  const double v2 = v * v, v3 = v2 * v, v4 = v2 * v2;
  return 27.0 * l1 - 8.5 * v - 10.75 * std::log(2.5) + 3.5 * v2 - 2.0 * v3 -
         4.0 * l2 * (v4 - 1.0) + 4.0 * l1 * (v4 - 81.0 / 16.0) + 7.0;
}

double contest_se(double v) {
  if (v == 1.0) return 0.0;
  const double l1 = std::log(v + 1.5);
  const double l2 = std::log(v + 1.0);
  const double v2 = v * v, v3 = v2 * v, v4 = v2 * v2;
  return 17.0 * std::log(5.0) - 8.0 * l2 - 9.0 * l1 - 17.0 * std::log(2.0) -
         16.0 * v + 8.0 * v2 * l2 + 16.0 * v3 * l2 - 16.0 * v4 * l2 -
         8.0 * v2 * l1 - 16.0 * v3 * l1 + 16.0 * v4 * l1 - 135.0 / (2.0 * v + 3.0) +
         18.0 * v2 - 8.0 * v3 + 33.0;
}

double contest_eq_round1(ContestReveal reveal, double v) {
  return reveal == ContestReveal::kValuations ? contest_we(v)
                                              : contest_we(v) + contest_se(v);
}

double contest_eq_round2_valuations(double v_i, double v_j) {
  const double s = v_i + v_j;
  return v_i * v_i * v_j / (s * s);
}

double contest_eq_round2_bids(double v_i, double revealed_bid) {
  const double lo = contest_eq_round1(ContestReveal::kBids, 1.0);
  const double hi = contest_eq_round1(ContestReveal::kBids, 1.5);
  const double b = std::clamp(revealed_bid, lo, hi);
  const double v_j =
      b <= lo ? 1.0
              : b >= hi ? 1.5
                        : bisect(
                              [&](double v) {
                                return contest_eq_round1(ContestReveal::kBids, v) - b;
                              },
                              1.0, 1.5);
  return contest_eq_round2_valuations(v_i, v_j);
}

double bertrand_leader_inverse(double p1) {
  const double p2 = p1 * p1, p3 = p2 * p1;
  return (4.0 * p3 - 27.0 * p2 - 24.0 * p1 + 20.0) /
         (3.0 * p2 - 18.0 * p1 - 12.0);
}

double bertrand_leader_eq(double c1) {
  if (c1 < 0.0 || c1 > 1.0) {
    throw std::domain_error("bertrand_leader_eq: cost outside [0, 1]");
  }
  if (c1 == 1.0) return 1.0;
  // The relevant branch of the inverse maps costs [0, 1] into prices in
  // (0.5, 1], monotonically; bracket accordingly.
  return bisect([&](double p) { return bertrand_leader_inverse(p) - c1; }, 0.5,
                1.0, 1e-12, 200);
}

double bertrand_monopoly_price(double c2) { return 5.0 + 0.5 * c2; }

double bertrand_follower_eq(double c2, double p1) {
  if (p1 >= c2) return std::min(p1, bertrand_monopoly_price(c2));
  // Off path any price above the leader's works; it never wins.
  return p1 + 1.0;
}

namespace {

class SeqAuctionEqStrategy final : public Strategy {
 public:
  SeqAuctionEqStrategy(Mechanism mechanism, int n_bidders, int n_units, Box box)
      : mechanism_(mechanism), n_(n_bidders), t_units_(n_units), box_(std::move(box)) {}

  Vec mean_action(int, int stage, const Vec& signal) const override {
    Vec a(1);
    a[0] = seq_auction_eq(mechanism_, n_, t_units_, stage, signal[0]);
    return box_.clamp(std::move(a));
  }

 private:
  Mechanism mechanism_;
  int n_;
  int t_units_;
  Box box_;
};

class ContestEqStrategy final : public Strategy {
 public:
  ContestEqStrategy(ContestReveal reveal, Box box)
      : reveal_(reveal), box_(std::move(box)) {}

  Vec mean_action(int, int stage, const Vec& signal) const override {
    Vec a(1);
    if (stage == 0) {
      a[0] = contest_eq_round1(reveal_, signal[0]);
    } else {
      a[0] = reveal_ == ContestReveal::kValuations
                 ? contest_eq_round2_valuations(signal[0], signal[2])
                 : contest_eq_round2_bids(signal[0], signal[2]);
    }
    return box_.clamp(std::move(a));
  }

 private:
  ContestReveal reveal_;
  Box box_;
};

class BertrandEqStrategy final : public Strategy {
 public:
  explicit BertrandEqStrategy(Box box) : box_(std::move(box)) {}

  Vec mean_action(int player, int, const Vec& signal) const override {
    Vec a(1);
    a[0] = player == 0 ? bertrand_leader_eq(signal[0])
                       : bertrand_follower_eq(signal[0], signal[1]);
    return box_.clamp(std::move(a));
  }

 private:
  Box box_;
};

bool uniform01_private_values(const PriorModel& prior) {
  if (prior.kind != PriorKind::kIndependentUniform) return false;
  for (int i = 0; i < prior.n_agents; ++i) {
    if (prior.lows[i] != 0.0 || prior.highs[i] != 1.0) return false;
  }
  return true;
}

bool uniform_1_15_private_values(const PriorModel& prior) {
  if (prior.kind != PriorKind::kIndependentUniform) return false;
  for (int i = 0; i < prior.n_agents; ++i) {
    if (prior.lows[i] != 1.0 || prior.highs[i] != 1.5) return false;
  }
  return true;
}

}  // namespace

std::shared_ptr<const Strategy> analytic_equilibrium(const Game& game) {
  if (const auto* auction = dynamic_cast<const SequentialAuction*>(&game)) {
    const auto& s = auction->spec();
    if (!s.risk.is_identity() || !uniform01_private_values(s.prior)) return nullptr;
    return std::make_shared<SeqAuctionEqStrategy>(
        s.mechanism, s.n_bidders, s.n_stages, auction->action_space(0, 0));
  }
  if (const auto* contest = dynamic_cast<const EliminationContest*>(&game)) {
    const auto& s = contest->spec();
    if (!s.risk.is_identity() || !uniform_1_15_private_values(s.prior)) {
      return nullptr;
    }
    return std::make_shared<ContestEqStrategy>(s.reveal,
                                               contest->action_space(0, 0));
  }
  if (const auto* bertrand = dynamic_cast<const BertrandCompetition*>(&game)) {
    const auto& s = bertrand->spec();
    if (!s.risk.is_identity() || s.costs != BertrandCosts::kStandardF) {
      return nullptr;
    }
    return std::make_shared<BertrandEqStrategy>(bertrand->action_space(0, 0));
  }
  return nullptr;
}

}  // namespace eqlab
