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
//
// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; run a single one with --criterion <id> or everything with no
// arguments. Desk-scale settings throughout: batch 2^14, a few thousand
// iterations, verifier grids of 16 points and 2^15 initial simulations.

#include <omp.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "eqlab/analytic.hpp"
#include "eqlab/config.hpp"
#include "eqlab/environments/bertrand.hpp"
#include "eqlab/environments/elimination_contest.hpp"
#include "eqlab/environments/sequential_auction.hpp"
#include "eqlab/learners.hpp"
#include "eqlab/metrics.hpp"
#include "eqlab/run_io.hpp"
#include "eqlab/verifier.hpp"
#include "test_games.hpp"
#include "verifier_oracle.hpp"

namespace eqlab {
namespace {

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
  template <typename T>
  void expect_le(T value, T bound, const std::string& what) {
    std::ostringstream os;
    os << what << " = " << value << " > " << bound;
    expect(value <= bound, os.str());
  }
};

SequentialAuction make_auction(Mechanism mech, int stages, int bidders) {
  SeqAuctionSpec spec;
  spec.mechanism = mech;
  spec.n_stages = stages;
  spec.n_bidders = bidders;
  spec.prior = PriorModel::independent_uniform(bidders, 0.0, 1.0);
  return SequentialAuction(spec);
}

// ---------------------------------------------------------------------------
// 1. Analytic oracles.
void criterion_1(Checker& c) {
  for (int k = 0; k <= 1000; ++k) {
    const double v = k / 1000.0;
    c.expect(seq_auction_eq(Mechanism::kFirstPrice, 3, 2, 0, v) == v / 3.0,
             "first-price stage-1 factor");
    c.expect(seq_auction_eq(Mechanism::kFirstPrice, 3, 2, 1, v) == v / 2.0,
             "first-price stage-2 factor");
    c.expect(seq_auction_eq(Mechanism::kSecondPrice, 3, 2, 0, v) == v / 2.0,
             "second-price stage-1 factor");
    c.expect(seq_auction_eq(Mechanism::kSecondPrice, 3, 2, 1, v) == v,
             "second-price stage-2 truthful");
    c.expect(seq_auction_eq(Mechanism::kFirstPrice, 5, 2, 1, v) == v * 3.0 / 4.0,
             "five-bidder factor");
  }
  c.expect(std::abs(contest_we(1.0)) <= 1e-9, "WE(1) = 0");
  c.expect(std::abs(contest_se(1.0)) <= 1e-9, "SE(1) = 0");
  for (int k = 0; k <= 1000; ++k) {
    const double cost = k / 1000.0;
    const double err =
        std::abs(bertrand_leader_inverse(bertrand_leader_eq(cost)) - cost);
    c.expect(err <= 1e-8, "leader inverse round trip at c=" + std::to_string(cost));
  }
  for (const double cost : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double p_star = testing::golden_section_max(
        [&](double p) { return (p - cost) * (10.0 - p); }, 0.0, 10.0, 1e-9);
    c.expect(std::abs(p_star - bertrand_monopoly_price(cost)) <= 1e-6,
             "monopoly price argmax at c=" + std::to_string(cost));
  }
}

// ---------------------------------------------------------------------------
// 2. Gradient correctness against central finite differences.
void criterion_2(Checker& c) {
  Prng rng(424242);
  double worst = 0.0;
  for (int instance = 0; instance < 100; ++instance) {
    const int sig_dim = 1 + rng.uniform_int(3);
    const int act_dim = 1 + rng.uniform_int(2);
    const InputCodec codec{2, sig_dim};
    GaussianPolicy policy(codec, act_dim, rng.uniform(-2.0, 0.0),
                          mix(31, instance));
    const int stage = rng.uniform_int(2);
    const int n = 4;
    Mat sig(n, sig_dim), raw(n, act_dim);
    Vec coeff(n);
    for (int k = 0; k < n; ++k) {
      for (int d = 0; d < sig_dim; ++d) sig(k, d) = rng.uniform();
      for (int d = 0; d < act_dim; ++d) raw(k, d) = rng.uniform(-1.0, 1.0);
      coeff[k] = rng.uniform(-1.0, 1.0);
    }
    const PolicyLogProbGrads grads =
        policy_log_prob_gradient(policy, stage, sig, raw, coeff);

    std::vector<double*> coords;
    for (Mat* w : policy.mlp().weight_params()) {
      for (int k = 0; k < w->size(); ++k) coords.push_back(w->data() + k);
    }
    for (Vec* b : policy.mlp().bias_params()) {
      for (int k = 0; k < b->size(); ++k) coords.push_back(b->data() + k);
    }
    for (int k = 0; k < policy.log_std().size(); ++k) {
      coords.push_back(policy.log_std().data() + k);
    }
    std::vector<double> flat;
    for (const Mat* m : {&grads.mlp.w1, &grads.mlp.w2, &grads.mlp.w3}) {
      for (int k = 0; k < m->size(); ++k) flat.push_back(*(m->data() + k));
    }
    for (const Vec* v : {&grads.mlp.b1, &grads.mlp.b2, &grads.mlp.b3}) {
      for (int k = 0; k < v->size(); ++k) flat.push_back(*(v->data() + k));
    }
    for (int k = 0; k < grads.log_std.size(); ++k) flat.push_back(grads.log_std[k]);

    const auto loss = [&]() {
      double total = 0.0;
      for (int k = 0; k < n; ++k) {
        total += coeff[k] * policy.log_prob(0, stage, sig.row(k).transpose(),
                                            raw.row(k).transpose());
      }
      return total;
    };
    for (int probe = 0; probe < 10; ++probe) {
      const int k = rng.uniform_int(static_cast<int>(coords.size()));
      const double eps = 1e-5;
      const double saved = *coords[k];
      *coords[k] = saved + eps;
      const double up = loss();
      *coords[k] = saved - eps;
      const double down = loss();
      *coords[k] = saved;
      const double fd = (up - down) / (2 * eps);
      const double rel = std::abs(fd - flat[k]) /
                         std::max({std::abs(fd), std::abs(flat[k]), 1e-6});
      worst = std::max(worst, rel);
    }
  }
  c.expect_le(worst, 1e-4, "max relative gradient error");
}

// ---------------------------------------------------------------------------
// 3. Verifier equals exhaustive enumeration on tiny games.
void criterion_3(Checker& c) {
  Prng rng(90210);
  int games = 0;
  for (int k = 0; k < 7; ++k) {
    for (const auto& [reveal, grid] :
         std::vector<std::pair<bool, int>>{{false, 2}, {true, 2}, {false, 3}}) {
      const testing::TinyInstance inst =
          testing::random_tiny_instance(rng, reveal, grid);
      const testing::TinyTwoStage game(inst.coeffs, inst.reveal);
      const auto opp = std::make_shared<testing::NoisyLinear>(
          inst.opp_slope, inst.opp_offset, inst.opp_sigma,
          Box::interval(0.0, 1.0));
      const auto profile = StrategyProfile::shared(opp, 2, "lin");
      const Discretization disc = build_grid(game, 0, inst.grid);
      const VerifierTree tree =
          simulate_tree(game, profile, 0, disc, inst.samples, mix(700, k, grid));
      const BackwardInductionResult bi = backward_induction(tree, disc);
      const double brute = testing::oracle_exhaustive_best(tree, disc);
      std::ostringstream what;
      what << "game " << games << ": induction " << bi.best_response_utility
           << " != enumeration " << brute;
      c.expect(bi.best_response_utility == brute, what.str());
      ++games;
    }
  }
  c.expect(games >= 20, "at least 20 randomized games");
}

// ---------------------------------------------------------------------------
// 4. Verifier on the known 2-stage first-price equilibrium.
void criterion_4(Checker& c) {
  const auto game = make_auction(Mechanism::kFirstPrice, 2, 3);
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 3, "eq");
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const VerifierResult res = verify(game, profile, 0, 16, 1 << 15, seed);
    mean += res.loss_ver;
  }
  mean /= 5.0;
  std::ostringstream what;
  what << "mean loss_ver over 5 seeds = " << mean;
  c.expect(mean >= -0.02 && mean <= 0.02, what.str());
}

// ---------------------------------------------------------------------------
// 5. Convergence trends in the sample count and the resolution.
void trend_check(Checker& c, const std::vector<double>& values, bool increasing,
                 const std::string& label) {
  int inversions = 0;
  double worst = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double step = increasing ? values[k] - values[k - 1]
                                   : values[k - 1] - values[k];
    if (step < 0.0) {
      ++inversions;
      worst = std::max(worst, -step);
    }
  }
  std::ostringstream what;
  what << label << " trend violated (" << inversions << " inversions, worst "
       << worst << ")";
  c.expect(inversions <= 1 && worst <= 0.003, what.str());
}

void criterion_5(Checker& c) {
  const auto game = make_auction(Mechanism::kFirstPrice, 2, 3);
  const auto eq = analytic_equilibrium(game);
  const auto profile = StrategyProfile::shared(eq, 3, "eq");

  std::vector<double> by_samples;
  for (const int k : {10, 13, 16, 19}) {
    by_samples.push_back(verify(game, profile, 0, 16, 1LL << k, 11).loss_ver);
  }
  trend_check(c, by_samples, /*increasing=*/false, "sample-count");
  c.expect(by_samples.back() <= by_samples.front() + 0.003,
           "overestimation must shrink with more samples");

  std::vector<double> by_grid;
  for (const int d : {4, 8, 16, 32}) {
    by_grid.push_back(verify(game, profile, 0, d, 1 << 16, 13).loss_ver);
  }
  trend_check(c, by_grid, /*increasing=*/true, "grid-resolution");
  c.expect(by_grid.front() < -0.02, "coarse grids must lose utility");
  c.expect(by_grid.back() >= -0.02 && by_grid.back() <= 0.02,
           "finest grid must approach zero from below");
}

// ---------------------------------------------------------------------------
// 6. Learning reproduction at desk scale.
LearnerConfig desk_config(Algo algo, double lr, double init_log_std, int iters,
                          int eval_every = 0) {
  LearnerConfig cfg;
  cfg.algo = algo;
  cfg.learning_rate = lr;
  cfg.init_log_std = init_log_std;
  cfg.batch_size = 1 << 14;
  cfg.iterations = iters;
  cfg.eval_every = eval_every > 0 ? eval_every : iters + 1;
  cfg.eval_batch = 1 << 16;
  return cfg;
}

void criterion_6a(Checker& c) {
  const auto game = make_auction(Mechanism::kFirstPrice, 1, 2);
  const auto eq = analytic_equilibrium(game);
  const auto eq_profile = StrategyProfile::shared(eq, 2, "eq");
  const LearnerConfig cfg = desk_config(Algo::kReinforce, 1e-4, -3.0, 2000);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const TrainResult run = self_play_train(game, cfg, Sharing::kShared, seed);
    c.expect(!run.nan_abort, "run must stay finite");
    const double loss =
        loss_in_equilibrium(game, *run.policies[0], 0, eq_profile, 1 << 18,
                            mix(99, seed));
    const double l2 =
        l2_distance(game, *run.policies[0], 0, eq_profile, 0, 1 << 16, seed);
    std::ostringstream what;
    what << "seed " << seed << ": loss_equ = " << loss << ", l2 = " << l2;
    c.expect(loss <= 0.003 && l2 <= 0.03, what.str());
  }
}

void criterion_6b(Checker& c) {
  const auto game = make_auction(Mechanism::kFirstPrice, 2, 3);
  const auto eq = analytic_equilibrium(game);
  const auto eq_profile = StrategyProfile::shared(eq, 3, "eq");
  const LearnerConfig cfg = desk_config(Algo::kPpo, 3e-4, -3.0, 600);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const TrainResult run = self_play_train(game, cfg, Sharing::kShared, seed);
    c.expect(!run.nan_abort, "run must stay finite");
    const double loss =
        loss_in_equilibrium(game, *run.policies[0], 0, eq_profile, 1 << 18,
                            mix(98, seed));
    std::ostringstream what;
    what << "seed " << seed << ": loss_equ = " << loss;
    c.expect(loss <= 0.003, what.str());
  }
}

void criterion_6c(Checker& c) {
  ContestSpec spec;
  spec.prior = PriorModel::independent_uniform(4, 1.0, 1.5);
  spec.reveal = ContestReveal::kValuations;
  const EliminationContest game(spec);
  const auto eq = analytic_equilibrium(game);
  const auto eq_profile = StrategyProfile::shared(eq, 4, "eq");
  const LearnerConfig cfg = desk_config(Algo::kReinforce, 1e-4, -3.0, 2000);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const TrainResult run = self_play_train(game, cfg, Sharing::kShared, seed);
    c.expect(!run.nan_abort, "run must stay finite");
    const double loss =
        loss_in_equilibrium(game, *run.policies[0], 0, eq_profile, 1 << 18,
                            mix(97, seed));
    const double l2_r1 =
        l2_distance(game, *run.policies[0], 0, eq_profile, 0, 1 << 16, seed);
    const double l2_r2 =
        l2_distance(game, *run.policies[0], 0, eq_profile, 1, 1 << 16, seed);
    std::ostringstream what;
    what << "seed " << seed << ": loss_equ = " << loss << ", l2 = (" << l2_r1
         << ", " << l2_r2 << ")";
    c.expect(loss <= 0.004 && l2_r1 <= 0.03 && l2_r2 <= 0.03, what.str());
  }
}

void criterion_6d(Checker& c) {
  const BertrandCompetition game(BertrandSpec{});
  const auto eq = analytic_equilibrium(game);
  const auto eq_profile = StrategyProfile::shared(eq, 2, "eq");
  LearnerConfig cfg = desk_config(Algo::kReinforce, 3e-4, -1.0, 3000);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const TrainResult run = self_play_train(game, cfg, Sharing::kIndependent, seed);
    c.expect(!run.nan_abort, "run must stay finite");
    const double leader_loss =
        loss_in_equilibrium(game, *run.policies[0], 0, eq_profile, 1 << 18,
                            mix(96, seed));
    const double leader_l2 =
        l2_distance(game, *run.policies[0], 0, eq_profile, 0, 1 << 16, seed);
    const VerifierResult follower =
        verify(game, run.profile, 1, 16, 1 << 15, seed);
    std::ostringstream what;
    what << "seed " << seed << ": leader loss_equ = " << leader_loss
         << ", leader l2 = " << leader_l2
         << ", follower loss_ver = " << follower.loss_ver;
    c.expect(leader_loss <= 0.01 && leader_l2 <= 0.03 &&
                 follower.loss_ver <= 0.01,
             what.str());
  }
}

// ---------------------------------------------------------------------------
// 7. Asymmetric equilibrium rediscovery in the second-price auction.
void criterion_7(Checker& c) {
  const auto game = make_auction(Mechanism::kSecondPrice, 2, 3);
  const auto eq = analytic_equilibrium(game);
  const auto eq_profile = StrategyProfile::shared(eq, 3, "eq");
  const LearnerConfig cfg = desk_config(Algo::kReinforce, 1e-4, -3.0, 2500);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const TrainResult run =
        self_play_train(game, cfg, Sharing::kIndependent, seed);
    c.expect(!run.nan_abort, "run must stay finite");
    const Vec utilities =
        expected_utilities(game, run.profile, 1 << 18, mix(95, seed));
    for (int agent = 0; agent < 3; ++agent) {
      const VerifierResult res = verify(game, run.profile, agent, 16, 1 << 15, seed);
      const double l2_stage2 = l2_distance(game, *run.policies[agent], agent,
                                           eq_profile, 1, 1 << 16, seed);
      std::ostringstream what;
      what << "seed " << seed << " agent " << agent
           << ": loss_ver = " << res.loss_ver << ", stage-2 l2 = " << l2_stage2
           << ", utility = " << utilities[agent];
      c.expect(res.loss_ver <= 0.01, "verifier: " + what.str());
      c.expect(l2_stage2 <= 0.05, "truthful stage 2: " + what.str());
      c.expect(std::abs(utilities[agent] - 0.247) <= 0.02, "utility: " + what.str());
    }
  }
}

// ---------------------------------------------------------------------------
// 8. Byte-identical artifacts, independent of the worker count.
void criterion_8(Checker& c) {
  ExperimentConfig cfg;
  cfg.game.family = "sequential_auction";
  cfg.game.mechanism = "first_price";
  cfg.game.n_bidders = 2;
  cfg.game.n_stages = 1;
  cfg.learner = desk_config(Algo::kReinforce, 1e-4, -2.0, 40, 20);
  cfg.learner.batch_size = 512;
  cfg.learner.eval_batch = 2048;

  const auto game = build_game(cfg.game);
  const auto eq = analytic_equilibrium(*game);
  const auto eq_profile = StrategyProfile::shared(eq, 2, "eq");

  const auto run_once = [&]() {
    const TrainResult result =
        self_play_train(*game, cfg.learner, Sharing::kShared, 3);
    RunMeta meta;
    meta.game = cfg.game.family;
    meta.algo = "reinforce";
    meta.version = artifact_version();
    meta.config_hash = config_hash(cfg);
    meta.seed = 3;
    meta.iteration = cfg.learner.iterations;
    const MetricsReport report =
        evaluate_profile(*game, result.profile, &eq_profile, 4096, 5);
    const VerifierResult ver = verify(*game, result.profile, 0, 8, 1 << 10, 3);
    return curve_csv(result.curve, meta) + checkpoint_json(meta, result.policies) +
           metrics_json(report, meta) + verifier_result_json(ver, meta);
  };

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const std::string one = run_once();
  omp_set_num_threads(2);
  const std::string two = run_once();
  omp_set_num_threads(saved);
  c.expect(one == two, "artifacts differ across worker counts");
  c.expect(run_once() == two, "artifacts differ across reruns");
}

}  // namespace

struct Criterion {
  std::string id;
  std::string name;
  std::function<void(Checker&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"1", "analytic oracle suite", criterion_1},
      {"2", "gradient correctness vs finite differences", criterion_2},
      {"3", "verifier equals exhaustive enumeration", criterion_3},
      {"4", "verifier on the known 2-stage equilibrium", criterion_4},
      {"5", "verifier convergence trends", criterion_5},
      {"6a", "reinforce on the 1-stage first-price auction", criterion_6a},
      {"6b", "ppo on the 2-stage first-price auction", criterion_6b},
      {"6c", "reinforce on the elimination contest", criterion_6c},
      {"6d", "learning the Stackelberg-Bertrand competition", criterion_6d},
      {"7", "asymmetric second-price equilibrium rediscovery", criterion_7},
      {"8", "byte-identical deterministic artifacts", criterion_8},
  };
  return all;
}

int run_criteria(const std::string& only) {
  int failures = 0;
  bool matched = false;
  for (const Criterion& crit : criteria()) {
    if (!only.empty() && crit.id != only) continue;
    matched = true;
    Checker checker;
    try {
      crit.run(checker);
    } catch (const std::exception& e) {
      checker.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << "[criterion " << crit.id << "] " << crit.name << ": "
              << (checker.ok ? "PASS" : "FAIL");
    if (!checker.ok) {
      std::cout << " (" << checker.detail.str() << ")";
      ++failures;
    }
    std::cout << std::endl;
  }
  if (!matched) {
    std::cerr << "unknown criterion: " << only << std::endl;
    return 2;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace eqlab

int main(int argc, char** argv) {
  std::string only;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--criterion") == 0 && k + 1 < argc) {
      only = argv[++k];
    } else if (std::strcmp(argv[k], "--list") == 0) {
      for (const auto& crit : eqlab::criteria()) {
        std::cout << crit.id << "  " << crit.name << "\n";
      }
      return 0;
    }
  }
  return eqlab::run_criteria(only);
}
