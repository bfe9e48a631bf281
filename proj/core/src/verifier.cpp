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

#include "eqlab/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eqlab/rng.hpp"
#include "eqlab/rollout.hpp"

namespace eqlab {

namespace {

int pow_int(int base, int exp) {
  int r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

}  // namespace

Vec Discretization::StageGrid::action(int index) const {
  Vec a(static_cast<int>(action_grid.size()));
  for (int d = static_cast<int>(action_grid.size()) - 1; d >= 0; --d) {
    const int n = static_cast<int>(action_grid[d].size());
    a[d] = action_grid[d][index % n];
    index /= n;
  }
  return a;
}

std::int64_t Discretization::StageGrid::cell_of(const Vec& signal,
                                                const std::vector<int>& own_trail,
                                                int grid_points) const {
  std::int64_t id = 0;
  for (std::size_t k = 0; k < ext_dims.size(); ++k) {
    const double lo = ext_lo[k], hi = ext_hi[k];
    const double x = signal[ext_dims[k]];
    int bin = 0;
    if (hi > lo) {
      bin = static_cast<int>(std::floor((x - lo) / (hi - lo) * grid_points));
      bin = std::clamp(bin, 0, grid_points - 1);
    }
    id = id * grid_points + bin;
  }
  if (own_trail.size() != own_stages.size()) {
    throw std::logic_error("verifier: own-action trail does not match the grid");
  }
  for (int idx : own_trail) id = id * action_points + idx;
  return id;
}

Discretization build_grid(const Game& game, int player, int grid_points) {
  if (grid_points < 2) {
    throw std::invalid_argument("build_grid: needs at least 2 grid points");
  }
  Discretization disc;
  disc.player = player;
  disc.grid_points = grid_points;
  disc.stages.resize(game.num_stages());
  for (int t = 0; t < game.num_stages(); ++t) {
    auto& g = disc.stages[t];
    const Box& abox = game.action_space(player, t);
    for (int d = 0; d < abox.dim(); ++d) {
      Vec lattice(grid_points);
      for (int k = 0; k < grid_points; ++k) {
        lattice[k] = abox.low(d) +
                     (abox.high(d) - abox.low(d)) * k / (grid_points - 1);
      }
      g.action_grid.push_back(std::move(lattice));
    }
    g.action_points = pow_int(grid_points, abox.dim());

    const Box& sbox = game.signal_space(player, t);
    g.ext_dims = game.external_signal_dims(player, t);
    for (int e : g.ext_dims) {
      g.ext_lo.push_back(sbox.low(e));
      g.ext_hi.push_back(sbox.high(e));
    }
    g.own_stages = game.own_action_stages(player, t);

    std::int64_t cells = 1;
    for (std::size_t k = 0; k < g.ext_dims.size(); ++k) cells *= grid_points;
    for (std::size_t k = 0; k < g.own_stages.size(); ++k) {
      cells *= pow_int(grid_points, game.action_dim(player, g.own_stages[k]));
    }
    g.n_cells = cells;
  }
  return disc;
}

std::int64_t VerifierTree::visit_total(int stage) const {
  std::int64_t total = 0;
  for (std::int64_t v : levels[stage].visits) total += v;
  return total;
}

namespace {

struct BuildNode {
  GameState state;
  std::int64_t sample;  // global sample index
  int ordinal;          // per-sample node ordinal within its level
  std::vector<int> trail;
};

struct BlockTree {
  std::vector<std::vector<std::uint32_t>> cell;       // [stage]
  std::vector<std::vector<std::int64_t>> child_base;  // block-local offsets
  std::vector<std::vector<std::uint16_t>> n_children;
  std::vector<double> leaf_util;
};

// Bytes for the stored tree if no branch is ever pruned, checked against the
// budget before anything is allocated. Block results and the merged tree
// coexist briefly, hence the factor two.
std::int64_t estimate_tree_bytes(const Discretization& disc,
                                 std::int64_t initial_sims) {
  const int stages = static_cast<int>(disc.stages.size());
  std::int64_t nodes = initial_sims;
  std::int64_t bytes = 0;
  for (int t = 0; t < stages; ++t) {
    bytes += nodes * (4 + 8 + 2);
    bytes += disc.stages[t].n_cells * 8;
    bytes += disc.stages[t].n_cells * disc.stages[t].action_points * 3 * 8;
    nodes *= disc.stages[t].action_points;
  }
  bytes += nodes * 8;
  return 2 * bytes;
}

BlockTree build_block(const Game& game, const StrategyProfile& opponents,
                      int player, const Discretization& disc,
                      std::int64_t first, int count, std::uint64_t seed,
                      std::vector<std::vector<std::int64_t>>& visits) {
  const int stages = game.num_stages();
  const int players = game.num_players();
  BlockTree block;
  block.cell.resize(stages);
  block.child_base.resize(stages);
  block.n_children.resize(stages);

  std::vector<BuildNode> frontier;
  frontier.reserve(count);
  for (int k = 0; k < count; ++k) {
    Prng rng = stream_rng(seed, RngStream::kTypes,
                          static_cast<std::uint64_t>(first + k));
    BuildNode node;
    node.state = game.init(game.draw_types(rng));
    node.sample = first + k;
    node.ordinal = 0;
    frontier.push_back(std::move(node));
  }

  for (int t = 0; t < stages; ++t) {
    const auto& grid = disc.stages[t];
    const int n_nodes = static_cast<int>(frontier.size());

    // Opponent actions: one fresh draw per tree node, batched per opponent.
    std::vector<Mat> opp_actions(players);
    for (int j = 0; j < players; ++j) {
      if (j == player) continue;
      std::vector<int> acting;
      for (int k = 0; k < n_nodes; ++k) {
        if (game.acts(frontier[k].state, j, t)) acting.push_back(k);
      }
      const int adim = game.action_dim(j, t);
      opp_actions[j] = Mat::Zero(n_nodes, adim);
      if (acting.empty()) continue;
      Mat sig(static_cast<int>(acting.size()), game.signal_dim(j, t));
      Mat eps(static_cast<int>(acting.size()), adim);
      for (std::size_t k = 0; k < acting.size(); ++k) {
        const BuildNode& node = frontier[acting[k]];
        sig.row(static_cast<int>(k)) = game.signal(node.state, j, t).transpose();
        Prng rng = stream_rng(
            seed, RngStream::kVerifierOpponents, node.sample,
            mix(static_cast<std::uint64_t>(t), node.ordinal, j));
        for (int d = 0; d < adim; ++d) {
          eps(static_cast<int>(k), d) = rng.normal();
        }
      }
      const Mat raw = opponents.at(j).act_with_noise_batch(j, t, sig, eps);
      const Box& box = game.action_space(j, t);
      for (std::size_t k = 0; k < acting.size(); ++k) {
        for (int d = 0; d < adim; ++d) {
          opp_actions[j](acting[k], d) =
              std::clamp(raw(static_cast<int>(k), d), box.low(d), box.high(d));
        }
      }
    }

    std::vector<BuildNode> next;
    std::vector<Vec> stage_actions(players);
    std::int64_t child_cursor = 0;
    std::vector<int> next_ordinal(count, 0);
    for (int k = 0; k < n_nodes; ++k) {
      BuildNode& node = frontier[k];
      const bool is_acting = game.acts(node.state, player, t);
      std::uint32_t cell = VerifierTree::kNoCell;
      int branches = 1;
      if (is_acting) {
        const Vec sig = game.signal(node.state, player, t);
        cell = static_cast<std::uint32_t>(
            grid.cell_of(sig, node.trail, disc.grid_points));
        visits[t][cell] += 1;
        branches = grid.action_points;
      }
      block.cell[t].push_back(cell);
      block.n_children[t].push_back(static_cast<std::uint16_t>(branches));
      block.child_base[t].push_back(child_cursor);
      child_cursor += branches;

      Prng nature_rng =
          stream_rng(seed, RngStream::kNature, node.sample,
                     mix(static_cast<std::uint64_t>(t), node.ordinal));
      const Vec nature = game.draw_nature(t, nature_rng);
      for (int j = 0; j < players; ++j) {
        stage_actions[j] = opp_actions[j].row(k).transpose();
      }

      for (int a = 0; a < branches; ++a) {
        BuildNode child;
        child.state = node.state;
        child.sample = node.sample;
        child.ordinal = next_ordinal[node.sample - first]++;
        child.trail = node.trail;
        if (is_acting) {
          stage_actions[player] = grid.action(a);
          child.trail.push_back(a);
        } else {
          stage_actions[player] = Vec::Zero(game.action_dim(player, t));
        }
        game.advance(child.state, stage_actions, nature);
        if (t == stages - 1) {
          block.leaf_util.push_back(game.utilities(child.state)[player]);
        } else {
          next.push_back(std::move(child));
        }
      }
    }
    frontier = std::move(next);
  }
  return block;
}

std::int64_t resolve_leaf(const VerifierTree& tree,
                          const std::vector<std::vector<std::uint16_t>>& beta,
                          int stage, std::int64_t node, int action) {
  const int last = static_cast<int>(tree.levels.size()) - 1;
  int t = stage;
  std::int64_t cur = node;
  int a = action;
  for (;;) {
    const auto& level = tree.levels[t];
    const std::int64_t child =
        level.child_base[cur] +
        (level.cell[cur] == VerifierTree::kNoCell ? 0 : a);
    if (t == last) return child;
    ++t;
    cur = child;
    const std::uint32_t cell = tree.levels[t].cell[cur];
    a = cell == VerifierTree::kNoCell ? 0 : beta[t][cell];
  }
}

}  // namespace

VerifierTree simulate_tree(const Game& game, const StrategyProfile& opponents,
                           int player, const Discretization& disc,
                           std::int64_t initial_sims, std::uint64_t seed,
                           const VerifierOptions& opts) {
  if (initial_sims < 1) {
    throw std::invalid_argument("simulate_tree: initial_sims must be >= 1");
  }
  const std::int64_t need = estimate_tree_bytes(disc, initial_sims);
  if (need > opts.memory_budget_bytes) {
    throw std::runtime_error(
        "simulate_tree: estimated " + std::to_string(need) +
        " bytes exceed the budget of " + std::to_string(opts.memory_budget_bytes) +
        " bytes; lower initial_sims or the grid resolution");
  }

  const int stages = game.num_stages();
  VerifierTree tree;
  tree.n_samples = initial_sims;
  tree.levels.resize(stages);
  for (int t = 0; t < stages; ++t) {
    tree.levels[t].visits.assign(disc.stages[t].n_cells, 0);
  }

  const int block_size = std::max(1, opts.sample_block);
  const std::int64_t n_blocks = (initial_sims + block_size - 1) / block_size;
  std::vector<BlockTree> blocks(n_blocks);
  std::vector<std::vector<std::vector<std::int64_t>>> block_visits(n_blocks);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    const std::int64_t first = b * block_size;
    const int count = static_cast<int>(
        std::min<std::int64_t>(block_size, initial_sims - first));
    auto& visits = block_visits[b];
    visits.resize(stages);
    for (int t = 0; t < stages; ++t) {
      visits[t].assign(disc.stages[t].n_cells, 0);
    }
    blocks[b] = build_block(game, opponents, player, disc, first, count, seed,
                            visits);
  }

  // Splice blocks in index order. Child offsets are fixed up against the
  // sizes accumulated so far, so the merged tree does not depend on how the
  // blocks were scheduled.
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    BlockTree& block = blocks[b];
    std::vector<std::int64_t> target_base(stages);
    for (int t = 0; t < stages; ++t) {
      target_base[t] = t + 1 < stages
                           ? static_cast<std::int64_t>(tree.levels[t + 1].cell.size())
                           : static_cast<std::int64_t>(tree.leaf_util.size());
    }
    for (int t = 0; t < stages; ++t) {
      auto& level = tree.levels[t];
      level.cell.insert(level.cell.end(), block.cell[t].begin(),
                        block.cell[t].end());
      level.n_children.insert(level.n_children.end(), block.n_children[t].begin(),
                              block.n_children[t].end());
      for (std::int64_t base : block.child_base[t]) {
        level.child_base.push_back(base + target_base[t]);
      }
      for (std::int64_t c = 0; c < disc.stages[t].n_cells; ++c) {
        level.visits[c] += block_visits[b][t][c];
      }
    }
    tree.leaf_util.insert(tree.leaf_util.end(), block.leaf_util.begin(),
                          block.leaf_util.end());
    blocks[b] = BlockTree{};
    block_visits[b].clear();
  }
  return tree;
}

BackwardInductionResult backward_induction(const VerifierTree& tree,
                                           const Discretization& disc) {
  const int stages = static_cast<int>(tree.levels.size());
  BackwardInductionResult out;
  out.strategy.action_index.resize(stages);

  int first_acting = -1;
  for (int t = 0; t < stages; ++t) {
    if (tree.visit_total(t) > 0) {
      first_acting = t;
      break;
    }
  }
  if (first_acting < 0) {
    throw std::runtime_error("backward_induction: the player never acts");
  }
  out.first_acting_stage = first_acting;

  std::vector<double> first_stage_values;
  for (int t = stages - 1; t >= 0; --t) {
    const auto& grid = disc.stages[t];
    const auto& level = tree.levels[t];
    const int ap = grid.action_points;
    std::vector<KahanSum> acc(static_cast<std::size_t>(grid.n_cells) * ap);

    for (std::size_t node = 0; node < level.cell.size(); ++node) {
      const std::uint32_t cell = level.cell[node];
      if (cell == VerifierTree::kNoCell) continue;
      for (int a = 0; a < ap; ++a) {
        const std::int64_t leaf = resolve_leaf(
            tree, out.strategy.action_index, t, static_cast<std::int64_t>(node), a);
        acc[static_cast<std::size_t>(cell) * ap + a].add(tree.leaf_util[leaf]);
      }
    }

    auto& beta_t = out.strategy.action_index[t];
    beta_t.assign(grid.n_cells, 0);
    std::vector<double> value(grid.n_cells, 0.0);
    for (std::int64_t c = 0; c < grid.n_cells; ++c) {
      const std::int64_t m = level.visits[c];
      if (m == 0) continue;  // value zero, action index 0
      int best = 0;
      double best_value = acc[static_cast<std::size_t>(c) * ap].value() / m;
      for (int a = 1; a < ap; ++a) {
        const double v = acc[static_cast<std::size_t>(c) * ap + a].value() / m;
        if (v > best_value) {
          best_value = v;
          best = a;
        }
      }
      beta_t[c] = static_cast<std::uint16_t>(best);
      value[c] = best_value;
    }
    if (t == first_acting) first_stage_values = std::move(value);
  }

  // Visitation-weighted average over the first acting stage's cells.
  const auto& first_level = tree.levels[first_acting];
  const std::int64_t total = tree.visit_total(first_acting);
  KahanSum estimate;
  for (std::int64_t c = 0; c < disc.stages[first_acting].n_cells; ++c) {
    if (first_level.visits[c] == 0) continue;
    estimate.add(static_cast<double>(first_level.visits[c]) / total *
                 first_stage_values[c]);
  }
  out.best_response_utility = estimate.value();
  return out;
}

VerifierResult verify(const Game& game, const StrategyProfile& profile,
                      int player, int grid_points, std::int64_t initial_sims,
                      std::uint64_t seed, const VerifierOptions& opts) {
  const Discretization disc = build_grid(game, player, grid_points);
  const VerifierTree tree =
      simulate_tree(game, profile, player, disc, initial_sims, seed, opts);
  const BackwardInductionResult bi = backward_induction(tree, disc);

  VerifierResult res;
  res.player = player;
  res.grid_points = grid_points;
  res.initial_sims = initial_sims;
  res.seed = seed;
  res.best_response_utility = bi.best_response_utility;
  res.actual_utility = expected_utilities(
      game, profile, initial_sims,
      mix(seed, static_cast<std::uint64_t>(RngStream::kVerifierBaseline)))[player];
  res.loss_ver = res.best_response_utility - res.actual_utility;
  res.strategy = bi.strategy;
  res.leaf_count = static_cast<std::int64_t>(tree.leaf_util.size());
  for (int t = 0; t < game.num_stages(); ++t) {
    res.cells_per_stage.push_back(disc.stages[t].n_cells);
    std::int64_t visited = 0;
    for (std::int64_t v : tree.levels[t].visits) visited += v > 0 ? 1 : 0;
    res.visited_cells_per_stage.push_back(visited);
  }
  return res;
}

StepStrategyPlayer::StepStrategyPlayer(const Game& game, Discretization disc,
                                       StepStrategy steps)
    : game_(&game), disc_(std::move(disc)), steps_(std::move(steps)) {}

Vec StepStrategyPlayer::mean_action(int player, int stage, const Vec& signal) const {
  const auto& grid = disc_.stages[stage];
  // Own past actions sit on the complement of the external dims, ordered by
  // stage; recover their indices by nearest-lattice lookup.
  std::vector<int> own_dims;
  for (int d = 0; d < signal.size(); ++d) {
    if (std::find(grid.ext_dims.begin(), grid.ext_dims.end(), d) ==
        grid.ext_dims.end()) {
      own_dims.push_back(d);
    }
  }
  std::vector<int> trail;
  std::size_t consumed = 0;
  for (int r : grid.own_stages) {
    const auto& past = disc_.stages[r];
    int index = 0;
    for (std::size_t d = 0; d < past.action_grid.size(); ++d) {
      const Vec& lattice = past.action_grid[d];
      int best = 0;
      for (int k = 1; k < lattice.size(); ++k) {
        if (std::abs(lattice[k] - signal[own_dims[consumed]]) <
            std::abs(lattice[best] - signal[own_dims[consumed]])) {
          best = k;
        }
      }
      index = index * static_cast<int>(lattice.size()) + best;
      ++consumed;
    }
    trail.push_back(index);
  }
  const std::int64_t cell = grid.cell_of(signal, trail, disc_.grid_points);
  return grid.action(steps_.action_index[stage][cell]);
}

}  // namespace eqlab
