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
// Run-directory artifacts: checkpoints, learning curves, metric reports and
// verifier results. Everything is JSON or CSV, embeds the config hash, the
// content version and the seed, and contains no wall-clock state, so a rerun
// with the same config and seed reproduces every file byte for byte.

#ifndef EQLAB_RUN_IO_HPP_
#define EQLAB_RUN_IO_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "eqlab/learners.hpp"
#include "eqlab/metrics.hpp"
#include "eqlab/verifier.hpp"

namespace eqlab {

struct RunMeta {
  std::string game;
  std::string algo;
  std::string version;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  int iteration = 0;
};

void ensure_dir(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Policies are stored as named tensors; players sharing one network share one
// stored network, and the aliasing is restored on load.
std::string checkpoint_json(const RunMeta& meta,
                            const std::vector<std::shared_ptr<GaussianPolicy>>& policies);

struct LoadedCheckpoint {
  RunMeta meta;
  std::vector<std::shared_ptr<GaussianPolicy>> policies;

  StrategyProfile profile(const std::string& id) const {
    StrategyProfile p;
    for (const auto& policy : policies) p.players.push_back(policy);
    p.id = id;
    return p;
  }
};
LoadedCheckpoint checkpoint_from_json(const std::string& text);

// "# <version> config_hash=<h> seed=<s>" comment line for CSV artifacts.
std::string meta_comment(const RunMeta& meta);

std::string curve_csv(const std::vector<CurveRow>& curve, const RunMeta& meta);

std::string metrics_json(const MetricsReport& report, const RunMeta& meta);
MetricsReport metrics_from_json(const std::string& text, RunMeta* meta_out);

std::string verifier_result_json(const VerifierResult& result, const RunMeta& meta);

}  // namespace eqlab

#endif  // EQLAB_RUN_IO_HPP_
