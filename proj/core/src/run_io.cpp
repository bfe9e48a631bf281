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

#include "eqlab/run_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace eqlab {

namespace {

using nlohmann::json;

json mat_to_json(const Mat& m) {
  std::vector<double> data;
  data.reserve(m.size());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Mat mat_from_json(const json& j) {
  Mat m(j.at("rows").get<int>(), j.at("cols").get<int>());
  const auto data = j.at("data").get<std::vector<double>>();
  int k = 0;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) m(r, c) = data[k++];
  }
  return m;
}

json vec_to_json(const Vec& v) {
  std::vector<double> data(v.data(), v.data() + v.size());
  return json(data);
}

Vec vec_from_json(const json& j) {
  const auto data = j.get<std::vector<double>>();
  Vec v(static_cast<int>(data.size()));
  for (std::size_t k = 0; k < data.size(); ++k) v[k] = data[k];
  return v;
}

// JSON has no NaN literal; absent metrics are stored as null.
json finite_or_null(double x) {
  if (std::isfinite(x)) return json(x);
  return json(nullptr);
}

double null_to_nan(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

json meta_to_json(const RunMeta& meta) {
  return json{{"game", meta.game},         {"algo", meta.algo},
              {"version", meta.version},   {"config_hash", meta.config_hash},
              {"seed", meta.seed},         {"iteration", meta.iteration}};
}

RunMeta meta_from_json(const json& j) {
  RunMeta meta;
  meta.game = j.value("game", "");
  meta.algo = j.value("algo", "");
  meta.version = j.value("version", "");
  meta.config_hash = j.value("config_hash", std::uint64_t{0});
  meta.seed = j.value("seed", std::uint64_t{0});
  meta.iteration = j.value("iteration", 0);
  return meta;
}

std::string format_cell(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace

void ensure_dir(const std::string& path) {
  std::filesystem::create_directories(path);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string checkpoint_json(
    const RunMeta& meta,
    const std::vector<std::shared_ptr<GaussianPolicy>>& policies) {
  json root;
  root["meta"] = meta_to_json(meta);

  std::vector<const GaussianPolicy*> unique;
  std::vector<int> index_of_player;
  for (const auto& p : policies) {
    int idx = -1;
    for (std::size_t k = 0; k < unique.size(); ++k) {
      if (unique[k] == p.get()) idx = static_cast<int>(k);
    }
    if (idx < 0) {
      idx = static_cast<int>(unique.size());
      unique.push_back(p.get());
    }
    index_of_player.push_back(idx);
  }
  root["player_network"] = index_of_player;

  json nets = json::array();
  for (const GaussianPolicy* p : unique) {
    json net;
    net["n_stages"] = p->codec().n_stages;
    net["signal_dim"] = p->codec().signal_dim;
    net["action_dim"] = p->action_dim();
    net["log_std"] = vec_to_json(p->log_std());
    const auto weights = p->mlp().weight_params();
    const auto biases = p->mlp().bias_params();
    net["w1"] = mat_to_json(*weights[0]);
    net["w2"] = mat_to_json(*weights[1]);
    net["w3"] = mat_to_json(*weights[2]);
    net["b1"] = vec_to_json(*biases[0]);
    net["b2"] = vec_to_json(*biases[1]);
    net["b3"] = vec_to_json(*biases[2]);
    nets.push_back(std::move(net));
  }
  root["networks"] = std::move(nets);
  return root.dump(2);
}

LoadedCheckpoint checkpoint_from_json(const std::string& text) {
  const json root = json::parse(text);
  LoadedCheckpoint out;
  out.meta = meta_from_json(root.at("meta"));

  std::vector<std::shared_ptr<GaussianPolicy>> unique;
  for (const json& net : root.at("networks")) {
    const InputCodec codec{net.at("n_stages").get<int>(),
                           net.at("signal_dim").get<int>()};
    auto policy = std::make_shared<GaussianPolicy>(
        codec, net.at("action_dim").get<int>(), 0.0, /*init_key=*/0);
    policy->log_std() = vec_from_json(net.at("log_std"));
    auto weights = policy->mlp().weight_params();
    auto biases = policy->mlp().bias_params();
    *weights[0] = mat_from_json(net.at("w1"));
    *weights[1] = mat_from_json(net.at("w2"));
    *weights[2] = mat_from_json(net.at("w3"));
    *biases[0] = vec_from_json(net.at("b1"));
    *biases[1] = vec_from_json(net.at("b2"));
    *biases[2] = vec_from_json(net.at("b3"));
    unique.push_back(std::move(policy));
  }
  for (const int idx : root.at("player_network").get<std::vector<int>>()) {
    out.policies.push_back(unique.at(idx));
  }
  return out;
}

std::string meta_comment(const RunMeta& meta) {
  std::ostringstream out;
  out << "# " << meta.version << " config_hash=" << meta.config_hash
      << " seed=" << meta.seed << "\n";
  return out.str();
}

std::string curve_csv(const std::vector<CurveRow>& curve, const RunMeta& meta) {
  std::ostringstream out;
  out << meta_comment(meta);
  if (curve.empty()) return out.str() + "iteration\n";
  const int players = static_cast<int>(curve.front().utility.size());
  out << "iteration";
  for (int p = 0; p < players; ++p) out << ",utility_p" << p;
  for (int p = 0; p < players; ++p) out << ",loss_equ_p" << p;
  for (int p = 0; p < players; ++p) out << ",l2_avg_p" << p;
  out << "\n";
  for (const CurveRow& row : curve) {
    out << row.iteration;
    for (int p = 0; p < players; ++p) out << "," << format_cell(row.utility[p]);
    for (int p = 0; p < players; ++p) out << "," << format_cell(row.loss_equ[p]);
    for (int p = 0; p < players; ++p) out << "," << format_cell(row.l2_avg[p]);
    out << "\n";
  }
  return out.str();
}

std::string metrics_json(const MetricsReport& report, const RunMeta& meta) {
  json root;
  root["meta"] = meta_to_json(meta);
  root["game"] = report.game;
  root["algo"] = report.algo;
  root["config_hash"] = report.config_hash;
  root["seed"] = report.seed;
  root["eval_samples"] = report.eval_samples;
  root["iterations"] = report.iterations;

  json util = json::array(), lequ = json::array(), lver = json::array(),
       l2avg = json::array();
  for (int p = 0; p < report.util_hat.size(); ++p) {
    util.push_back(finite_or_null(report.util_hat[p]));
    lequ.push_back(finite_or_null(report.loss_equ[p]));
    lver.push_back(finite_or_null(report.loss_ver[p]));
    l2avg.push_back(finite_or_null(report.l2_avg[p]));
  }
  root["util_hat"] = util;
  root["loss_equ"] = lequ;
  root["loss_ver"] = lver;
  root["l2_avg"] = l2avg;

  json l2 = json::array();
  for (int p = 0; p < report.l2_stage.rows(); ++p) {
    json row = json::array();
    for (int t = 0; t < report.l2_stage.cols(); ++t) {
      row.push_back(finite_or_null(report.l2_stage(p, t)));
    }
    l2.push_back(std::move(row));
  }
  root["l2_stage"] = std::move(l2);
  return root.dump(2);
}

MetricsReport metrics_from_json(const std::string& text, RunMeta* meta_out) {
  const json root = json::parse(text);
  MetricsReport report;
  if (meta_out != nullptr) *meta_out = meta_from_json(root.at("meta"));
  report.game = root.value("game", "");
  report.algo = root.value("algo", "");
  report.config_hash = root.value("config_hash", std::uint64_t{0});
  report.seed = root.value("seed", std::uint64_t{0});
  report.eval_samples = root.value("eval_samples", std::int64_t{0});
  report.iterations = root.value("iterations", 0);

  const auto load_vec = [&root](const char* key) {
    const json& arr = root.at(key);
    Vec v(static_cast<int>(arr.size()));
    for (std::size_t k = 0; k < arr.size(); ++k) v[k] = null_to_nan(arr[k]);
    return v;
  };
  report.util_hat = load_vec("util_hat");
  report.loss_equ = load_vec("loss_equ");
  report.loss_ver = load_vec("loss_ver");
  report.l2_avg = load_vec("l2_avg");

  const json& l2 = root.at("l2_stage");
  const int players = static_cast<int>(l2.size());
  const int stages = players > 0 ? static_cast<int>(l2[0].size()) : 0;
  report.l2_stage.resize(players, stages);
  for (int p = 0; p < players; ++p) {
    for (int t = 0; t < stages; ++t) {
      report.l2_stage(p, t) = null_to_nan(l2[p][t]);
    }
  }
  return report;
}

std::string verifier_result_json(const VerifierResult& result, const RunMeta& meta) {
  json root;
  root["meta"] = meta_to_json(meta);
  root["player"] = result.player;
  root["grid_points"] = result.grid_points;
  root["initial_sims"] = result.initial_sims;
  root["seed"] = result.seed;
  root["best_response_utility"] = result.best_response_utility;
  root["actual_utility"] = result.actual_utility;
  root["loss_ver"] = result.loss_ver;
  root["leaf_count"] = result.leaf_count;
  root["cells_per_stage"] = result.cells_per_stage;
  root["visited_cells_per_stage"] = result.visited_cells_per_stage;
  json steps = json::array();
  for (const auto& stage : result.strategy.action_index) {
    steps.push_back(stage);
  }
  root["best_step_strategy"] = std::move(steps);
  return root.dump(2);
}

}  // namespace eqlab
