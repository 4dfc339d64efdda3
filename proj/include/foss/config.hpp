#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "foss/aam.hpp"
#include "foss/agent.hpp"
#include "foss/executor.hpp"
#include "foss/reward.hpp"
#include "foss/simloop.hpp"

namespace foss {

// Flat key=value run configuration. Every field defaults to the declared
// value; unknown keys are rejected.
struct RunConfig {
  // schema / workload
  std::uint64_t schema_seed = 7;
  int n_tables = 8;
  std::int64_t row_min = 1000;
  std::int64_t row_max = 1000000;
  std::uint64_t workload_seed = 11;
  int n_queries = 25;
  int tables_min = 3;
  int tables_max = 6;
  double sigma_est = 1.0;
  double holdout_fraction = 0.2;

  CostModel cost;
  ExecutorConfig exec;  // exec.cost kept in sync with `cost` after parsing
  DiscretizationSpec disc;
  RewardConfig reward;
  AamConfig aam;
  LearnerConfig learner;
  LoopConfig loop;

  std::string out_dir = "out";
};

inline RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, std::function<void(const std::string&)>> setters;

  auto set_double = [](double& field) {
    return [&field](const std::string& v) { field = std::stod(v); };
  };
  auto set_int = [](int& field) {
    return [&field](const std::string& v) { field = std::stoi(v); };
  };
  auto set_i64 = [](std::int64_t& field) {
    return [&field](const std::string& v) { field = std::stoll(v); };
  };
  auto set_u64 = [](std::uint64_t& field) {
    return [&field](const std::string& v) { field = std::stoull(v); };
  };

  setters["schema_seed"] = set_u64(cfg.schema_seed);
  setters["n_tables"] = set_int(cfg.n_tables);
  setters["row_min"] = set_i64(cfg.row_min);
  setters["row_max"] = set_i64(cfg.row_max);
  setters["workload_seed"] = set_u64(cfg.workload_seed);
  setters["n_queries"] = set_int(cfg.n_queries);
  setters["tables_min"] = set_int(cfg.tables_min);
  setters["tables_max"] = set_int(cfg.tables_max);
  setters["sigma_est"] = set_double(cfg.sigma_est);
  setters["holdout_fraction"] = set_double(cfg.holdout_fraction);

  setters["cost_hash"] = set_double(cfg.cost.c_hash);
  setters["cost_merge"] = set_double(cfg.cost.c_merge);
  setters["cost_nl"] = set_double(cfg.cost.c_nl);
  setters["cost_scan"] = set_double(cfg.cost.c_scan);
  setters["sigma_latency"] = set_double(cfg.exec.sigma_latency);

  setters["disc_points"] = [&cfg](const std::string& v) {
    cfg.disc.points.clear();
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.disc.points.push_back(std::stod(tok));
  };

  setters["reward_eta"] = set_double(cfg.reward.eta);
  setters["reward_eb_max"] = set_double(cfg.reward.eb_max);
  setters["reward_gamma"] = set_double(cfg.reward.gamma_pen);
  setters["maxsteps"] = set_int(cfg.reward.maxsteps);

  setters["aam_label_smoothing"] = set_double(cfg.aam.label_smoothing);
  setters["aam_gamma_plus"] = set_double(cfg.aam.gamma_plus);
  setters["aam_gamma_minus"] = set_double(cfg.aam.gamma_minus);
  setters["aam_learning_rate"] = set_double(cfg.aam.learning_rate);
  setters["aam_epochs"] = set_int(cfg.aam.epochs);
  setters["aam_batch_size"] = set_int(cfg.aam.batch_size);
  setters["aam_seed"] = set_u64(cfg.aam.seed);
  setters["aam_embed_dim"] = set_int(cfg.aam.embed_dim);
  setters["aam_state_dim"] = set_int(cfg.aam.state_dim);
  setters["aam_pair_dim"] = set_int(cfg.aam.pair_dim);
  setters["aam_pos_dim"] = set_int(cfg.aam.pos_dim);
  setters["aam_pairs_per_record"] = set_int(cfg.aam.pairs_per_record);

  setters["ppo_clip_ratio"] = set_double(cfg.learner.clip_ratio);
  setters["ppo_discount"] = set_double(cfg.learner.discount);
  setters["ppo_gae_lambda"] = set_double(cfg.learner.gae_lambda);
  setters["ppo_epochs"] = set_int(cfg.learner.epochs_per_update);
  setters["ppo_minibatch"] = set_int(cfg.learner.minibatch_size);
  setters["ppo_entropy"] = set_double(cfg.learner.entropy_coef);
  setters["ppo_value_coef"] = set_double(cfg.learner.value_coef);
  setters["ppo_learning_rate"] = set_double(cfg.learner.learning_rate);
  setters["ppo_seed"] = set_u64(cfg.learner.seed);

  setters["loop_exploration_batch"] = set_int(cfg.loop.exploration_batch);
  setters["loop_exploration_episodes"] = set_int(cfg.loop.exploration_episodes_per_query);
  setters["loop_episodes_per_update"] = set_int(cfg.loop.episodes_per_update);
  setters["loop_training_rounds"] = set_int(cfg.loop.training_rounds);
  setters["loop_validation_top_k"] = set_int(cfg.loop.validation_top_k);
  setters["loop_iterations"] = set_int(cfg.loop.total_iterations);
  setters["loop_aam_epochs"] = set_int(cfg.loop.aam_epochs_per_phase);
  setters["loop_seed"] = set_u64(cfg.loop.seed);

  setters["out_dir"] = [&cfg](const std::string& v) { cfg.out_dir = v; };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    it->second(value);
  }
  cfg.exec.cost = cfg.cost;
  cfg.aam.classes = cfg.disc.levels() + 1;
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace foss
