#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "foss/actionspace.hpp"
#include "foss/encoder.hpp"
#include "foss/env.hpp"
#include "foss/nn.hpp"

namespace foss {

struct PolicyParams {
  EncoderParams enc;
  Linear policy;  // num_actions x state_dim
  Linear value;   // 1 x state_dim

  static PolicyParams make(int feature_width, int num_actions, int embed_dim,
                           int state_dim, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0xA6E7ULL));
    PolicyParams p;
    p.enc = EncoderParams::make(feature_width, embed_dim, state_dim, rng);
    p.policy.resize(num_actions, state_dim);
    p.value.resize(1, state_dim);
    p.policy.init(rng, 0.01);
    p.value.init(rng, 0.1);
    return p;
  }

  void zero_grad() {
    enc.zero_grad();
    policy.zero_grad();
    value.zero_grad();
  }
};

struct Experience {
  StateFeatures state;
  int action = 0;  // 1-based ActionId
  double reward = 0.0;
  StateFeatures next_state;
  bool done = false;
  double behavior_logp = 0.0;
  std::vector<char> mask;
};

struct LearnerConfig {
  double clip_ratio = 0.2;
  double discount = 1.0;   // episodes are short; reward is episodic
  double gae_lambda = 0.95;
  int epochs_per_update = 4;
  int minibatch_size = 256;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double learning_rate = 3e-4;
  std::uint64_t seed = 1;
};

enum class ActMode { Sample, Greedy };

inline Eigen::VectorXd masked_log_softmax(const Eigen::VectorXd& logits,
                                          const std::vector<char>& mask) {
  if (static_cast<int>(mask.size()) != logits.size())
    throw std::invalid_argument("masked_log_softmax: mask size mismatch");
  double mx = -std::numeric_limits<double>::infinity();
  int permitted = 0;
  for (int i = 0; i < logits.size(); ++i)
    if (mask[i]) {
      mx = std::max(mx, logits(i));
      ++permitted;
    }
  if (permitted == 0)
    throw std::invalid_argument("masked_log_softmax: all actions masked");
  double sum = 0.0;
  for (int i = 0; i < logits.size(); ++i)
    if (mask[i]) sum += std::exp(logits(i) - mx);
  const double logz = mx + std::log(sum);
  Eigen::VectorXd out(logits.size());
  for (int i = 0; i < logits.size(); ++i)
    out(i) = mask[i] ? logits(i) - logz : -std::numeric_limits<double>::infinity();
  return out;
}

// Returns (1-based ActionId, behavior log-probability).
inline std::pair<int, double> act(const StateFeatures& state,
                                  const std::vector<char>& mask,
                                  const PolicyParams& params, ActMode mode,
                                  Rng& rng) {
  const Eigen::VectorXd sv = encode_state(state, params.enc);
  const Eigen::VectorXd logits = params.policy.forward(sv);
  const Eigen::VectorXd logp = masked_log_softmax(logits, mask);
  int choice = -1;
  if (mode == ActMode::Greedy) {
    for (int i = 0; i < logp.size(); ++i)
      if (mask[i] && (choice < 0 || logp(i) > logp(choice))) choice = i;
  } else {
    double u = rng.next_double();
    double acc = 0.0;
    for (int i = 0; i < logp.size(); ++i) {
      if (!mask[i]) continue;
      acc += std::exp(logp(i));
      choice = i;
      if (u < acc) break;
    }
  }
  return {choice + 1, logp(choice)};
}

struct RolloutResult {
  std::vector<Experience> experiences;
};

// One episode following the planner training process: LimitSpace restricts
// the step after a Swap to adjacent method overrides.
inline RolloutResult rollout(const SchemaSpec& schema, const JoinGraphQuery& query,
                             RolloutEnv& env, const PolicyParams& params,
                             int maxsteps, Rng& rng, ActMode mode = ActMode::Sample) {
  RolloutResult out;
  auto init = env.reset(query.query_id);
  IncompletePlan icp = init.icp0;
  CompletePlan cp = init.original;
  std::optional<Action> prev;
  for (int t = 1; t <= maxsteps; ++t) {
    const auto mask = legal_mask(icp, schema, query, prev);
    const StateFeatures state = featurize(schema, query, cp, t - 1, maxsteps);
    const auto [action_id, logp] = act(state, mask, params, mode, rng);
    const Action action = decode_action(action_id, schema.num_tables());
    icp = apply_action(icp, action);
    auto [cp_next, reward] = env.step(icp, t);
    Experience e;
    e.state = state;
    e.action = action_id;
    e.reward = reward;
    e.next_state = featurize(schema, query, cp_next, t, maxsteps);
    e.done = (t == maxsteps);
    e.behavior_logp = logp;
    e.mask = mask;
    out.experiences.push_back(std::move(e));
    cp = cp_next;
    prev = action;
  }
  return out;
}

struct UpdateStats {
  double mean_return = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
};

// PPO-style clipped surrogate with GAE baseline, from first principles.
inline UpdateStats update_agent(const std::vector<Experience>& batch,
                                PolicyParams& params, const LearnerConfig& cfg) {
  if (batch.empty()) throw std::invalid_argument("update_agent: empty batch");
  const int n = static_cast<int>(batch.size());

  // value estimates under current parameters (frozen for the whole update)
  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd sv = encode_state(batch[i].state, params.enc);
    values[i] = params.value.forward(sv)(0);
  }

  // GAE over contiguous episodes (done terminates; terminal value 0)
  std::vector<double> advantages(n), returns(n);
  double gae = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    const double next_v = (batch[i].done || i + 1 >= n) ? 0.0 : values[i + 1];
    if (batch[i].done) gae = 0.0;
    const double delta = batch[i].reward + cfg.discount * next_v - values[i];
    gae = delta + cfg.discount * cfg.gae_lambda * gae;
    advantages[i] = gae;
    returns[i] = gae + values[i];
  }
  double mean = 0.0;
  for (double a : advantages) mean += a;
  mean /= n;
  double var = 0.0;
  for (double a : advantages) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / n);
  if (sd > 1e-12)
    for (double& a : advantages) a = (a - mean) / sd;

  Adam opt(cfg.learning_rate);
  opt.register_layer(&params.enc.embed);
  opt.register_layer(&params.enc.hidden);
  opt.register_layer(&params.policy);
  opt.register_layer(&params.value);

  Rng rng(mix_seed(cfg.seed, 0x9917ULL));
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;

  UpdateStats stats;
  for (int i = 0; i < n; ++i) stats.mean_return += returns[i];
  stats.mean_return /= n;

  for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
    for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.next_int(0, i)]);
    for (int start = 0; start < n; start += cfg.minibatch_size) {
      const int end = std::min(n, start + cfg.minibatch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      params.zero_grad();
      double pg_loss = 0.0, v_loss = 0.0;
      for (int k = start; k < end; ++k) {
        const Experience& e = batch[idx[k]];
        const double adv = advantages[idx[k]];
        EncoderCache cache;
        const Eigen::VectorXd sv = encode_state(e.state, params.enc, &cache);
        const Eigen::VectorXd logits = params.policy.forward(sv);
        const Eigen::VectorXd logp = masked_log_softmax(logits, e.mask);
        const double new_logp = logp(e.action - 1);
        const double ratio = std::exp(new_logp - e.behavior_logp);
        const double clipped =
            std::clamp(ratio, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio);
        pg_loss += -std::min(ratio * adv, clipped * adv);

        // probabilities (masked entries are exactly zero)
        Eigen::VectorXd pi = Eigen::VectorXd::Zero(logits.size());
        for (int a = 0; a < logits.size(); ++a)
          if (e.mask[a]) pi(a) = std::exp(logp(a));

        Eigen::VectorXd dlogits = Eigen::VectorXd::Zero(logits.size());
        const bool unclipped =
            (adv >= 0.0) ? (ratio <= 1.0 + cfg.clip_ratio)
                         : (ratio >= 1.0 - cfg.clip_ratio);
        if (unclipped) {
          // d(-ratio*adv)/dlogits = -adv*ratio*(onehot - pi)
          for (int a = 0; a < logits.size(); ++a) {
            if (!e.mask[a]) continue;
            const double onehot = (a == e.action - 1) ? 1.0 : 0.0;
            dlogits(a) += -adv * ratio * (onehot - pi(a));
          }
        }
        if (cfg.entropy_coef > 0.0) {
          double entropy = 0.0;
          for (int a = 0; a < logits.size(); ++a)
            if (e.mask[a] && pi(a) > 0.0) entropy -= pi(a) * logp(a);
          for (int a = 0; a < logits.size(); ++a)
            if (e.mask[a] && pi(a) > 0.0)
              dlogits(a) += cfg.entropy_coef * pi(a) * (logp(a) + entropy);
        }

        Eigen::VectorXd dsv = params.policy.backward(sv, dlogits * scale);

        const double v = params.value.forward(sv)(0);
        const double verr = v - returns[idx[k]];
        v_loss += 0.5 * verr * verr;
        Eigen::VectorXd dv(1);
        dv(0) = cfg.value_coef * verr * scale;
        dsv += params.value.backward(sv, dv);

        encode_backward(dsv, params.enc, cache);

        if (!std::isfinite(pg_loss) || !std::isfinite(v_loss))
          throw std::runtime_error("update_agent: loss diverged (non-finite)");
      }
      opt.step();
      stats.policy_loss = pg_loss * scale;
      stats.value_loss = v_loss * scale;
    }
  }
  return stats;
}

inline nlohmann::json policy_params_to_json(const PolicyParams& p) {
  nlohmann::json j;
  j["version"] = 1;
  j["embed"] = linear_to_json(p.enc.embed);
  j["hidden"] = linear_to_json(p.enc.hidden);
  j["policy"] = linear_to_json(p.policy);
  j["value"] = linear_to_json(p.value);
  return j;
}

inline PolicyParams policy_params_from_json(const nlohmann::json& j) {
  PolicyParams p;
  p.enc.embed = linear_from_json(j.at("embed"));
  p.enc.hidden = linear_from_json(j.at("hidden"));
  p.policy = linear_from_json(j.at("policy"));
  p.value = linear_from_json(j.at("value"));
  return p;
}

}  // namespace foss
