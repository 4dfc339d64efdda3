#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "foss/encoder.hpp"
#include "foss/executor.hpp"
#include "foss/reward.hpp"

namespace foss {

struct AamConfig {
  int classes = 3;            // K = l + 1
  double label_smoothing = 0.1;
  double gamma_plus = 1.0;
  double gamma_minus = 4.0;   // must exceed gamma_plus
  double learning_rate = 1e-3;
  int epochs = 80;
  int batch_size = 64;
  std::uint64_t seed = 1;
  int embed_dim = 32;
  int state_dim = 64;
  int pair_dim = 32;
  int pos_dim = 8;
  int pairs_per_record = 4;   // extra random same-query pairs per new record
};

struct AamParams {
  EncoderParams enc;
  Eigen::VectorXd pos_left, pos_right;
  Eigen::VectorXd gpos_left, gpos_right;
  Linear fc1;  // pair_dim x (state_dim + pos_dim), tanh
  Linear fc2;  // classes x pair_dim

  static AamParams make(int feature_width, const AamConfig& cfg) {
    Rng rng(mix_seed(cfg.seed, 0xAA11ULL));
    AamParams p;
    p.enc = EncoderParams::make(feature_width, cfg.embed_dim, cfg.state_dim, rng);
    p.pos_left = Eigen::VectorXd::Zero(cfg.pos_dim);
    p.pos_right = Eigen::VectorXd::Zero(cfg.pos_dim);
    for (int i = 0; i < cfg.pos_dim; ++i) {
      p.pos_left(i) = 0.1 * rng.next_normal();
      p.pos_right(i) = 0.1 * rng.next_normal();
    }
    p.gpos_left = Eigen::VectorXd::Zero(cfg.pos_dim);
    p.gpos_right = Eigen::VectorXd::Zero(cfg.pos_dim);
    p.fc1.resize(cfg.pair_dim, cfg.state_dim + cfg.pos_dim);
    p.fc2.resize(cfg.classes, cfg.pair_dim);
    p.fc1.init(rng, 1.0 / std::sqrt(static_cast<double>(cfg.state_dim + cfg.pos_dim)));
    p.fc2.init(rng, 1.0 / std::sqrt(static_cast<double>(cfg.pair_dim)));
    return p;
  }

  void zero_grad() {
    enc.zero_grad();
    fc1.zero_grad();
    fc2.zero_grad();
    gpos_left.setZero();
    gpos_right.setZero();
  }
};

struct PairCache {
  EncoderCache enc_left, enc_right;
  Eigen::VectorXd in_left, in_right;    // [statevec; pos]
  Eigen::VectorXd act_left, act_right;  // tanh(fc1 ...)
  Eigen::VectorXd diff;
  Eigen::VectorXd logits;
};

inline Eigen::VectorXd score_pair_logits(const StateFeatures& left,
                                         const StateFeatures& right,
                                         const AamParams& p,
                                         PairCache* cache = nullptr) {
  PairCache local;
  PairCache& c = cache ? *cache : local;
  const Eigen::VectorXd svl = encode_state(left, p.enc, &c.enc_left);
  const Eigen::VectorXd svr = encode_state(right, p.enc, &c.enc_right);
  c.in_left.resize(svl.size() + p.pos_left.size());
  c.in_left << svl, p.pos_left;
  c.in_right.resize(svr.size() + p.pos_right.size());
  c.in_right << svr, p.pos_right;
  c.act_left = p.fc1.forward(c.in_left).array().tanh().matrix();
  c.act_right = p.fc1.forward(c.in_right).array().tanh().matrix();
  c.diff = c.act_left - c.act_right;
  c.logits = p.fc2.forward(c.diff);
  return c.logits;
}

inline Eigen::VectorXd score_pair(const StateFeatures& left, const StateFeatures& right,
                                  const AamParams& p) {
  return softmax(score_pair_logits(left, right, p));
}

inline int advantage_class(const StateFeatures& left, const StateFeatures& right,
                           const AamParams& p) {
  const Eigen::VectorXd logits = score_pair_logits(left, right, p);
  int best = 0;
  for (int k = 1; k < logits.size(); ++k)
    if (logits(k) > logits(best)) best = k;
  return best;
}

inline void score_pair_backward(const Eigen::VectorXd& dlogits, AamParams& p,
                                const PairCache& c) {
  const Eigen::VectorXd ddiff = p.fc2.backward(c.diff, dlogits);
  const Eigen::VectorXd dpre_l =
      (ddiff.array() * (1.0 - c.act_left.array().square())).matrix();
  const Eigen::VectorXd dpre_r =
      (-ddiff.array() * (1.0 - c.act_right.array().square())).matrix();
  const Eigen::VectorXd din_l = p.fc1.backward(c.in_left, dpre_l);
  const Eigen::VectorXd din_r = p.fc1.backward(c.in_right, dpre_r);
  const int sd = p.enc.state_dim();
  encode_backward(din_l.head(sd), p.enc, c.enc_left);
  encode_backward(din_r.head(sd), p.enc, c.enc_right);
  p.gpos_left += din_l.tail(p.pos_left.size());
  p.gpos_right += din_r.tail(p.pos_right.size());
}

namespace detail {
constexpr double kProbClamp = 1e-12;
inline double clampp(double p) {
  return std::min(std::max(p, kProbClamp), 1.0 - kProbClamp);
}
}  // namespace detail

// Focal-style asymmetric loss with label smoothing over K classes.
inline double asymmetric_loss(const Eigen::VectorXd& probs, int label,
                              const AamConfig& cfg) {
  if (label < 0 || label >= cfg.classes)
    throw std::invalid_argument("asymmetric_loss: bad label");
  const double eps = cfg.label_smoothing;
  double loss = 0.0;
  for (int j = 0; j < cfg.classes; ++j) {
    const double p = detail::clampp(probs(j));
    const double h = (j == label) ? 1.0 - eps : eps / (cfg.classes - 1);
    if (j == label) {
      loss -= h * std::pow(1.0 - p, cfg.gamma_plus) * std::log(p);
    } else {
      loss -= h * std::pow(p, cfg.gamma_minus) * std::log(1.0 - p);
    }
  }
  return loss;
}

// Loss and analytic gradient with respect to the logits.
inline double asymmetric_loss_grad(const Eigen::VectorXd& logits, int label,
                                   const AamConfig& cfg, Eigen::VectorXd& dlogits) {
  const Eigen::VectorXd probs = softmax(logits);
  const double eps = cfg.label_smoothing;
  Eigen::VectorXd dLdp = Eigen::VectorXd::Zero(cfg.classes);
  double loss = 0.0;
  for (int j = 0; j < cfg.classes; ++j) {
    const double p = detail::clampp(probs(j));
    const double h = (j == label) ? 1.0 - eps : eps / (cfg.classes - 1);
    if (j == label) {
      const double g = cfg.gamma_plus;
      loss -= h * std::pow(1.0 - p, g) * std::log(p);
      double d = std::pow(1.0 - p, g) / p;
      if (g > 0.0) d -= g * std::pow(1.0 - p, g - 1.0) * std::log(p);
      dLdp(j) = -h * d;
    } else {
      const double g = cfg.gamma_minus;
      loss -= h * std::pow(p, g) * std::log(1.0 - p);
      double d = -std::pow(p, g) / (1.0 - p);
      if (g > 0.0) d += g * std::pow(p, g - 1.0) * std::log(1.0 - p);
      dLdp(j) = -h * d;
    }
  }
  // chain through softmax
  dlogits = Eigen::VectorXd::Zero(cfg.classes);
  for (int k = 0; k < cfg.classes; ++k) {
    double acc = 0.0;
    for (int j = 0; j < cfg.classes; ++j) {
      const double jac = probs(j) * ((j == k ? 1.0 : 0.0) - probs(k));
      acc += dLdp(j) * jac;
    }
    dlogits(k) = acc;
  }
  return loss;
}

struct TrainingPair {
  StateFeatures left, right;
  int label = 0;
  double weight = 1.0;
};

// Build oriented training pairs from one query's execution records:
// anchor pairs against the original and best-so-far plans plus a few random
// same-query pairs; both-censored pairs are dropped.
inline std::vector<TrainingPair> make_pairs(
    const SchemaSpec& schema, const JoinGraphQuery& query,
    const std::vector<ExecutionRecord>& records, const CostModel& model,
    const DiscretizationSpec& spec, int maxsteps, const AamConfig& cfg, Rng& rng) {
  std::vector<TrainingPair> out;
  const int n = static_cast<int>(records.size());
  if (n < 2) return out;

  int original = 0;
  for (int i = 0; i < n; ++i)
    if (records[i].step_index == 0) { original = i; break; }
  int best = original;
  for (int i = 0; i < n; ++i)
    if (!records[i].censored && records[i].latency < records[best].latency) best = i;

  std::set<std::pair<int, int>> chosen;
  auto add = [&](int a, int b) {
    if (a == b) return;
    chosen.insert({std::min(a, b), std::max(a, b)});
  };
  for (int i = 0; i < n; ++i) {
    add(original, i);
    add(best, i);
    for (int k = 0; k < cfg.pairs_per_record; ++k)
      add(i, static_cast<int>(rng.next_int(0, n - 1)));
  }

  auto features_of = [&](const ExecutionRecord& r) {
    const CompletePlan cp = complete(schema, query, r.icp, model);
    return featurize(schema, query, cp, std::min(r.step_index, maxsteps), maxsteps);
  };

  for (const auto& [a, b] : chosen) {
    const auto& ra = records[a];
    const auto& rb = records[b];
    if (ra.censored && rb.censored) continue;  // no usable label
    const StateFeatures fa = features_of(ra);
    const StateFeatures fb = features_of(rb);
    TrainingPair fwd;
    fwd.left = fa;
    fwd.right = fb;
    fwd.label = spec.discretize(adv_initial(ra.latency, rb.latency));
    out.push_back(fwd);
    TrainingPair rev;
    rev.left = fb;
    rev.right = fa;
    rev.label = spec.discretize(adv_initial(rb.latency, ra.latency));
    out.push_back(std::move(rev));
  }
  return out;
}

struct TrainStats {
  double final_loss = 0.0;
  double accuracy = 0.0;
  int epochs_run = 0;
};

inline TrainStats train_aam(const std::vector<TrainingPair>& pairs,
                            const AamConfig& cfg, AamParams& params) {
  if (pairs.empty()) throw std::invalid_argument("train_aam: empty pair set");
  Adam opt(cfg.learning_rate);
  opt.register_layer(&params.enc.embed);
  opt.register_layer(&params.enc.hidden);
  opt.register_layer(&params.fc1);
  opt.register_layer(&params.fc2);
  opt.register_vector(&params.pos_left, &params.gpos_left);
  opt.register_vector(&params.pos_right, &params.gpos_right);

  Rng rng(mix_seed(cfg.seed, 0x7A17ULL));
  std::vector<int> idx(pairs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);

  TrainStats stats;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int i = static_cast<int>(idx.size()) - 1; i > 0; --i)
      std::swap(idx[i], idx[rng.next_int(0, i)]);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < idx.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      params.zero_grad();
      const std::size_t end =
          std::min(idx.size(), start + static_cast<std::size_t>(cfg.batch_size));
      for (std::size_t k = start; k < end; ++k) {
        const TrainingPair& tp = pairs[idx[k]];
        PairCache cache;
        const Eigen::VectorXd logits = score_pair_logits(tp.left, tp.right, params, &cache);
        Eigen::VectorXd dlogits;
        const double loss = asymmetric_loss_grad(logits, tp.label, cfg, dlogits);
        if (!std::isfinite(loss))
          throw std::runtime_error("train_aam: loss diverged (non-finite)");
        epoch_loss += tp.weight * loss;
        score_pair_backward(tp.weight * dlogits / static_cast<double>(end - start),
                            params, cache);
      }
      opt.step();
    }
    stats.final_loss = epoch_loss / static_cast<double>(pairs.size());
    stats.epochs_run = epoch + 1;
  }

  int correct = 0;
  for (const auto& tp : pairs) {
    const Eigen::VectorXd logits = score_pair_logits(tp.left, tp.right, params);
    int best = 0;
    for (int k = 1; k < logits.size(); ++k)
      if (logits(k) > logits(best)) best = k;
    if (best == tp.label) ++correct;
  }
  stats.accuracy = static_cast<double>(correct) / static_cast<double>(pairs.size());
  return stats;
}

// Running tournament over temporally ordered candidates; the incumbent stays
// on the left and is replaced only on a strictly positive class.
inline std::size_t select_best_index(const std::vector<StateFeatures>& candidates,
                                     const AamParams& params) {
  if (candidates.empty()) throw std::invalid_argument("select_best: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (advantage_class(candidates[best], candidates[i], params) > 0) best = i;
  return best;
}

inline nlohmann::json aam_params_to_json(const AamParams& p) {
  nlohmann::json j;
  j["version"] = 1;
  j["embed"] = linear_to_json(p.enc.embed);
  j["hidden"] = linear_to_json(p.enc.hidden);
  j["fc1"] = linear_to_json(p.fc1);
  j["fc2"] = linear_to_json(p.fc2);
  j["pos_left"] = vector_to_json(p.pos_left);
  j["pos_right"] = vector_to_json(p.pos_right);
  return j;
}

inline AamParams aam_params_from_json(const nlohmann::json& j) {
  AamParams p;
  p.enc.embed = linear_from_json(j.at("embed"));
  p.enc.hidden = linear_from_json(j.at("hidden"));
  p.fc1 = linear_from_json(j.at("fc1"));
  p.fc2 = linear_from_json(j.at("fc2"));
  p.pos_left = vector_from_json(j.at("pos_left"));
  p.pos_right = vector_from_json(j.at("pos_right"));
  p.gpos_left = Eigen::VectorXd::Zero(p.pos_left.size());
  p.gpos_right = Eigen::VectorXd::Zero(p.pos_right.size());
  return p;
}

}  // namespace foss
