#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "foss/aam.hpp"
#include "foss/agent.hpp"
#include "foss/env.hpp"
#include "foss/executor.hpp"
#include "foss/expert.hpp"
#include "foss/reward.hpp"

namespace foss {

// Per-query state maintained across the whole training run: the expert's
// original plan, its true latency, and the known/perceived best plans.
struct QueryStats {
  IncompletePlan orig_icp;
  double u_orig = 0.0;
  IncompletePlan known_best_icp;
  double u_known_best = 0.0;
  int known_best_step = 0;
  IncompletePlan perceived_icp;
  double u_perceived_best = 0.0;
  int perceived_step = 0;
  std::map<std::vector<int>, int> swap_dist;  // from orig order, depth maxsteps
};

class QueryTrackers {
 public:
  QueryTrackers(const SchemaSpec& schema, const CostModel& cost,
                const ExecutorConfig& exec_cfg, int maxsteps)
      : schema_(schema), cost_(cost), exec_cfg_(exec_cfg), maxsteps_(maxsteps) {}

  QueryStats& ensure(const JoinGraphQuery& query) {
    auto it = stats_.find(query.query_id);
    if (it != stats_.end()) return it->second;
    QueryStats s;
    const CompletePlan orig = optimize(schema_, query, cost_);
    s.orig_icp = extract_icp(orig);
    s.u_orig = execute(schema_, query, s.orig_icp, exec_cfg_).latency;
    s.known_best_icp = s.orig_icp;
    s.u_known_best = s.u_orig;
    s.perceived_icp = s.orig_icp;
    s.u_perceived_best = s.u_orig;
    s.swap_dist = swap_distance_map(s.orig_icp.order, schema_, query, maxsteps_);
    return stats_.emplace(query.query_id, std::move(s)).first->second;
  }

  const QueryStats& get(int query_id) const { return stats_.at(query_id); }
  bool has(int query_id) const { return stats_.count(query_id) > 0; }

  // Record a real execution result. Validated executions may also move the
  // perceived best; exploration executions only move the known best.
  void note_execution(int query_id, const IncompletePlan& icp, double latency,
                      bool censored, int step, bool validated) {
    QueryStats& s = stats_.at(query_id);
    if (censored) return;
    if (latency < s.u_known_best) {
      s.u_known_best = latency;
      s.known_best_icp = icp;
      s.known_best_step = step;
    }
    if (validated && latency < s.u_perceived_best) {
      s.u_perceived_best = latency;
      s.perceived_icp = icp;
      s.perceived_step = step;
    }
  }

  int min_steps(const JoinGraphQuery& query, const IncompletePlan& icp, int bound) const {
    const QueryStats& s = stats_.at(query.query_id);
    int hamming = 0;
    for (std::size_t i = 0; i < icp.methods.size(); ++i)
      if (icp.methods[i] != s.orig_icp.methods[i]) ++hamming;
    const auto it = s.swap_dist.find(icp.order);
    if (it == s.swap_dist.end()) return bound;
    return std::min(bound, it->second + hamming);
  }

 private:
  const SchemaSpec& schema_;
  CostModel cost_;
  ExecutorConfig exec_cfg_;
  int maxsteps_;
  std::map<int, QueryStats> stats_;
};

// Environment over the synthetic engine. Three flavors share the transition
// function (hint-guided completion); they differ only in where the advantage
// classes come from and whether executions land in the buffer.
//   Real            — execute with dynamic timeout, append, discretize latencies
//   Simulated       — no execution; classes from the advantage model
//   SimulatedOracle — execute (no buffer) and discretize, for equivalence tests
class PlanEnvironment : public RolloutEnv {
 public:
  enum class Mode { Real, Simulated, SimulatedOracle };

  struct Candidate {
    IncompletePlan icp;
    int step_index = 0;
    double latency = 0.0;
    bool censored = false;
    StateFeatures features;  // Simulated mode only
  };

  PlanEnvironment(const SchemaSpec& schema, const std::vector<JoinGraphQuery>& workload,
                  const CostModel& cost, const ExecutorConfig& exec_cfg,
                  const DiscretizationSpec& disc, const RewardConfig& reward_cfg,
                  Mode mode, QueryTrackers& trackers,
                  ExecutionBuffer* buffer = nullptr, const AamParams* aam = nullptr,
                  RecordSource source = RecordSource::Exploration)
      : schema_(schema), workload_(workload), cost_(cost), exec_cfg_(exec_cfg),
        disc_(disc), reward_cfg_(reward_cfg), mode_(mode), trackers_(trackers),
        buffer_(buffer), aam_(aam), source_(source) {
    if (mode_ == Mode::Real && buffer_ == nullptr)
      throw std::invalid_argument("PlanEnvironment: real mode needs a buffer");
    if (mode_ == Mode::Simulated && aam_ == nullptr)
      throw std::invalid_argument("PlanEnvironment: simulated mode needs AAM params");
  }

  Init reset(int query_id) override {
    query_ = &find_query(query_id);
    const QueryStats& stats = trackers_.ensure(*query_);
    timeout_ = 1.5 * stats.u_orig;  // recomputed every episode, never stale
    history_.clear();
    history_.insert(stats.orig_icp);
    candidates_.clear();

    const CompletePlan orig = complete(schema_, *query_, stats.orig_icp, cost_);
    Candidate c;
    c.icp = stats.orig_icp;
    c.step_index = 0;
    c.latency = stats.u_orig;
    if (mode_ == Mode::Simulated)
      c.features = featurize(schema_, *query_, orig, 0, reward_cfg_.maxsteps);
    candidates_.push_back(c);
    best_ = c;

    known_best_ = reference_candidate(stats.known_best_icp, stats.known_best_step,
                                      stats.u_known_best);
    perceived_ = reference_candidate(stats.perceived_icp, stats.perceived_step,
                                     stats.u_perceived_best);
    eb_qb_ = adv_initial(stats.u_orig, stats.u_known_best) * reward_cfg_.eb_max;
    eb_pb_ = adv_initial(stats.u_orig, stats.u_perceived_best) * reward_cfg_.eb_max;
    return Init{stats.orig_icp, orig};
  }

  std::pair<CompletePlan, double> step(const IncompletePlan& icp_t, int t) override {
    if (query_ == nullptr) throw std::logic_error("PlanEnvironment: step before reset");
    const CompletePlan cp_t = complete(schema_, *query_, icp_t, cost_);
    Candidate cand = make_candidate(icp_t, cp_t, t);
    candidates_.push_back(cand);

    const int min_steps = trackers_.min_steps(*query_, icp_t, reward_cfg_.maxsteps);
    double reward = penalty(min_steps, t, reward_cfg_);
    const int score = advantage(best_, cand);
    if (!history_.count(icp_t)) {
      double bounty = step_bounty(score, reward_cfg_);
      if (t == reward_cfg_.maxsteps) {
        const int adv1 = advantage(known_best_, best_);
        const int adv2 = advantage(perceived_, best_);
        const int adv3 = advantage(candidates_.front(), best_);
        bounty += episode_bounty_cases(adv1, adv2, adv3, eb_qb_, eb_pb_, disc_, reward_cfg_);
      }
      reward += bounty;
      history_.insert(icp_t);
    }
    if (score > 0) best_ = cand;
    return {cp_t, reward};
  }

  const Candidate& episode_best() const { return best_; }
  const std::vector<Candidate>& episode_candidates() const { return candidates_; }
  int advantage_of(const Candidate& l, const Candidate& r) const { return advantage(l, r); }

 private:
  const JoinGraphQuery& find_query(int query_id) const {
    for (const auto& q : workload_)
      if (q.query_id == query_id) return q;
    throw std::out_of_range("PlanEnvironment: unknown query id");
  }

  Candidate make_candidate(const IncompletePlan& icp, const CompletePlan& cp, int t) {
    Candidate c;
    c.icp = icp;
    c.step_index = t;
    if (mode_ == Mode::Simulated) {
      c.features = featurize(schema_, *query_, cp, t, reward_cfg_.maxsteps);
      return c;
    }
    ExecutionRecord rec =
        execute(schema_, *query_, icp, exec_cfg_, timeout_, source_, t);
    if (mode_ == Mode::Real) rec = buffer_->append(rec);
    c.latency = rec.latency;
    c.censored = rec.censored;
    return c;
  }

  Candidate reference_candidate(const IncompletePlan& icp, int step, double latency) {
    Candidate c;
    c.icp = icp;
    c.step_index = step;
    c.latency = latency;
    if (mode_ == Mode::Simulated) {
      const CompletePlan cp = complete(schema_, *query_, icp, cost_);
      c.features = featurize(schema_, *query_, cp,
                             std::min(step, reward_cfg_.maxsteps), reward_cfg_.maxsteps);
    }
    return c;
  }

  int advantage(const Candidate& l, const Candidate& r) const {
    if (mode_ == Mode::Simulated) return advantage_class(l.features, r.features, *aam_);
    return disc_.discretize(adv_initial(l.latency, r.latency));
  }

  const SchemaSpec& schema_;
  const std::vector<JoinGraphQuery>& workload_;
  CostModel cost_;
  ExecutorConfig exec_cfg_;
  DiscretizationSpec disc_;
  RewardConfig reward_cfg_;
  Mode mode_;
  QueryTrackers& trackers_;
  ExecutionBuffer* buffer_;
  const AamParams* aam_;
  RecordSource source_;

  const JoinGraphQuery* query_ = nullptr;
  double timeout_ = 0.0;
  std::set<IncompletePlan> history_;
  std::vector<Candidate> candidates_;
  Candidate best_, known_best_, perceived_;
  double eb_qb_ = 0.0, eb_pb_ = 0.0;
};

// Number of extra sampled rollouts pooled into the inference-time candidate
// set, on top of the single greedy rollout.
inline constexpr int kInferenceSampledRollouts = 8;

// Plan choice for one query: pool the candidates of one greedy rollout and a
// few deterministically seeded sampled rollouts in the simulated environment,
// plus the validated perceived-best plan when one exists, then pick the
// winner by the advantage model tournament.
inline IncompletePlan choose_plan(const SchemaSpec& schema,
                                  const std::vector<JoinGraphQuery>& workload,
                                  const JoinGraphQuery& query, const CostModel& cost,
                                  const ExecutorConfig& exec_cfg,
                                  const DiscretizationSpec& disc,
                                  const RewardConfig& reward_cfg,
                                  QueryTrackers& trackers,
                                  const PolicyParams& policy, const AamParams& aam) {
  const QueryStats& stats = trackers.ensure(query);
  PlanEnvironment env(schema, workload, cost, exec_cfg, disc, reward_cfg,
                      PlanEnvironment::Mode::Simulated, trackers, nullptr, &aam);
  std::vector<StateFeatures> feats;
  std::vector<IncompletePlan> icps;
  auto collect = [&] {
    for (const auto& c : env.episode_candidates()) {
      feats.push_back(c.features);
      icps.push_back(c.icp);
    }
  };
  Rng greedy_rng(0);  // unused by greedy action selection
  rollout(schema, query, env, policy, reward_cfg.maxsteps, greedy_rng, ActMode::Greedy);
  collect();
  for (int k = 0; k < kInferenceSampledRollouts; ++k) {
    Rng sample_rng(mix_seed(query.query_id, 0xCAFEULL + k));
    rollout(schema, query, env, policy, reward_cfg.maxsteps, sample_rng,
            ActMode::Sample);
    collect();
  }
  if (!(stats.perceived_icp == stats.orig_icp)) {
    const CompletePlan cp = complete(schema, query, stats.perceived_icp, cost);
    feats.push_back(featurize(schema, query, cp,
                              std::min(stats.perceived_step, reward_cfg.maxsteps),
                              reward_cfg.maxsteps));
    icps.push_back(stats.perceived_icp);
  }
  std::size_t pick = select_best_index(feats, aam);
  // tournament winners are chained pairwise comparisons; demand the winner
  // also beats the original plan head-to-head in both orientations, else
  // keep the original
  if (pick != 0 && (advantage_class(feats[0], feats[pick], aam) == 0 ||
                    advantage_class(feats[pick], feats[0], aam) > 0))
    pick = 0;
  return icps[pick];
}

struct LoopConfig {
  int exploration_batch = 10;
  int exploration_episodes_per_query = 8;
  int episodes_per_update = 900;
  int training_rounds = 3;
  int validation_top_k = 2;
  int total_iterations = 5;
  int aam_epochs_per_phase = 25;
  std::uint64_t seed = 42;
};

struct IterationMetrics {
  int iteration = 0;
  double wrl_train = 1.0, gmrl_train = 1.0;
  double wrl_holdout = 1.0, gmrl_holdout = 1.0;
  std::size_t buffer_size = 0;
  double aam_accuracy = 0.0;
};

// Exploration / training / validation driver over the synthetic engine.
class SimulatedLearner {
 public:
  SimulatedLearner(const SchemaSpec& schema, std::vector<JoinGraphQuery> train,
                   std::vector<JoinGraphQuery> holdout, const CostModel& cost,
                   const ExecutorConfig& exec_cfg, const DiscretizationSpec& disc,
                   const RewardConfig& reward_cfg, const AamConfig& aam_cfg,
                   const LearnerConfig& learner_cfg, const LoopConfig& loop_cfg)
      : schema_(schema), train_(std::move(train)), holdout_(std::move(holdout)),
        cost_(cost), exec_cfg_(exec_cfg), disc_(disc), reward_cfg_(reward_cfg),
        aam_cfg_(aam_cfg), learner_cfg_(learner_cfg), loop_cfg_(loop_cfg),
        trackers_(schema_, cost_, exec_cfg_, reward_cfg_.maxsteps),
        rng_(mix_seed(loop_cfg.seed, 0x100bULL)) {
    aam_params_ = AamParams::make(feature_width(schema_), aam_cfg_);
    policy_params_ = PolicyParams::make(
        feature_width(schema_), num_actions(schema_.num_tables()),
        aam_cfg_.embed_dim, aam_cfg_.state_dim, loop_cfg_.seed);
  }

  void exploration_phase() {
    PlanEnvironment env(schema_, train_, cost_, exec_cfg_, disc_, reward_cfg_,
                        PlanEnvironment::Mode::Real, trackers_, &buffer_,
                        nullptr, RecordSource::Exploration);
    for (int i = 0; i < loop_cfg_.exploration_batch; ++i) {
      const JoinGraphQuery& q = train_[next_explore_++ % train_.size()];
      trackers_.ensure(q);
      if (buffer_.for_query(q.query_id).empty()) {
        // seed the buffer with the original plan's execution (step 0)
        buffer_.append(execute(schema_, q, trackers_.get(q.query_id).orig_icp,
                               exec_cfg_, std::nullopt, RecordSource::Exploration, 0));
      }
      const std::size_t before = buffer_.size();
      for (int e = 0; e < loop_cfg_.exploration_episodes_per_query; ++e)
        rollout(schema_, q, env, policy_params_, reward_cfg_.maxsteps, rng_,
                ActMode::Sample);
      for (std::size_t r = before; r < buffer_.size(); ++r) {
        const auto& rec = buffer_.records()[r];
        trackers_.note_execution(rec.query_id, rec.icp, rec.latency, rec.censored,
                                 rec.step_index, /*validated=*/false);
      }
      explored_.insert(q.query_id);
    }
    retrain_aam();
  }

  struct CollectedPlan {
    int query_id = 0;
    IncompletePlan icp;
    int step_index = 0;
  };

  void training_phase() {
    PlanEnvironment env(schema_, train_, cost_, exec_cfg_, disc_, reward_cfg_,
                        PlanEnvironment::Mode::Simulated, trackers_, nullptr,
                        &aam_params_);
    std::vector<Experience> batch;
    std::vector<int> pool(explored_.begin(), explored_.end());
    if (pool.empty()) throw std::logic_error("training_phase before exploration");
    std::map<int, int> collected_per_query;
    collected_.clear();
    for (int e = 0; e < loop_cfg_.episodes_per_update; ++e) {
      const int qid = pool[rng_.next_int(0, static_cast<int>(pool.size()) - 1)];
      const JoinGraphQuery& q = *find_train(qid);
      auto result = rollout(schema_, q, env, policy_params_, reward_cfg_.maxsteps,
                            rng_, ActMode::Sample);
      for (auto& exp : result.experiences) batch.push_back(std::move(exp));
      const auto& best = env.episode_best();
      if (best.step_index > 0 && collected_per_query[qid] < loop_cfg_.validation_top_k) {
        // keep plans the advantage model believes beat the perceived best
        PlanEnvironment::Candidate perceived;
        const QueryStats& stats = trackers_.get(qid);
        const CompletePlan pb = complete(schema_, q, stats.perceived_icp, cost_);
        perceived.icp = stats.perceived_icp;
        perceived.features = featurize(schema_, q, pb,
                                       std::min(stats.perceived_step, reward_cfg_.maxsteps),
                                       reward_cfg_.maxsteps);
        if (env.advantage_of(perceived, best) > 0 &&
            !already_collected(qid, best.icp)) {
          collected_.push_back({qid, best.icp, best.step_index});
          ++collected_per_query[qid];
        }
      }
    }
    update_agent(batch, policy_params_, learner_cfg_);
  }

  void validation_phase() {
    for (const auto& plan : collected_) {
      const JoinGraphQuery& q = *find_train(plan.query_id);
      const double timeout = 1.5 * trackers_.get(plan.query_id).u_orig;
      const auto& rec = buffer_.append(execute(schema_, q, plan.icp, exec_cfg_, timeout,
                                               RecordSource::Validation, plan.step_index));
      trackers_.note_execution(rec.query_id, rec.icp, rec.latency, rec.censored,
                               rec.step_index, /*validated=*/true);
    }
    collected_.clear();
    retrain_aam();
  }

  void run_iteration() {
    exploration_phase();
    for (int round = 0; round < loop_cfg_.training_rounds; ++round) {
      training_phase();
      validation_phase();
    }
  }

  std::vector<IterationMetrics> run() {
    std::vector<IterationMetrics> report;
    for (int it = 0; it < loop_cfg_.total_iterations; ++it) {
      run_iteration();
      IterationMetrics m;
      m.iteration = it;
      m.buffer_size = buffer_.size();
      m.aam_accuracy = last_aam_accuracy_;
      evaluate_workload(train_, m.wrl_train, m.gmrl_train);
      if (!holdout_.empty()) evaluate_workload(holdout_, m.wrl_holdout, m.gmrl_holdout);
      report.push_back(m);
    }
    return report;
  }

  IncompletePlan choose_plan(const JoinGraphQuery& query) {
    return foss::choose_plan(schema_, workload_ref(query), query, cost_, exec_cfg_,
                             disc_, reward_cfg_, trackers_, policy_params_,
                             aam_params_);
  }

  const AamParams& aam() const { return aam_params_; }
  AamParams& aam() { return aam_params_; }
  const PolicyParams& policy() const { return policy_params_; }
  const ExecutionBuffer& buffer() const { return buffer_; }
  const QueryTrackers& trackers() const { return trackers_; }
  QueryTrackers& trackers() { return trackers_; }

 private:
  void evaluate_workload(const std::vector<JoinGraphQuery>& queries, double& wrl_out,
                         double& gmrl_out) {
    double learned_sum = 0.0, expert_sum = 0.0, log_ratio = 0.0;
    for (const auto& q : queries) {
      trackers_.ensure(q);
      const IncompletePlan chosen = choose_plan(q);
      const double learned = execute(schema_, q, chosen, exec_cfg_).latency;
      const double expert = trackers_.get(q.query_id).u_orig;
      learned_sum += learned;
      expert_sum += expert;
      log_ratio += std::log(learned / expert);
    }
    wrl_out = learned_sum / expert_sum;
    gmrl_out = std::exp(log_ratio / static_cast<double>(queries.size()));
  }

  const std::vector<JoinGraphQuery>& workload_ref(const JoinGraphQuery& query) {
    for (const auto& q : train_)
      if (q.query_id == query.query_id) return train_;
    return holdout_;
  }

  const JoinGraphQuery* find_train(int qid) const {
    for (const auto& q : train_)
      if (q.query_id == qid) return &q;
    throw std::out_of_range("SimulatedLearner: unknown training query");
  }

  bool already_collected(int qid, const IncompletePlan& icp) const {
    for (const auto& c : collected_)
      if (c.query_id == qid && c.icp == icp) return true;
    return false;
  }

  void retrain_aam() {
    std::vector<TrainingPair> pairs;
    Rng pair_rng(mix_seed(loop_cfg_.seed, 0xBA1DULL + phase_counter_++));
    for (int qid : explored_) {
      const auto records = buffer_.for_query(qid);
      const JoinGraphQuery& q = *find_train(qid);
      auto qp = make_pairs(schema_, q, records, cost_, disc_, reward_cfg_.maxsteps,
                           aam_cfg_, pair_rng);
      for (auto& p : qp) pairs.push_back(std::move(p));
    }
    if (pairs.empty()) return;
    AamConfig cfg = aam_cfg_;
    cfg.epochs = loop_cfg_.aam_epochs_per_phase;
    cfg.seed = mix_seed(aam_cfg_.seed, phase_counter_);
    const TrainStats stats = train_aam(pairs, cfg, aam_params_);
    last_aam_accuracy_ = stats.accuracy;
  }

  const SchemaSpec& schema_;
  std::vector<JoinGraphQuery> train_, holdout_;
  CostModel cost_;
  ExecutorConfig exec_cfg_;
  DiscretizationSpec disc_;
  RewardConfig reward_cfg_;
  AamConfig aam_cfg_;
  LearnerConfig learner_cfg_;
  LoopConfig loop_cfg_;

  QueryTrackers trackers_;
  ExecutionBuffer buffer_;
  AamParams aam_params_;
  PolicyParams policy_params_;
  Rng rng_;
  std::set<int> explored_;
  std::vector<CollectedPlan> collected_;
  std::size_t next_explore_ = 0;
  std::uint64_t phase_counter_ = 0;
  double last_aam_accuracy_ = 0.0;
};

}  // namespace foss
