#pragma once

#include <cassert>
#include <set>
#include <stdexcept>
#include <vector>

#include "foss/plan.hpp"

namespace foss {

// Advantage of the right plan over the left: (U_l - U_r) / U_l.
inline double adv_initial(double u_left, double u_right) {
  if (u_left <= 0.0) throw std::invalid_argument("adv_initial: nonpositive baseline");
  return (u_left - u_right) / u_left;
}

// Split points for mapping the initial advantage in (-inf, 1] onto scores
// 0..l with right-closed intervals.
struct DiscretizationSpec {
  std::vector<double> points{0.05, 0.75};

  int levels() const { return static_cast<int>(points.size()); }

  int discretize(double x) const {
    if (x > 1.0) throw std::invalid_argument("discretize: advantage above 1");
    int score = 0;
    for (double d : points) {
      if (x > d) ++score;
      else break;
    }
    return score;
  }

  // midpoint of interval D_k (1-based), defined for k >= 2; d_{l+1} = 1
  double midpoint(int k) const {
    const int l = levels();
    if (k < 2 || k > l + 1)
      throw std::invalid_argument("midpoint: index outside (1, l+1]");
    const double hi = (k - 1 < l) ? points[k - 1] : 1.0;
    return (hi + points[k - 2]) / 2.0;
  }
};

struct RewardConfig {
  double eta = 0.5;        // step bounty scale
  double eb_max = 12.0;    // maximum episode bounty
  double gamma_pen = 2.0;  // penalty coefficient
  int maxsteps = 3;
};

inline double step_bounty(int score, const RewardConfig& cfg) {
  if (score < 0) throw std::invalid_argument("step_bounty: negative score");
  return score * cfg.eta;
}

inline double penalty(int min_steps, int t, const RewardConfig& cfg) {
  return cfg.gamma_pen * (min_steps - t);
}

// Episode bounty cases on the discretized advantages:
//   adv1 = Adv(known best, episode best)
//   adv2 = Adv(perceived best, episode best)
//   adv3 = Adv(original, episode best)
// eb_qb / eb_pb are the continuous bounty baselines from real latencies.
inline double episode_bounty_cases(int adv1, int adv2, int adv3, double eb_qb,
                                   double eb_pb, const DiscretizationSpec& spec,
                                   const RewardConfig& cfg) {
  if (adv1 > 0) return spec.midpoint(adv1 + 1) * (cfg.eb_max - eb_qb) + eb_qb;
  if (adv2 > 0) return spec.midpoint(adv2 + 1) * (eb_qb - eb_pb) + eb_pb;
  return (static_cast<double>(adv3) / spec.levels()) * eb_pb;
}

// Latency-known episode context (real environment).
struct EpisodeContext {
  double u_orig = 0.0;
  double u_known_best = 0.0;
  double u_perceived_best = 0.0;
  double u_episode_best = 0.0;
  std::set<IncompletePlan> history;  // canonical ICP forms visited, incl. ICP_0
};

inline double episode_bounty(const EpisodeContext& ctx, const DiscretizationSpec& spec,
                             const RewardConfig& cfg) {
  const int adv1 = spec.discretize(adv_initial(ctx.u_known_best, ctx.u_episode_best));
  const int adv2 = spec.discretize(adv_initial(ctx.u_perceived_best, ctx.u_episode_best));
  const int adv3 = spec.discretize(adv_initial(ctx.u_orig, ctx.u_episode_best));
  const double eb_qb = adv_initial(ctx.u_orig, ctx.u_known_best) * cfg.eb_max;
  const double eb_pb = adv_initial(ctx.u_orig, ctx.u_perceived_best) * cfg.eb_max;
  return episode_bounty_cases(adv1, adv2, adv3, eb_qb, eb_pb, spec, cfg);
}

// One reward step in the latency-known setting. Bounty is computed against
// the episode best before it is updated, matching the training process.
inline double step_reward(EpisodeContext& ctx, const IncompletePlan& icp_t,
                          int min_steps, int t, double u_t,
                          const DiscretizationSpec& spec, const RewardConfig& cfg) {
  double reward = penalty(min_steps, t, cfg);
  const int score = spec.discretize(adv_initial(ctx.u_episode_best, u_t));
  if (!ctx.history.count(icp_t)) {
    double bounty = step_bounty(score, cfg);
    if (t == cfg.maxsteps) {
      bounty += episode_bounty(ctx, spec, cfg);
    }
    reward += bounty;
    ctx.history.insert(icp_t);
  }
  if (score > 0) ctx.u_episode_best = u_t;
  return reward;
}

}  // namespace foss
