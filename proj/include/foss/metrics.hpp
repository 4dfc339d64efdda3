#pragma once

#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>
#include <vector>

#include "foss/actionspace.hpp"
#include "foss/executor.hpp"
#include "foss/expert.hpp"

namespace foss {

// Workload Relevant Latency: total learned latency over total expert latency.
inline double wrl(const std::vector<double>& learned, const std::vector<double>& expert) {
  if (learned.size() != expert.size() || learned.empty())
    throw std::invalid_argument("wrl: length mismatch");
  double ls = 0.0, es = 0.0;
  for (std::size_t i = 0; i < learned.size(); ++i) {
    if (learned[i] <= 0.0 || expert[i] <= 0.0)
      throw std::invalid_argument("wrl: nonpositive latency");
    ls += learned[i];
    es += expert[i];
  }
  return ls / es;
}

// Geometric mean of per-query latency ratios.
inline double gmrl(const std::vector<double>& learned, const std::vector<double>& expert) {
  if (learned.size() != expert.size() || learned.empty())
    throw std::invalid_argument("gmrl: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < learned.size(); ++i) {
    if (learned[i] <= 0.0 || expert[i] <= 0.0)
      throw std::invalid_argument("gmrl: nonpositive latency");
    acc += std::log(learned[i] / expert[i]);
  }
  return std::exp(acc / static_cast<double>(learned.size()));
}

struct ReachableOptimum {
  IncompletePlan icp;
  double latency = 0.0;
  int steps = 0;
  std::size_t states_visited = 0;
};

// Exact true-latency argmin over every skeleton reachable from the expert's
// plan within `maxsteps` legal edits (LimitSpace not applied). Ties go to
// fewer steps, then lexicographic order.
inline ReachableOptimum reachable_optimum(const SchemaSpec& schema,
                                          const JoinGraphQuery& query,
                                          const CostModel& cost,
                                          const ExecutorConfig& exec_cfg,
                                          int maxsteps,
                                          std::size_t state_cap = 500000) {
  const CompletePlan orig = optimize(schema, query, cost);
  const IncompletePlan origin = extract_icp(orig);

  ReachableOptimum best;
  best.icp = origin;
  best.latency = execute(schema, query, origin, exec_cfg).latency;
  best.steps = 0;

  std::set<IncompletePlan> seen{origin};
  std::deque<std::pair<IncompletePlan, int>> frontier{{origin, 0}};
  const int n = schema.num_tables();
  while (!frontier.empty()) {
    auto [icp, depth] = frontier.front();
    frontier.pop_front();
    if (depth >= maxsteps) continue;
    const auto mask = legal_mask(icp, schema, query);
    for (int a = 1; a <= static_cast<int>(mask.size()); ++a) {
      if (!mask[a - 1]) continue;
      IncompletePlan next = apply_action(icp, decode_action(a, n));
      if (!seen.insert(next).second) continue;
      if (seen.size() > state_cap)
        throw std::runtime_error("reachable_optimum: state cap exceeded");
      const double latency = execute(schema, query, next, exec_cfg).latency;
      const int steps = depth + 1;
      const bool better =
          latency < best.latency ||
          (latency == best.latency &&
           (steps < best.steps ||
            (steps == best.steps && next < best.icp)));
      if (better) {
        best.icp = next;
        best.latency = latency;
        best.steps = steps;
      }
      frontier.emplace_back(std::move(next), depth + 1);
    }
  }
  best.states_visited = seen.size();
  return best;
}

}  // namespace foss
