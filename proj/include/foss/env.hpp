#pragma once

#include <utility>

#include "foss/plan.hpp"

namespace foss {

// Episode environment contract used by rollouts. reset() fixes the query and
// returns the expert's original plan; step() completes the edited skeleton
// and scores it.
class RolloutEnv {
 public:
  virtual ~RolloutEnv() = default;

  struct Init {
    IncompletePlan icp0;
    CompletePlan original;
  };

  virtual Init reset(int query_id) = 0;
  virtual std::pair<CompletePlan, double> step(const IncompletePlan& icp_t, int t) = 0;
};

}  // namespace foss
