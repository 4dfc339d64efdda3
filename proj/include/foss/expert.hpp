#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "foss/actionspace.hpp"
#include "foss/catalog.hpp"
#include "foss/plan.hpp"

namespace foss {

struct CostModel {
  double c_hash = 1.0;
  double c_merge = 1.2;
  double c_nl = 0.05;
  double c_scan = 1.0;
};

inline double join_cost(JoinMethod method, double outer_rows, double inner_rows,
                        double out_rows, const CostModel& model) {
  if (outer_rows < 0 || inner_rows < 0 || out_rows < 0)
    throw std::invalid_argument("join_cost: negative rows");
  switch (method) {
    case JoinMethod::NestedLoop:
      return model.c_nl * outer_rows * inner_rows + out_rows;
    case JoinMethod::Hash:
      return model.c_hash * (outer_rows + inner_rows) + out_rows;
    case JoinMethod::Merge:
      return model.c_merge * (outer_rows * std::log2(1.0 + outer_rows) +
                              inner_rows * std::log2(1.0 + inner_rows)) +
             out_rows;
  }
  throw std::invalid_argument("join_cost: unknown method");
}

namespace detail {

inline std::vector<int> positions_of_mask(std::uint32_t mask, int nq) {
  std::vector<int> out;
  for (int p = 0; p < nq; ++p)
    if (mask & (1u << p)) out.push_back(p);
  return out;
}

// true iff position `pos` has a predicate into the masked prefix
inline bool joins_prefix(const SchemaSpec& schema, const JoinGraphQuery& query,
                         std::uint32_t prefix_mask, int pos) {
  for (int eid : query.predicate_edges) {
    const auto& e = schema.join_edges[eid];
    const int pa = query.ref_position(e.table_a);
    const int pb = query.ref_position(e.table_b);
    if ((pa == pos && (prefix_mask & (1u << pb))) ||
        (pb == pos && (prefix_mask & (1u << pa))))
      return true;
  }
  return false;
}

}  // namespace detail

// Fill per-node cardinalities and costs for a fixed skeleton, using the
// requested cardinality mode. Shared by the optimizer, the hint-completion
// path, and the executor.
inline CompletePlan cost_plan(const SchemaSpec& schema, const JoinGraphQuery& query,
                              const IncompletePlan& icp, const CostModel& model,
                              CardMode mode) {
  const int nq = icp.num_tables();
  if (static_cast<int>(icp.methods.size()) != nq - 1)
    throw std::invalid_argument("cost_plan: malformed skeleton");
  CompletePlan cp;
  cp.query_id = icp.query_id;
  cp.order = icp.order;
  cp.methods = icp.methods;
  cp.node_rows.assign(2 * nq - 1, 0.0);
  cp.node_cost.assign(2 * nq - 1, 0.0);

  for (int p = 0; p < nq; ++p) {
    const double rows = cardinality(schema, query, {icp.order[p]}, mode);
    cp.node_rows[cp.leaf_node(p)] = rows;
    cp.node_cost[cp.leaf_node(p)] = model.c_scan * rows;
  }
  // accumulate in the DP's left-to-right order so totals compare bit-exactly
  double total = cp.node_cost[cp.leaf_node(0)];
  std::vector<int> prefix{icp.order[0]};
  double prefix_rows = cp.node_rows[cp.leaf_node(0)];
  for (int j = 0; j < nq - 1; ++j) {
    std::uint32_t prefix_mask = 0;
    for (int pos : prefix) prefix_mask |= 1u << pos;
    if (!detail::joins_prefix(schema, query, prefix_mask, icp.order[j + 1]))
      throw std::invalid_argument("cost_plan: disconnected prefix (cross join)");
    prefix.push_back(icp.order[j + 1]);
    const double out_rows = cardinality(schema, query, prefix, mode);
    const double inner_rows = cp.node_rows[cp.leaf_node(j + 1)];
    cp.node_rows[cp.join_node(j)] = out_rows;
    cp.node_cost[cp.join_node(j)] =
        join_cost(icp.methods[j], prefix_rows, inner_rows, out_rows, model);
    total = total + cp.node_cost[cp.leaf_node(j + 1)] + cp.node_cost[cp.join_node(j)];
    prefix_rows = out_rows;
  }
  cp.total_cost = total;
  return cp;
}

// Hint-guided completion: order and methods are taken verbatim, costs are
// filled from estimated cardinalities.
inline CompletePlan complete(const SchemaSpec& schema, const JoinGraphQuery& query,
                             const IncompletePlan& icp, const CostModel& model) {
  return cost_plan(schema, query, icp, model, CardMode::Estimated);
}

// Selinger-style left-deep DP over estimated cardinalities. Ties are broken
// lexicographically on (order, methods) so output is byte-stable.
inline CompletePlan optimize(const SchemaSpec& schema, const JoinGraphQuery& query,
                             const CostModel& model) {
  const int nq = query.num_tables();
  if (nq < 2) throw std::invalid_argument("optimize: query needs >= 2 tables");
  if (nq > 20) throw std::invalid_argument("optimize: query too large for DP");

  struct Entry {
    double cost = std::numeric_limits<double>::infinity();
    double rows = 0.0;
    std::vector<int> order;
    std::vector<JoinMethod> methods;
  };
  const std::uint32_t full = (1u << nq) - 1;
  std::vector<Entry> dp(full + 1);

  for (int p = 0; p < nq; ++p) {
    Entry& e = dp[1u << p];
    e.rows = cardinality(schema, query, {p}, CardMode::Estimated);
    e.cost = model.c_scan * e.rows;
    e.order = {p};
  }

  auto better = [](double cost, const std::vector<int>& order,
                   const std::vector<JoinMethod>& methods, const Entry& cur) {
    if (cost != cur.cost) return cost < cur.cost;
    if (order != cur.order) return order < cur.order;
    return methods < cur.methods;
  };

  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int bits = __builtin_popcount(mask);
    if (bits < 2) continue;
    Entry& cur = dp[mask];
    bool rows_set = false;
    for (int last = 0; last < nq; ++last) {
      if (!(mask & (1u << last))) continue;
      const std::uint32_t rest = mask & ~(1u << last);
      const Entry& sub = dp[rest];
      if (!std::isfinite(sub.cost)) continue;
      if (!detail::joins_prefix(schema, query, rest, last)) continue;
      if (!rows_set) {
        cur.rows = cardinality(schema, query,
                               detail::positions_of_mask(mask, nq),
                               CardMode::Estimated);
        rows_set = true;
      }
      const double inner = dp[1u << last].rows;
      for (int m = 0; m < kNumJoinMethods; ++m) {
        const JoinMethod method = static_cast<JoinMethod>(m);
        const double cost = sub.cost + model.c_scan * inner +
                            join_cost(method, sub.rows, inner, cur.rows, model);
        std::vector<int> order = sub.order;
        order.push_back(last);
        std::vector<JoinMethod> methods = sub.methods;
        methods.push_back(method);
        if (better(cost, order, methods, cur)) {
          cur.cost = cost;
          cur.order = std::move(order);
          cur.methods = std::move(methods);
        }
      }
    }
  }

  const Entry& best = dp[full];
  if (!std::isfinite(best.cost))
    throw std::runtime_error("optimize: query join graph is disconnected");
  IncompletePlan icp;
  icp.query_id = query.query_id;
  icp.order = best.order;
  icp.methods = best.methods;
  return complete(schema, query, icp, model);
}

}  // namespace foss
