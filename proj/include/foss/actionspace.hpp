#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "foss/plan.hpp"

namespace foss {

// Swap(T_l, T_r): exchange the tables at order positions l and r (1-based labels).
struct SwapAction {
  int l = 0, r = 0;
  bool operator==(const SwapAction& o) const { return l == o.l && r == o.r; }
};

// Override(O_i, Op_j): set join node O_i's method to the j-th method (1-based).
struct OverrideAction {
  int i = 0, j = 0;
  bool operator==(const OverrideAction& o) const { return i == o.i && j == o.j; }
};

using Action = std::variant<SwapAction, OverrideAction>;

inline int num_swap_actions(int n) { return n * (n - 1) / 2; }
inline int num_override_actions(int n, int ops = kNumJoinMethods) { return ops * (n - 1); }
inline int num_actions(int n, int ops = kNumJoinMethods) {
  return num_swap_actions(n) + num_override_actions(n, ops);
}

// B_1 = 1; B_k = 1 + sum_{i=2..k} (n - i + 1)
inline int swap_block_start(int l, int n) {
  int b = 1;
  for (int i = 2; i <= l; ++i) b += n - i + 1;
  return b;
}

inline Action decode_action(int a, int n, int ops = kNumJoinMethods) {
  const int ns = num_swap_actions(n);
  const int total = num_actions(n, ops);
  if (a < 1 || a > total) throw std::out_of_range("decode_action: id out of range");
  if (a <= ns) {
    int l = 1;
    while (l < n - 1 && swap_block_start(l + 1, n) <= a) ++l;
    const int r = a - swap_block_start(l, n) + l + 1;
    return SwapAction{l, r};
  }
  const int i = (total + 1 - a + ops - 1) / ops;          // ceil((total+1-a)/ops)
  const int j = ((total - a) % ops) + 1;
  return OverrideAction{i, j};
}

inline int encode_action(const Action& action, int n, int ops = kNumJoinMethods) {
  const int total = num_actions(n, ops);
  if (const auto* s = std::get_if<SwapAction>(&action)) {
    if (s->l < 1 || s->l >= s->r || s->r > n)
      throw std::out_of_range("encode_action: bad swap indices");
    return swap_block_start(s->l, n) + s->r - s->l - 1;
  }
  const auto& o = std::get<OverrideAction>(action);
  if (o.i < 1 || o.i > n - 1 || o.j < 1 || o.j > ops)
    throw std::out_of_range("encode_action: bad override indices");
  return total - ((o.i - 1) * ops + (o.j - 1));
}

inline std::string action_to_string(const Action& action) {
  if (const auto* s = std::get_if<SwapAction>(&action))
    return "swap T" + std::to_string(s->l) + " T" + std::to_string(s->r);
  const auto& o = std::get<OverrideAction>(action);
  return "override O" + std::to_string(o.i) + "=" +
         join_method_name(static_cast<JoinMethod>(o.j - 1));
}

namespace detail {

// every order position k >= 1 must have a predicate back into the prefix
inline bool order_is_connected(const SchemaSpec& schema, const JoinGraphQuery& query,
                               const std::vector<int>& order) {
  for (std::size_t k = 1; k < order.size(); ++k) {
    bool joined = false;
    for (int eid : query.predicate_edges) {
      const auto& e = schema.join_edges[eid];
      const int pa = query.ref_position(e.table_a);
      const int pb = query.ref_position(e.table_b);
      for (std::size_t p = 0; p < k && !joined; ++p) {
        joined = (order[k] == pa && order[p] == pb) ||
                 (order[k] == pb && order[p] == pa);
      }
      if (joined) break;
    }
    if (!joined) return false;
  }
  return true;
}

}  // namespace detail

// Legality mask over the schema-wide action space.
// - actions naming T_k / O_k beyond the query's table count are masked;
// - swaps producing a cross-join prefix are masked;
// - if the previous action was a Swap, only Overrides on the join nodes
//   adjacent (parent) to either swapped position remain (LimitSpace).
inline std::vector<char> legal_mask(const IncompletePlan& icp,
                                    const SchemaSpec& schema,
                                    const JoinGraphQuery& query,
                                    const std::optional<Action>& prev = std::nullopt,
                                    int ops = kNumJoinMethods) {
  const int n = schema.num_tables();
  const int nq = icp.num_tables();
  const int total = num_actions(n, ops);
  std::vector<char> mask(total, 0);

  const SwapAction* prev_swap =
      prev.has_value() ? std::get_if<SwapAction>(&prev.value()) : nullptr;
  std::set<int> allowed_joins;
  if (prev_swap) {
    // parent join of leaf position p (1-based label) is O_max(p-1, 1)
    allowed_joins.insert(std::max(prev_swap->l - 1, 1));
    allowed_joins.insert(std::max(prev_swap->r - 1, 1));
  }

  for (int a = 1; a <= total; ++a) {
    const Action act = decode_action(a, n, ops);
    if (const auto* s = std::get_if<SwapAction>(&act)) {
      if (prev_swap) continue;
      if (s->r > nq) continue;
      std::vector<int> order = icp.order;
      std::swap(order[s->l - 1], order[s->r - 1]);
      if (!detail::order_is_connected(schema, query, order)) continue;
      mask[a - 1] = 1;
    } else {
      const auto& o = std::get<OverrideAction>(act);
      if (o.i > nq - 1) continue;
      if (prev_swap && !allowed_joins.count(o.i)) continue;
      mask[a - 1] = 1;
    }
  }
  return mask;
}

inline IncompletePlan apply_action(const IncompletePlan& icp, const Action& action) {
  IncompletePlan out = icp;
  if (const auto* s = std::get_if<SwapAction>(&action)) {
    if (s->r > icp.num_tables())
      throw std::out_of_range("apply_action: swap position beyond query");
    std::swap(out.order[s->l - 1], out.order[s->r - 1]);
  } else {
    const auto& o = std::get<OverrideAction>(action);
    if (o.i > icp.num_tables() - 1)
      throw std::out_of_range("apply_action: join index beyond query");
    out.methods[o.i - 1] = static_cast<JoinMethod>(o.j - 1);
  }
  return out;
}

// BFS over table orders alone, counting connectivity-legal swaps. Returns
// distances for every order within `depth` swaps of `origin_order`.
inline std::map<std::vector<int>, int> swap_distance_map(
    const std::vector<int>& origin_order, const SchemaSpec& schema,
    const JoinGraphQuery& query, int depth) {
  std::map<std::vector<int>, int> dist{{origin_order, 0}};
  std::deque<std::vector<int>> frontier{origin_order};
  const int nq = static_cast<int>(origin_order.size());
  while (!frontier.empty()) {
    std::vector<int> order = frontier.front();
    frontier.pop_front();
    const int d = dist[order];
    if (d >= depth) continue;
    for (int l = 0; l < nq; ++l)
      for (int r = l + 1; r < nq; ++r) {
        std::swap(order[l], order[r]);
        if (!dist.count(order) && detail::order_is_connected(schema, query, order)) {
          dist[order] = d + 1;
          frontier.push_back(order);
        }
        std::swap(order[l], order[r]);
      }
  }
  return dist;
}

// Minimum number of legal actions from origin to target, bounded by maxsteps.
// LimitSpace is deliberately not applied; swap legality alone constrains the
// path. Swaps and overrides are independent, so the minimum decomposes into
// the swap distance between orders plus the method Hamming distance.
// Returns the bound if target is unreachable within it.
inline int minsteps(const IncompletePlan& origin, const IncompletePlan& target,
                    const SchemaSpec& schema, const JoinGraphQuery& query,
                    int bound) {
  if (origin == target) return 0;
  int hamming = 0;
  for (std::size_t i = 0; i < origin.methods.size(); ++i)
    if (origin.methods[i] != target.methods[i]) ++hamming;
  if (hamming >= bound && origin.order != target.order) return bound;
  const auto dist = swap_distance_map(origin.order, schema, query, bound - hamming);
  const auto it = dist.find(target.order);
  if (it == dist.end()) return bound;
  return std::min(bound, it->second + hamming);
}

}  // namespace foss
