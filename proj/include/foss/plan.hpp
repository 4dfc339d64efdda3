#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "foss/catalog.hpp"

namespace foss {

enum class JoinMethod : int { Hash = 0, Merge = 1, NestedLoop = 2 };
constexpr int kNumJoinMethods = 3;

inline const char* join_method_name(JoinMethod m) {
  switch (m) {
    case JoinMethod::Hash: return "HJ";
    case JoinMethod::Merge: return "MJ";
    case JoinMethod::NestedLoop: return "NLJ";
  }
  return "?";
}

// Left-deep plan skeleton: table order plus join-method vector.
// order[0] is the deepest-left leaf (T_1), order[k] joins at node O_k.
struct IncompletePlan {
  int query_id = 0;
  std::vector<int> order;            // positions into query.table_refs
  std::vector<JoinMethod> methods;   // size order.size() - 1

  int num_tables() const { return static_cast<int>(order.size()); }

  bool operator==(const IncompletePlan& o) const {
    return query_id == o.query_id && order == o.order && methods == o.methods;
  }
  bool operator<(const IncompletePlan& o) const {
    return std::tie(query_id, order, methods) < std::tie(o.query_id, o.order, o.methods);
  }
};

// Fully annotated left-deep plan. Node layout for n tables (2n-1 nodes):
// node i in [0, n)      -> leaf scanning table order[i]
// node n + j, j in [0, n-1) -> join O_{j+1} over prefix order[0..j+1]
struct CompletePlan {
  int query_id = 0;
  std::vector<int> order;
  std::vector<JoinMethod> methods;
  std::vector<double> node_rows;   // estimated output rows per node
  std::vector<double> node_cost;   // estimated cost per node
  double total_cost = 0.0;

  int num_tables() const { return static_cast<int>(order.size()); }
  int num_nodes() const { return 2 * num_tables() - 1; }
  int leaf_node(int pos) const { return pos; }
  int join_node(int j) const { return num_tables() + j; }
  int root_node() const { return num_nodes() - 1; }
};

inline IncompletePlan extract_icp(const CompletePlan& cp) {
  IncompletePlan icp;
  icp.query_id = cp.query_id;
  icp.order = cp.order;
  icp.methods = cp.methods;
  return icp;
}

// Bottom-up node labeling: T_k is the leaf at order position k-1 (1-based),
// O_k is the k-th join from the bottom.
struct NodeLabeling {
  int num_tables = 0;
  int table_position(int k) const {  // T_k -> order position (0-based)
    if (k < 1 || k > num_tables) throw std::out_of_range("T label out of range");
    return k - 1;
  }
  int join_index(int k) const {  // O_k -> methods index (0-based)
    if (k < 1 || k > num_tables - 1) throw std::out_of_range("O label out of range");
    return k - 1;
  }
};

inline NodeLabeling label_nodes(const IncompletePlan& icp) {
  return NodeLabeling{icp.num_tables()};
}

// node structure types
constexpr int kStructLeft = 0;
constexpr int kStructRight = 1;
constexpr int kStructNoSibling = 2;
constexpr int kStructRoot = 3;

inline int structure_type(const CompletePlan& cp, int node) {
  const int n = cp.num_tables();
  if (node == cp.root_node()) return kStructRoot;
  if (node < n) {
    // leaf: position 0 is the only left child among leaves
    return node == 0 ? kStructLeft : kStructRight;
  }
  return kStructLeft;  // non-root join is the left child of the join above
}

inline int node_height(const CompletePlan& cp, int node) {
  const int n = cp.num_tables();
  return node < n ? 0 : node - n + 1;
}

// mask[i][j] = 1 iff i is an ancestor/descendant of j, or i == j
inline Eigen::MatrixXi reachability_mask(const CompletePlan& cp) {
  const int n = cp.num_tables();
  const int m = cp.num_nodes();
  Eigen::MatrixXi mask = Eigen::MatrixXi::Zero(m, m);
  auto set_pair = [&](int i, int j) { mask(i, j) = 1; mask(j, i) = 1; };
  for (int i = 0; i < m; ++i) mask(i, i) = 1;
  // leaf at position p feeds joins max(p-1, 0) .. n-2
  for (int p = 0; p < n; ++p)
    for (int j = std::max(p - 1, 0); j < n - 1; ++j)
      set_pair(cp.leaf_node(p), cp.join_node(j));
  // joins form a chain; every pair is ancestor-related
  for (int a = 0; a < n - 1; ++a)
    for (int b = a + 1; b < n - 1; ++b)
      set_pair(cp.join_node(a), cp.join_node(b));
  return mask;
}

// Feature layout per node (width fixed for a schema):
//   [0..3]   operator one-hot: HJ, MJ, NLJ, Scan
//   [4..4+n) table one-hot (schema table id; scan nodes only)
//   [..+E)   join-predicate indicator (join nodes: predicates closed by this join)
//   [+1]     log1p(estimated rows)
//   [+1]     height / 8
//   [+4]     structure-type one-hot
struct StateFeatures {
  Eigen::MatrixXd nodes;    // num_nodes x feature_width
  Eigen::MatrixXi mask;     // reachability
  double step_fraction = 0.0;
};

inline int feature_width(const SchemaSpec& schema) {
  return 4 + schema.num_tables() + schema.num_edges() + 1 + 1 + 4;
}

inline StateFeatures featurize(const SchemaSpec& schema, const JoinGraphQuery& query,
                               const CompletePlan& cp, int t, int maxsteps) {
  if (t < 0 || t > maxsteps) throw std::out_of_range("featurize: step out of range");
  const int n = cp.num_tables();
  const int width = feature_width(schema);
  StateFeatures sf;
  sf.nodes = Eigen::MatrixXd::Zero(cp.num_nodes(), width);
  sf.mask = reachability_mask(cp);
  sf.step_fraction = static_cast<double>(t) / static_cast<double>(maxsteps);

  const int off_table = 4;
  const int off_pred = off_table + schema.num_tables();
  const int off_rows = off_pred + schema.num_edges();
  const int off_height = off_rows + 1;
  const int off_struct = off_height + 1;

  for (int node = 0; node < cp.num_nodes(); ++node) {
    auto row = sf.nodes.row(node);
    if (node < n) {
      row(3) = 1.0;  // scan
      row(off_table + query.table_refs[cp.order[node]]) = 1.0;
    } else {
      const int j = node - n;
      row(static_cast<int>(cp.methods[j])) = 1.0;
      // predicates between the newly joined table and the prefix
      std::vector<bool> in_prefix(query.num_tables(), false);
      for (int p = 0; p <= j; ++p) in_prefix[cp.order[p]] = true;
      const int newcomer = cp.order[j + 1];
      for (std::size_t k = 0; k < query.predicate_edges.size(); ++k) {
        const auto& e = schema.join_edges[query.predicate_edges[k]];
        const int pa = query.ref_position(e.table_a);
        const int pb = query.ref_position(e.table_b);
        if ((pa == newcomer && in_prefix[pb]) || (pb == newcomer && in_prefix[pa]))
          row(off_pred + query.predicate_edges[k]) = 1.0;
      }
    }
    row(off_rows) = std::log1p(cp.node_rows[node]);
    row(off_height) = node_height(cp, node) / 8.0;
    row(off_struct + structure_type(cp, node)) = 1.0;
  }
  return sf;
}

}  // namespace foss
