#include <catch2/catch_amalgamated.hpp>

#include "foss/expert.hpp"
#include "foss/plan.hpp"

using namespace foss;

namespace {

// chain schema a-b-c-d with unit-ish numbers, easy to reason about
SchemaSpec chain_schema() {
  SchemaSpec s;
  s.tables = {{"a", 100}, {"b", 200}, {"c", 400}, {"d", 800}};
  s.join_edges = {{0, 1, 0.01}, {1, 2, 0.005}, {2, 3, 0.002}};
  return s;
}

JoinGraphQuery full_query(const SchemaSpec& s) {
  JoinGraphQuery q;
  q.table_refs = {0, 1, 2, 3};
  q.predicate_edges = {0, 1, 2};
  q.filter_selectivity = {1.0, 1.0, 1.0, 1.0};
  q.table_error = {1.0, 1.0, 1.0, 1.0};
  q.edge_error = {1.0, 1.0, 1.0};
  return q;
}

}  // namespace

TEST_CASE("extract_icp keeps skeleton and drops annotations") {
  const SchemaSpec s = chain_schema();
  const JoinGraphQuery q = full_query(s);
  IncompletePlan icp;
  icp.order = {0, 1, 2, 3};
  icp.methods = {JoinMethod::Hash, JoinMethod::Merge, JoinMethod::NestedLoop};
  const CompletePlan cp = complete(s, q, icp, CostModel{});
  REQUIRE(cp.num_nodes() == 7);
  CHECK(cp.methods.size() == 3);  // four-table plan carries three methods
  const IncompletePlan back = extract_icp(cp);
  CHECK(back == icp);
}

TEST_CASE("two-table plan is the smallest case") {
  SchemaSpec s;
  s.tables = {{"a", 10}, {"b", 20}};
  s.join_edges = {{0, 1, 0.1}};
  JoinGraphQuery q;
  q.table_refs = {0, 1};
  q.predicate_edges = {0};
  q.filter_selectivity = {1.0, 1.0};
  q.table_error = {1.0, 1.0};
  q.edge_error = {1.0};
  IncompletePlan icp;
  icp.order = {0, 1};
  icp.methods = {JoinMethod::Hash};
  const CompletePlan cp = complete(s, q, icp, CostModel{});
  const IncompletePlan back = extract_icp(cp);
  CHECK(back.order == std::vector<int>{0, 1});
  CHECK(back.methods == std::vector<JoinMethod>{JoinMethod::Hash});
  // structure types: leaf0 left, leaf1 right, join is root
  CHECK(structure_type(cp, 0) == kStructLeft);
  CHECK(structure_type(cp, 1) == kStructRight);
  CHECK(structure_type(cp, 2) == kStructRoot);
}

TEST_CASE("node labeling follows positions") {
  IncompletePlan icp;
  icp.order = {2, 0, 1};
  icp.methods = {JoinMethod::Hash, JoinMethod::Hash};
  const NodeLabeling lab = label_nodes(icp);
  CHECK(lab.table_position(1) == 0);
  CHECK(lab.table_position(3) == 2);
  CHECK(lab.join_index(1) == 0);
  CHECK(lab.join_index(2) == 1);
  CHECK_THROWS_AS(lab.table_position(4), std::out_of_range);
  CHECK_THROWS_AS(lab.join_index(3), std::out_of_range);

  // relabeling after a swap: labels track positions, not table identities
  IncompletePlan swapped = icp;
  std::swap(swapped.order[0], swapped.order[2]);
  const NodeLabeling lab2 = label_nodes(swapped);
  CHECK(lab2.table_position(1) == 0);  // same position, different table there
  CHECK(swapped.order[lab2.table_position(1)] != icp.order[lab.table_position(1)]);
}

TEST_CASE("heights and structure types on a four-table plan") {
  const SchemaSpec s = chain_schema();
  const JoinGraphQuery q = full_query(s);
  IncompletePlan icp;
  icp.order = {0, 1, 2, 3};
  icp.methods = {JoinMethod::Hash, JoinMethod::Hash, JoinMethod::Hash};
  const CompletePlan cp = complete(s, q, icp, CostModel{});
  for (int p = 0; p < 4; ++p) CHECK(node_height(cp, cp.leaf_node(p)) == 0);
  CHECK(node_height(cp, cp.join_node(0)) == 1);
  CHECK(node_height(cp, cp.join_node(2)) == 3);
  CHECK(structure_type(cp, cp.leaf_node(0)) == kStructLeft);
  CHECK(structure_type(cp, cp.leaf_node(2)) == kStructRight);
  CHECK(structure_type(cp, cp.join_node(0)) == kStructLeft);
  CHECK(structure_type(cp, cp.join_node(2)) == kStructRoot);
}

TEST_CASE("reachability mask relates exactly ancestor pairs") {
  const SchemaSpec s = chain_schema();
  const JoinGraphQuery q = full_query(s);
  IncompletePlan icp;
  icp.order = {0, 1, 2, 3};
  icp.methods = {JoinMethod::Hash, JoinMethod::Hash, JoinMethod::Hash};
  const CompletePlan cp = complete(s, q, icp, CostModel{});
  const Eigen::MatrixXi mask = reachability_mask(cp);
  REQUIRE(mask.rows() == 7);
  CHECK(mask == mask.transpose().eval());
  for (int i = 0; i < 7; ++i) CHECK(mask(i, i) == 1);
  // leaves are never mutually reachable
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) CHECK(mask(a, b) == 0);
  // leaf at position p feeds joins max(p-1,0)..n-2 and nothing below
  CHECK(mask(cp.leaf_node(0), cp.join_node(0)) == 1);
  CHECK(mask(cp.leaf_node(3), cp.join_node(2)) == 1);
  CHECK(mask(cp.leaf_node(3), cp.join_node(0)) == 0);
  CHECK(mask(cp.leaf_node(3), cp.join_node(1)) == 0);
  // joins chain together
  CHECK(mask(cp.join_node(0), cp.join_node(2)) == 1);
}

TEST_CASE("featurize encodes step fraction and per-node layout") {
  const SchemaSpec s = chain_schema();
  const JoinGraphQuery q = full_query(s);
  IncompletePlan icp;
  icp.order = {0, 1, 2, 3};
  icp.methods = {JoinMethod::Merge, JoinMethod::Hash, JoinMethod::NestedLoop};
  const CompletePlan cp = complete(s, q, icp, CostModel{});

  const StateFeatures s0 = featurize(s, q, cp, 0, 3);
  const StateFeatures s3 = featurize(s, q, cp, 3, 3);
  CHECK(s0.step_fraction == 0.0);
  CHECK(s3.step_fraction == 1.0);
  CHECK_THROWS_AS(featurize(s, q, cp, -1, 3), std::out_of_range);
  CHECK_THROWS_AS(featurize(s, q, cp, 4, 3), std::out_of_range);

  REQUIRE(s0.nodes.cols() == feature_width(s));
  REQUIRE(s0.nodes.rows() == 7);
  // scan node: operator one-hot slot 3, table one-hot at the schema id
  CHECK(s0.nodes(0, 3) == 1.0);
  CHECK(s0.nodes(0, 4 + 0) == 1.0);
  // join node 0 uses MJ (slot 1) and closes predicate edge 0
  const int off_pred = 4 + s.num_tables();
  CHECK(s0.nodes(4, 1) == 1.0);
  CHECK(s0.nodes(4, off_pred + 0) == 1.0);
  CHECK(s0.nodes(4, off_pred + 1) == 0.0);
  // rows feature is log1p of node rows
  const int off_rows = off_pred + s.num_edges();
  CHECK(s0.nodes(0, off_rows) == std::log1p(cp.node_rows[0]));
  // deterministic
  const StateFeatures again = featurize(s, q, cp, 0, 3);
  CHECK(s0.nodes == again.nodes);
  CHECK(s0.mask == again.mask);
}
