#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "foss/rng.hpp"

namespace foss {

struct TableSpec {
  std::string name;
  std::int64_t row_count = 0;
};

struct JoinEdge {
  int table_a = -1;
  int table_b = -1;
  double true_selectivity = 1.0;  // in (0, 1]
};

struct SchemaSpec {
  std::vector<TableSpec> tables;
  std::vector<JoinEdge> join_edges;

  int num_tables() const { return static_cast<int>(tables.size()); }
  int num_edges() const { return static_cast<int>(join_edges.size()); }

  // index of the edge between a and b, or -1
  int edge_between(int a, int b) const {
    for (int e = 0; e < num_edges(); ++e) {
      const auto& ed = join_edges[e];
      if ((ed.table_a == a && ed.table_b == b) ||
          (ed.table_a == b && ed.table_b == a))
        return e;
    }
    return -1;
  }
};

// A query over a connected subset of the schema's tables. Estimation error
// factors are drawn once at generation time so the expert optimizer is
// consistently (not randomly) miscalibrated.
struct JoinGraphQuery {
  int query_id = 0;
  std::vector<int> table_refs;             // schema table ids, n_q entries
  std::vector<int> predicate_edges;        // schema edge ids internal to table_refs
  std::vector<double> filter_selectivity;  // parallel to table_refs
  std::vector<double> table_error;         // multiplicative, parallel to table_refs
  std::vector<double> edge_error;          // multiplicative, parallel to predicate_edges

  int num_tables() const { return static_cast<int>(table_refs.size()); }

  // position of a schema table id inside table_refs, or -1
  int ref_position(int table_id) const {
    for (int i = 0; i < num_tables(); ++i)
      if (table_refs[i] == table_id) return i;
    return -1;
  }
};

enum class CardMode { True, Estimated };

inline SchemaSpec generate_schema(std::uint64_t seed, int n_tables,
                                  std::int64_t row_min, std::int64_t row_max) {
  if (n_tables < 2) throw std::invalid_argument("generate_schema: n_tables must be >= 2");
  if (row_min < 1 || row_max < row_min)
    throw std::invalid_argument("generate_schema: invalid row range");

  Rng rng(mix_seed(seed, 0xabcdULL));
  SchemaSpec schema;
  schema.tables.reserve(n_tables);
  for (int i = 0; i < n_tables; ++i) {
    TableSpec t;
    t.name = "t" + std::to_string(i);
    // log-uniform row counts so large/small tables mix
    const double lo = std::log(static_cast<double>(row_min));
    const double hi = std::log(static_cast<double>(row_max));
    t.row_count = static_cast<std::int64_t>(
        std::llround(std::exp(lo + (hi - lo) * rng.next_double())));
    t.row_count = std::clamp(t.row_count, row_min, row_max);
    schema.tables.push_back(t);
  }

  auto draw_selectivity = [&](int a, int b) {
    // log-uniform between 1/sqrt(Ra*Rb) (floored) and 1
    const double ra = static_cast<double>(schema.tables[a].row_count);
    const double rb = static_cast<double>(schema.tables[b].row_count);
    const double floor_sel = std::max(1e-6, 1.0 / std::sqrt(ra * rb));
    const double lo = std::log(floor_sel);
    return std::exp(lo * rng.next_double());
  };

  // random spanning tree keeps the join graph connected
  std::vector<int> order(n_tables);
  for (int i = 0; i < n_tables; ++i) order[i] = i;
  for (int i = n_tables - 1; i > 0; --i)
    std::swap(order[i], order[rng.next_int(0, i)]);
  for (int i = 1; i < n_tables; ++i) {
    const int a = order[i];
    const int b = order[rng.next_int(0, i - 1)];
    schema.join_edges.push_back({std::min(a, b), std::max(a, b), draw_selectivity(a, b)});
  }
  // extra edges
  for (int a = 0; a < n_tables; ++a)
    for (int b = a + 1; b < n_tables; ++b) {
      if (schema.edge_between(a, b) >= 0) continue;
      if (rng.next_double() < 0.3)
        schema.join_edges.push_back({a, b, draw_selectivity(a, b)});
    }
  return schema;
}

namespace detail {

// connected component check over a subset of table ids
inline bool subset_connected(const SchemaSpec& schema, const std::vector<int>& tables) {
  if (tables.empty()) return false;
  std::vector<int> stack{tables[0]};
  std::vector<bool> seen(schema.num_tables(), false);
  std::vector<bool> in_set(schema.num_tables(), false);
  for (int t : tables) in_set[t] = true;
  seen[tables[0]] = true;
  int count = 1;
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    for (const auto& e : schema.join_edges) {
      int other = -1;
      if (e.table_a == cur) other = e.table_b;
      else if (e.table_b == cur) other = e.table_a;
      if (other >= 0 && in_set[other] && !seen[other]) {
        seen[other] = true;
        ++count;
        stack.push_back(other);
      }
    }
  }
  return count == static_cast<int>(tables.size());
}

}  // namespace detail

inline std::vector<JoinGraphQuery> generate_workload(
    const SchemaSpec& schema, std::uint64_t seed, int n_queries,
    int tables_min, int tables_max, double sigma_est) {
  if (tables_min < 2) throw std::invalid_argument("generate_workload: tables_min must be >= 2");
  if (tables_max < tables_min)
    throw std::invalid_argument("generate_workload: tables_max < tables_min");
  if (tables_max > schema.num_tables())
    throw std::invalid_argument("generate_workload: tables_max exceeds schema size");
  if (sigma_est < 0) throw std::invalid_argument("generate_workload: sigma_est < 0");

  std::vector<JoinGraphQuery> workload;
  workload.reserve(n_queries);
  Rng pick(mix_seed(seed, 0x77a5ULL));
  for (int qid = 0; qid < n_queries; ++qid) {
    const int want = static_cast<int>(pick.next_int(tables_min, tables_max));
    // grow a connected subset by walking schema edges; retry on dead ends
    std::vector<int> refs;
    for (int attempt = 0; attempt < 1000 && static_cast<int>(refs.size()) != want; ++attempt) {
      refs.clear();
      refs.push_back(static_cast<int>(pick.next_int(0, schema.num_tables() - 1)));
      while (static_cast<int>(refs.size()) < want) {
        std::vector<int> frontier;
        for (const auto& e : schema.join_edges) {
          const bool a_in = std::find(refs.begin(), refs.end(), e.table_a) != refs.end();
          const bool b_in = std::find(refs.begin(), refs.end(), e.table_b) != refs.end();
          if (a_in != b_in) frontier.push_back(a_in ? e.table_b : e.table_a);
        }
        if (frontier.empty()) break;
        refs.push_back(frontier[pick.next_int(0, static_cast<int>(frontier.size()) - 1)]);
      }
    }
    if (static_cast<int>(refs.size()) != want)
      throw std::runtime_error("generate_workload: no connected subset of requested size");
    std::sort(refs.begin(), refs.end());

    JoinGraphQuery q;
    q.query_id = qid;
    q.table_refs = refs;
    for (int e = 0; e < schema.num_edges(); ++e) {
      const auto& ed = schema.join_edges[e];
      if (std::find(refs.begin(), refs.end(), ed.table_a) != refs.end() &&
          std::find(refs.begin(), refs.end(), ed.table_b) != refs.end())
        q.predicate_edges.push_back(e);
    }
    // per-query stream so factors are reproducible from (seed, query_id)
    Rng qrng(mix_seed(seed, static_cast<std::uint64_t>(qid) + 0x51edULL));
    for (std::size_t i = 0; i < refs.size(); ++i) {
      q.filter_selectivity.push_back(std::exp(std::log(0.05) * qrng.next_double()));
      q.table_error.push_back(std::exp(sigma_est * qrng.next_normal()));
    }
    for (std::size_t i = 0; i < q.predicate_edges.size(); ++i)
      q.edge_error.push_back(std::exp(sigma_est * qrng.next_normal()));
    workload.push_back(std::move(q));
  }
  return workload;
}

// Selectivity-product cardinality for a subset of the query's tables.
// subset holds positions into query.table_refs.
inline double cardinality(const SchemaSpec& schema, const JoinGraphQuery& query,
                          const std::vector<int>& subset_positions, CardMode mode) {
  if (subset_positions.empty())
    throw std::invalid_argument("cardinality: empty subset");
  // canonical factor order so the product is bit-identical however the
  // subset was assembled
  std::vector<int> positions = subset_positions;
  std::sort(positions.begin(), positions.end());
  std::vector<bool> in_subset(query.num_tables(), false);
  double rows = 1.0;
  for (int pos : positions) {
    if (pos < 0 || pos >= query.num_tables())
      throw std::invalid_argument("cardinality: unknown table position");
    in_subset[pos] = true;
    const int tid = query.table_refs[pos];
    rows *= static_cast<double>(schema.tables[tid].row_count) *
            query.filter_selectivity[pos];
    if (mode == CardMode::Estimated) rows *= query.table_error[pos];
  }
  for (std::size_t i = 0; i < query.predicate_edges.size(); ++i) {
    const auto& e = schema.join_edges[query.predicate_edges[i]];
    const int pa = query.ref_position(e.table_a);
    const int pb = query.ref_position(e.table_b);
    if (in_subset[pa] && in_subset[pb]) {
      rows *= e.true_selectivity;
      if (mode == CardMode::Estimated) rows *= query.edge_error[i];
    }
  }
  return rows;
}

}  // namespace foss
