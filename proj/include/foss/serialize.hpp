#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "foss/catalog.hpp"
#include "foss/plan.hpp"

namespace foss {

inline nlohmann::json schema_to_json(const SchemaSpec& schema) {
  nlohmann::json j;
  j["version"] = 1;
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : schema.tables)
    tables.push_back({{"name", t.name}, {"row_count", t.row_count}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : schema.join_edges)
    edges.push_back({{"table_a", e.table_a},
                     {"table_b", e.table_b},
                     {"true_selectivity", e.true_selectivity}});
  j["tables"] = tables;
  j["join_edges"] = edges;
  return j;
}

inline SchemaSpec schema_from_json(const nlohmann::json& j) {
  SchemaSpec schema;
  for (const auto& t : j.at("tables"))
    schema.tables.push_back({t.at("name").get<std::string>(),
                             t.at("row_count").get<std::int64_t>()});
  for (const auto& e : j.at("join_edges"))
    schema.join_edges.push_back({e.at("table_a").get<int>(),
                                 e.at("table_b").get<int>(),
                                 e.at("true_selectivity").get<double>()});
  return schema;
}

inline nlohmann::json query_to_json(const JoinGraphQuery& q) {
  nlohmann::json j;
  j["query_id"] = q.query_id;
  j["table_refs"] = q.table_refs;
  j["predicate_edges"] = q.predicate_edges;
  j["filter_selectivity"] = q.filter_selectivity;
  j["table_error"] = q.table_error;
  j["edge_error"] = q.edge_error;
  return j;
}

inline JoinGraphQuery query_from_json(const nlohmann::json& j) {
  JoinGraphQuery q;
  q.query_id = j.at("query_id").get<int>();
  q.table_refs = j.at("table_refs").get<std::vector<int>>();
  q.predicate_edges = j.at("predicate_edges").get<std::vector<int>>();
  q.filter_selectivity = j.at("filter_selectivity").get<std::vector<double>>();
  q.table_error = j.at("table_error").get<std::vector<double>>();
  q.edge_error = j.at("edge_error").get<std::vector<double>>();
  return q;
}

inline nlohmann::json workload_to_json(const std::vector<JoinGraphQuery>& workload,
                                       const std::vector<int>& holdout_ids = {}) {
  nlohmann::json j;
  j["version"] = 1;
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& q : workload) queries.push_back(query_to_json(q));
  j["queries"] = queries;
  j["holdout_query_ids"] = holdout_ids;
  return j;
}

inline std::vector<JoinGraphQuery> workload_from_json(const nlohmann::json& j,
                                                      std::vector<int>* holdout_ids = nullptr) {
  std::vector<JoinGraphQuery> workload;
  for (const auto& q : j.at("queries")) workload.push_back(query_from_json(q));
  if (holdout_ids && j.contains("holdout_query_ids"))
    *holdout_ids = j.at("holdout_query_ids").get<std::vector<int>>();
  return workload;
}

inline nlohmann::json icp_to_json(const IncompletePlan& icp) {
  nlohmann::json j;
  j["query_id"] = icp.query_id;
  j["order"] = icp.order;
  std::vector<int> methods;
  for (auto m : icp.methods) methods.push_back(static_cast<int>(m));
  j["methods"] = methods;
  return j;
}

inline IncompletePlan icp_from_json(const nlohmann::json& j) {
  IncompletePlan icp;
  icp.query_id = j.at("query_id").get<int>();
  icp.order = j.at("order").get<std::vector<int>>();
  for (int m : j.at("methods").get<std::vector<int>>())
    icp.methods.push_back(static_cast<JoinMethod>(m));
  return icp;
}

inline nlohmann::json plan_to_json(const CompletePlan& cp) {
  nlohmann::json j = icp_to_json(extract_icp(cp));
  j["node_rows"] = cp.node_rows;
  j["node_cost"] = cp.node_cost;
  j["total_cost"] = cp.total_cost;
  return j;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace foss
