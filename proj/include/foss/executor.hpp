#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "foss/expert.hpp"
#include "foss/rng.hpp"

namespace foss {

enum class RecordSource { Exploration = 0, Validation = 1 };

struct ExecutionRecord {
  int query_id = 0;
  IncompletePlan icp;
  double latency = 0.0;   // censored records carry the threshold exactly
  bool censored = false;
  RecordSource source = RecordSource::Exploration;
  int step_index = 0;     // edits from the original plan (0 = original)
  std::int64_t timestamp = 0;
};

struct ExecutorConfig {
  CostModel cost;
  double sigma_latency = 0.0;  // optional log-normal noise, off by default
  std::uint64_t noise_seed = 0;
};

// True latency = total plan cost under TRUE cardinalities. A simulation in
// ms-equivalent units, so acceptance checks can be exact.
inline ExecutionRecord execute(const SchemaSpec& schema, const JoinGraphQuery& query,
                               const IncompletePlan& icp, const ExecutorConfig& cfg,
                               std::optional<double> timeout = std::nullopt,
                               RecordSource source = RecordSource::Exploration,
                               int step_index = 0) {
  const CompletePlan true_cp = cost_plan(schema, query, icp, cfg.cost, CardMode::True);
  double latency = true_cp.total_cost;
  if (cfg.sigma_latency > 0.0) {
    Rng noise(mix_seed(cfg.noise_seed, mix_seed(query.query_id, icp.order.empty() ? 0 : icp.order[0])));
    latency *= std::exp(cfg.sigma_latency * noise.next_normal());
  }
  ExecutionRecord rec;
  rec.query_id = query.query_id;
  rec.icp = icp;
  rec.source = source;
  rec.step_index = step_index;
  if (timeout.has_value() && latency > *timeout) {
    rec.latency = *timeout;
    rec.censored = true;
  } else {
    rec.latency = latency;
    rec.censored = false;
  }
  return rec;
}

inline nlohmann::json record_to_json(const ExecutionRecord& r) {
  nlohmann::json j;
  j["query_id"] = r.query_id;
  j["order"] = r.icp.order;
  std::vector<int> methods;
  for (auto m : r.icp.methods) methods.push_back(static_cast<int>(m));
  j["methods"] = methods;
  j["latency"] = r.latency;
  j["censored"] = r.censored;
  j["source"] = r.source == RecordSource::Exploration ? "exploration" : "validation";
  j["step_index"] = r.step_index;
  j["timestamp"] = r.timestamp;
  return j;
}

inline ExecutionRecord record_from_json(const nlohmann::json& j) {
  ExecutionRecord r;
  r.query_id = j.at("query_id").get<int>();
  r.icp.query_id = r.query_id;
  r.icp.order = j.at("order").get<std::vector<int>>();
  for (int m : j.at("methods").get<std::vector<int>>())
    r.icp.methods.push_back(static_cast<JoinMethod>(m));
  r.latency = j.at("latency").get<double>();
  r.censored = j.at("censored").get<bool>();
  r.source = j.at("source").get<std::string>() == "validation"
                 ? RecordSource::Validation
                 : RecordSource::Exploration;
  r.step_index = j.at("step_index").get<int>();
  r.timestamp = j.at("timestamp").get<std::int64_t>();
  return r;
}

// Append-only store of execution records, persisted as JSON-lines.
class ExecutionBuffer {
 public:
  const ExecutionRecord& append(ExecutionRecord rec) {
    rec.timestamp = next_timestamp_++;
    records_.push_back(std::move(rec));
    by_query_[records_.back().query_id].push_back(records_.size() - 1);
    return records_.back();
  }

  std::size_t size() const { return records_.size(); }
  const std::vector<ExecutionRecord>& records() const { return records_; }

  std::vector<ExecutionRecord> for_query(int query_id) const {
    std::vector<ExecutionRecord> out;
    auto it = by_query_.find(query_id);
    if (it == by_query_.end()) return out;
    for (std::size_t idx : it->second) out.push_back(records_[idx]);
    return out;
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("ExecutionBuffer: cannot open " + path);
    for (const auto& r : records_) out << record_to_json(r).dump() << "\n";
    if (!out) throw std::runtime_error("ExecutionBuffer: write failed for " + path);
  }

  static ExecutionBuffer load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ExecutionBuffer: cannot open " + path);
    ExecutionBuffer buf;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      ExecutionRecord r = record_from_json(nlohmann::json::parse(line));
      buf.records_.push_back(r);
      buf.by_query_[r.query_id].push_back(buf.records_.size() - 1);
      buf.next_timestamp_ = std::max(buf.next_timestamp_, r.timestamp + 1);
    }
    return buf;
  }

 private:
  std::vector<ExecutionRecord> records_;
  std::map<int, std::vector<std::size_t>> by_query_;
  std::int64_t next_timestamp_ = 0;
};

}  // namespace foss
