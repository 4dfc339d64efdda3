// Command-line front end: generate / train / evaluate / oracle / inspect-plan.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "foss/config.hpp"
#include "foss/metrics.hpp"
#include "foss/serialize.hpp"
#include "foss/simloop.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  bool has_seed = false;
  std::uint64_t seed = 0;
};

foss::RunConfig resolve_config(const CliOptions& opt) {
  foss::RunConfig cfg;
  if (!opt.config_path.empty()) cfg = foss::load_config(opt.config_path);
  if (opt.has_seed) {
    cfg.schema_seed = opt.seed;
    cfg.workload_seed = foss::mix_seed(opt.seed, 0x5EEDULL);
    cfg.loop.seed = opt.seed;
    cfg.learner.seed = opt.seed;
    cfg.aam.seed = opt.seed;
  }
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  return cfg;
}

std::string path_in(const foss::RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

// Deterministic seeded holdout split: shuffle ids, take the tail fraction.
std::vector<int> holdout_split(const std::vector<foss::JoinGraphQuery>& workload,
                               double fraction, std::uint64_t seed) {
  std::vector<int> ids;
  for (const auto& q : workload) ids.push_back(q.query_id);
  foss::Rng rng(foss::mix_seed(seed, 0x8020ULL));
  for (int i = static_cast<int>(ids.size()) - 1; i > 0; --i)
    std::swap(ids[i], ids[rng.next_int(0, i)]);
  const auto n_hold = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(ids.size())));
  std::vector<int> holdout(ids.end() - static_cast<long>(n_hold), ids.end());
  std::sort(holdout.begin(), holdout.end());
  return holdout;
}

struct LoadedWorkload {
  foss::SchemaSpec schema;
  std::vector<foss::JoinGraphQuery> workload;
  std::vector<int> holdout_ids;
};

LoadedWorkload load_workload(const foss::RunConfig& cfg) {
  LoadedWorkload lw;
  lw.schema = foss::schema_from_json(foss::read_json_file(path_in(cfg, "schema.json")));
  lw.workload = foss::workload_from_json(
      foss::read_json_file(path_in(cfg, "workload.json")), &lw.holdout_ids);
  return lw;
}

void split_queries(const LoadedWorkload& lw, std::vector<foss::JoinGraphQuery>& train,
                   std::vector<foss::JoinGraphQuery>& holdout) {
  for (const auto& q : lw.workload) {
    const bool held = std::find(lw.holdout_ids.begin(), lw.holdout_ids.end(),
                                q.query_id) != lw.holdout_ids.end();
    (held ? holdout : train).push_back(q);
  }
}

int cmd_generate(const CliOptions& opt) {
  const foss::RunConfig cfg = resolve_config(opt);
  fs::create_directories(cfg.out_dir);
  const foss::SchemaSpec schema =
      foss::generate_schema(cfg.schema_seed, cfg.n_tables, cfg.row_min, cfg.row_max);
  const auto workload =
      foss::generate_workload(schema, cfg.workload_seed, cfg.n_queries,
                              cfg.tables_min, cfg.tables_max, cfg.sigma_est);
  const auto holdout = holdout_split(workload, cfg.holdout_fraction, cfg.workload_seed);
  foss::write_json_file(path_in(cfg, "schema.json"), foss::schema_to_json(schema));
  foss::write_json_file(path_in(cfg, "workload.json"),
                        foss::workload_to_json(workload, holdout));
  std::cout << "generated " << schema.num_tables() << " tables, "
            << workload.size() << " queries (" << holdout.size()
            << " held out) into " << cfg.out_dir << "\n";
  return 0;
}

int cmd_train(const CliOptions& opt) {
  const foss::RunConfig cfg = resolve_config(opt);
  const LoadedWorkload lw = load_workload(cfg);
  std::vector<foss::JoinGraphQuery> train, holdout;
  split_queries(lw, train, holdout);

  foss::SimulatedLearner learner(lw.schema, train, holdout, cfg.cost, cfg.exec,
                                 cfg.disc, cfg.reward, cfg.aam, cfg.learner, cfg.loop);
  const auto report = learner.run();

  learner.buffer().save(path_in(cfg, "executions.jsonl"));
  foss::write_json_file(path_in(cfg, "aam.params.json"),
                        foss::aam_params_to_json(learner.aam()));
  foss::write_json_file(path_in(cfg, "agent.params.json"),
                        foss::policy_params_to_json(learner.policy()));

  json j;
  j["version"] = 1;
  j["iterations"] = json::array();
  for (const auto& m : report) {
    j["iterations"].push_back({{"iteration", m.iteration},
                               {"wrl_train", m.wrl_train},
                               {"gmrl_train", m.gmrl_train},
                               {"wrl_holdout", m.wrl_holdout},
                               {"gmrl_holdout", m.gmrl_holdout},
                               {"buffer_size", m.buffer_size},
                               {"aam_accuracy", m.aam_accuracy}});
  }
  foss::write_json_file(path_in(cfg, "train_report.json"), j);
  for (const auto& m : report)
    std::cout << "iteration " << m.iteration << ": wrl_train=" << m.wrl_train
              << " wrl_holdout=" << m.wrl_holdout
              << " buffer=" << m.buffer_size << "\n";
  return 0;
}

int cmd_evaluate(const CliOptions& opt) {
  const foss::RunConfig cfg = resolve_config(opt);
  const LoadedWorkload lw = load_workload(cfg);
  std::vector<foss::JoinGraphQuery> train, holdout;
  split_queries(lw, train, holdout);

  const int width = foss::feature_width(lw.schema);
  foss::AamParams aam = foss::AamParams::make(width, cfg.aam);
  foss::PolicyParams policy = foss::PolicyParams::make(
      width, foss::num_actions(lw.schema.num_tables()), cfg.aam.embed_dim,
      cfg.aam.state_dim, cfg.loop.seed);
  const std::string aam_path = path_in(cfg, "aam.params.json");
  const std::string agent_path = path_in(cfg, "agent.params.json");
  if (fs::exists(aam_path))
    aam = foss::aam_params_from_json(foss::read_json_file(aam_path));
  if (fs::exists(agent_path))
    policy = foss::policy_params_from_json(foss::read_json_file(agent_path));

  foss::ExecutionBuffer buffer;
  const std::string exec_path = path_in(cfg, "executions.jsonl");
  if (fs::exists(exec_path)) buffer = foss::ExecutionBuffer::load(exec_path);

  foss::QueryTrackers trackers(lw.schema, cfg.cost, cfg.exec, cfg.reward.maxsteps);
  // replay recorded executions so the known/perceived-best trackers reflect
  // everything the training run discovered (validation runs move both)
  for (const auto& q : lw.workload) {
    if (buffer.for_query(q.query_id).empty()) continue;
    trackers.ensure(q);
    for (const auto& rec : buffer.for_query(q.query_id))
      trackers.note_execution(rec.query_id, rec.icp, rec.latency, rec.censored,
                              rec.step_index,
                              rec.source == foss::RecordSource::Validation);
  }

  json j;
  j["version"] = 1;
  json rows = json::array();
  json known_best = json::array();
  auto eval_split = [&](const std::vector<foss::JoinGraphQuery>& queries,
                        const std::string& split, double& wrl_out, double& gmrl_out) {
    std::vector<double> learned, expert;
    for (const auto& q : queries) {
      trackers.ensure(q);
      const foss::IncompletePlan chosen =
          foss::choose_plan(lw.schema, lw.workload, q, cfg.cost, cfg.exec, cfg.disc,
                            cfg.reward, trackers, policy, aam);
      const double lat = foss::execute(lw.schema, q, chosen, cfg.exec).latency;
      const double exp_lat = trackers.get(q.query_id).u_orig;
      learned.push_back(lat);
      expert.push_back(exp_lat);
      rows.push_back({{"query_id", q.query_id},
                      {"split", split},
                      {"plan", foss::icp_to_json(chosen)},
                      {"learned_latency", lat},
                      {"expert_latency", exp_lat},
                      {"ratio", lat / exp_lat}});

      // known-best table: best uncensored execution seen for this query
      double best_lat = trackers.get(q.query_id).u_orig;
      int best_step = 0;
      foss::IncompletePlan best_icp = trackers.get(q.query_id).orig_icp;
      for (const auto& rec : buffer.for_query(q.query_id)) {
        if (rec.censored || rec.latency >= best_lat) continue;
        best_lat = rec.latency;
        best_step = rec.step_index;
        best_icp = rec.icp;
      }
      known_best.push_back({{"query_id", q.query_id},
                            {"split", split},
                            {"plan", foss::icp_to_json(best_icp)},
                            {"latency", best_lat},
                            {"steps", best_step}});
    }
    wrl_out = foss::wrl(learned, expert);
    gmrl_out = foss::gmrl(learned, expert);
  };

  double wrl_train = 1.0, gmrl_train = 1.0, wrl_holdout = 1.0, gmrl_holdout = 1.0;
  if (!train.empty()) eval_split(train, "train", wrl_train, gmrl_train);
  if (!holdout.empty()) eval_split(holdout, "holdout", wrl_holdout, gmrl_holdout);
  j["wrl_train"] = wrl_train;
  j["gmrl_train"] = gmrl_train;
  j["wrl_holdout"] = wrl_holdout;
  j["gmrl_holdout"] = gmrl_holdout;
  j["queries"] = rows;
  j["known_best"] = known_best;
  foss::write_json_file(path_in(cfg, "metrics.json"), j);
  std::cout << "wrl_train=" << wrl_train << " gmrl_train=" << gmrl_train
            << " wrl_holdout=" << wrl_holdout << " gmrl_holdout=" << gmrl_holdout
            << "\n";
  return 0;
}

int cmd_oracle(const CliOptions& opt, int maxsteps) {
  const foss::RunConfig cfg = resolve_config(opt);
  const LoadedWorkload lw = load_workload(cfg);
  const int steps = maxsteps > 0 ? maxsteps : cfg.reward.maxsteps;
  json j;
  j["version"] = 1;
  j["maxsteps"] = steps;
  json rows = json::array();
  for (const auto& q : lw.workload) {
    const auto opt_plan =
        foss::reachable_optimum(lw.schema, q, cfg.cost, cfg.exec, steps);
    const double expert =
        foss::execute(lw.schema, q,
                      foss::extract_icp(foss::optimize(lw.schema, q, cfg.cost)),
                      cfg.exec).latency;
    rows.push_back({{"query_id", q.query_id},
                    {"plan", foss::icp_to_json(opt_plan.icp)},
                    {"latency", opt_plan.latency},
                    {"expert_latency", expert},
                    {"steps", opt_plan.steps},
                    {"states_visited", opt_plan.states_visited}});
    std::cout << "query " << q.query_id << ": latency " << opt_plan.latency
              << " (expert " << expert << ") in " << opt_plan.steps
              << " steps\n";
  }
  j["queries"] = rows;
  foss::write_json_file(path_in(cfg, "oracle.json"), j);
  return 0;
}

int cmd_inspect_plan(const CliOptions& opt, int query_id) {
  const foss::RunConfig cfg = resolve_config(opt);
  const LoadedWorkload lw = load_workload(cfg);
  const foss::JoinGraphQuery* query = nullptr;
  for (const auto& q : lw.workload)
    if (q.query_id == query_id) query = &q;
  if (query == nullptr)
    throw std::out_of_range("inspect-plan: unknown query id " +
                            std::to_string(query_id));

  const foss::CompletePlan cp = foss::optimize(lw.schema, *query, cfg.cost);
  const foss::IncompletePlan icp = foss::extract_icp(cp);
  const int n_q = static_cast<int>(icp.order.size());

  std::cout << "query " << query_id << " (" << n_q << " tables)\n";
  std::cout << "order:";
  for (int pos : icp.order)
    std::cout << " " << lw.schema.tables[query->table_refs[pos]].name;
  std::cout << "\nmethods:";
  for (auto m : icp.methods) std::cout << " " << foss::join_method_name(m);
  std::cout << "\nestimated cost: " << cp.total_cost << "\n";
  for (int node = 0; node < 2 * n_q - 1; ++node) {
    const bool leaf = node < n_q;
    std::cout << (leaf ? "  scan " : "  join ") << node << ": rows "
              << cp.node_rows[node] << ", cost " << cp.node_cost[node] << "\n";
  }
  const foss::StateFeatures sf =
      foss::featurize(lw.schema, *query, cp, 0, cfg.reward.maxsteps);
  std::cout << "feature width " << sf.nodes.cols() << ", step fraction "
            << sf.step_fraction << "\n";
  std::cout << foss::plan_to_json(cp).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learned join-order sandbox"};
  app.require_subcommand(1);

  CliOptions opt;
  app.add_option("--config", opt.config_path, "path to key=value config file");
  auto* seed_opt = app.add_option("--seed", opt.seed, "override run seeds");
  app.add_option("--out", opt.out_dir, "output directory");

  auto* generate = app.add_subcommand("generate", "write schema.json and workload.json");
  auto* train = app.add_subcommand("train", "run the learning loop, write checkpoints");
  auto* evaluate = app.add_subcommand("evaluate", "score checkpoints, write metrics.json");
  auto* oracle = app.add_subcommand("oracle", "exhaustive reachable-optimum table");
  int maxsteps = 0;
  oracle->add_option("--maxsteps", maxsteps, "edit budget (default: config maxsteps)");
  auto* inspect = app.add_subcommand("inspect-plan", "pretty-print one expert plan");
  int query_id = 0;
  inspect->add_option("--query", query_id, "query id to inspect");

  // global flags may follow the subcommand
  for (auto* sub : {generate, train, evaluate, oracle, inspect}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << "\n";
    std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
    return 2;
  }
  opt.has_seed = seed_opt->count() > 0;

  try {
    if (generate->parsed()) return cmd_generate(opt);
    if (train->parsed()) return cmd_train(opt);
    if (evaluate->parsed()) return cmd_evaluate(opt);
    if (oracle->parsed()) return cmd_oracle(opt, maxsteps);
    if (inspect->parsed()) return cmd_inspect_plan(opt, query_id);
  } catch (const std::exception& e) {
    std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
    return 1;
  }
  return 2;
}
