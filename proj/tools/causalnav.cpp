// causalnav command-line front end.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causalnav.hpp"

namespace fs = std::filesystem;
using namespace causalnav;
using jsonutil::Json;

#ifndef CAUSALNAV_DATA_DIR
#define CAUSALNAV_DATA_DIR "."
#endif

namespace {

struct Common {
  std::string profile = "desk";
  std::string params_file;
  std::string scenario_file;
  int verbosity = 0;

  void add_to(CLI::App* app, bool with_scenario = true) {
    app->add_option("--profile", profile, "Built-in parameter profile")->check(CLI::IsMember({"desk", "full"}));
    app->add_option("--params", params_file, "Parameters document (overrides --profile)")->check(CLI::ExistingFile);
    if (with_scenario) app->add_option("--scenario", scenario_file, "Scenario document")->check(CLI::ExistingFile);
    app->add_flag("-v,--verbose", verbosity, "More logging (repeat for debug)");
  }

  Parameters parameters() const {
    return params_file.empty() ? profile_parameters(profile) : load_parameters(params_file);
  }

  Scenario scenario(const Parameters& p) const {
    if (!scenario_file.empty()) return load_scenario_file(scenario_file);
    const std::string name = p.profile == "full" ? "warehouse73.json" : "desk20.json";
    return load_scenario_file((fs::path(CAUSALNAV_DATA_DIR) / "scenarios" / name).string());
  }

  void apply_logging() const {
    if (verbosity == 1) log().set_level(spdlog::level::info);
    if (verbosity >= 2) log().set_level(spdlog::level::debug);
  }
};

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& part : csv::split(text, ',')) {
    const auto dash = part.find('-');
    try {
      if (dash != std::string::npos && dash > 0) {
        const auto a = std::stoull(part.substr(0, dash)), b = std::stoull(part.substr(dash + 1));
        if (b < a) throw Error("bad seed range '" + part + "'");
        for (auto s = a; s <= b; ++s) out.push_back(s);
      } else {
        out.push_back(std::stoull(part));
      }
    } catch (const std::logic_error&) {
      throw Error("bad seed list '" + text + "'");
    }
  }
  if (out.empty()) throw Error("empty seed list");
  return out;
}

// A model from --model, or one trained from the profile's training run.
CausalInferenceModel obtain_model(const std::string& model_file, const Scenario& sc, const Parameters& p,
                                  const fs::path& out_dir) {
  if (!model_file.empty()) return load_model(model_file);
  std::cerr << "training on " << sc.name << " seed " << p.experiment.training_seed << " (" << p.experiment.structure
            << " structure)\n";
  auto t = train_model(sc, p, p.experiment.training_seed, p.experiment.structure);
  fs::create_directories(out_dir);
  save_model(t.model, (out_dir / "model.json").string());
  return std::move(t.model);
}

int slot_index(const Scenario& sc, const std::string& id) {
  for (std::size_t s = 0; s < sc.schedule.slots.size(); ++s)
    if (sc.schedule.slots[s].id == id) return static_cast<int>(s);
  throw Error("unknown slot '" + id + "'");
}

// "VAR=value": a label for categorical variables, a number for binned ones.
std::pair<std::string, int> parse_assignment(const CausalInferenceModel& m, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw Error("expected VAR=value, got '" + text + "'");
  const std::string var = text.substr(0, eq), value = text.substr(eq + 1);
  const auto& v = m.schema.at(base_variable(var));
  if (v.kind == VariableSchema::Kind::Continuous) return {var, code_of_value(m.schema, var, csv::parse_double(value))};
  return {var, code_of_label(m.schema, var, value)};
}

std::vector<std::string> bin_labels(const VariableSchema& v) {
  if (v.kind == VariableSchema::Kind::Categorical) return v.labels;
  std::vector<std::string> out;
  for (std::size_t b = 0; b < v.bins.bins(); ++b)
    out.push_back("[" + csv::format(v.bins.bin_low(b)) + ", " + csv::format(v.bins.bin_high(b)) + "]");
  return out;
}

int cmd_simulate(const Common& c, std::uint64_t seed, const std::string& out_dir) {
  const auto p = c.parameters();
  const auto sc = c.scenario(p);
  const auto log = simulate(sc, p.sim, seed);
  fs::create_directories(out_dir);
  const auto path = fs::path(out_dir) / log_file_name(sc.name, seed);
  write_log_csv(log, path.string());
  std::cout << "wrote " << path.string() << " (" << log.size() << " rows)\n";
  return 0;
}

int cmd_learn(const Common& c, const std::string& log_file, std::uint64_t seed, const std::string& structure,
              const std::string& out_dir) {
  const auto p = c.parameters();
  const auto sc = c.scenario(p);
  TimeSeriesLog log;
  std::string source;
  if (!log_file.empty()) {
    log = read_log_csv(log_file, &sc);
    source = fs::path(log_file).filename().string();
  } else {
    log = simulate(sc, p.sim, seed);
    source = log_file_name(sc.name, seed);
  }
  SubsamplePlan plan;
  const auto ds = build_dataset(log, sc, p.pipeline, source, &plan);
  std::cout << "dataset: " << ds.rows() << " rows, subsample factor " << plan.factor << " (bandwidth "
            << csv::format(plan.bandwidth) << " Hz)\n";
  const fs::path out(out_dir);
  fs::create_directories(out);
  write_dataset(ds, (out / "dataset.csv").string());

  LaggedDag graph;
  if (structure == "discovered") {
    const auto found = discover_for(ds, p);
    jsonutil::write_file((out / "graph_discovered.json").string(), dag_to_json(found));
    graph = directed_part(found);
  } else {
    graph = ground_truth_model();
  }
  jsonutil::write_file((out / "graph.json").string(), dag_to_json(graph));
  const auto model = fit_mle(graph, ds);
  save_model(model, (out / "model.json").string());
  std::cout << "graph: " << graph.edges().size() << " edges\n";
  for (const auto& e : graph.edges())
    std::cout << "  " << lagged_name(e.src, e.lag) << " -> " << e.dst << (e.directed ? "" : " (undirected)") << "\n";
  std::cout << "wrote " << (out / "dataset.csv").string() << ", graph.json, model.json\n";
  return 0;
}

int cmd_infer(const std::string& model_file, const std::string& target, const std::vector<std::string>& dos,
              const std::vector<std::string>& givens, bool json) {
  const auto m = load_model(model_file);
  QuerySpec q;
  q.target = target;
  for (const auto& d : dos) q.interventions.insert(parse_assignment(m, d));
  for (const auto& g : givens) q.conditions.insert(parse_assignment(m, g));
  QueryStats stats;
  const auto dist = do_query(m, q, &stats);
  const auto& v = m.schema.at(base_variable(target));
  const auto labels = bin_labels(v);
  std::optional<double> mean;
  if (v.kind == VariableSchema::Kind::Continuous) mean = expected_value(dist, m.schema, target);
  if (json) {
    Json j{{"target", target}, {"labels", labels}, {"probabilities", dist}};
    if (mean) j["expected_value"] = *mean;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "P(" << target;
  std::string sep = " | ";
  for (const auto& d : dos) {
    std::cout << sep << "do(" << d << ")";
    sep = ", ";
  }
  for (const auto& g : givens) {
    std::cout << sep << g;
    sep = ", ";
  }
  std::cout << ")\n";
  for (std::size_t k = 0; k < dist.size(); ++k) std::cout << "  " << labels[k] << "  " << csv::format(dist[k]) << "\n";
  if (mean) std::cout << "E[" << target << "] = " << csv::format(*mean) << "\n";
  return 0;
}

int cmd_plan(const Common& c, const std::string& model_file, const std::string& from, const std::string& to,
             const std::string& slot, double battery, bool charging, const std::vector<double>& weights,
             const std::string& format) {
  auto p = c.parameters();
  const auto sc = c.scenario(p);
  if (!weights.empty()) p.weights = {weights.at(0), weights.at(1), weights.at(2)};
  const auto m = load_model(model_file);
  const int s = slot_index(sc, slot);
  const auto est = estimate_arcs(sc.graph, m, s, charging ? 1 : 0, p.policy.query_velocity);
  const auto plan = plan_path(sc.graph, sc.graph.index_of(from), sc.graph.index_of(to), est, p.weights);
  const auto verdict = decide_task(plan, battery, p.policy);
  const auto& g = sc.graph;

  if (format != "json") {
    std::cout << "route:";
    for (int w : plan.path) std::cout << " " << g.waypoint(w).id;
    std::cout << "\n\n  arc          length   D_hat    battery   cost\n";
    for (const auto& a : plan.arcs) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-5s-> %-5s %6.2f  %7.4f  %8.5f  %8.4f\n", g.waypoint(a.from).id.c_str(),
                    g.waypoint(a.to).id.c_str(), a.delta, a.D_hat, a.battery_cost, arc_cost(a, p.weights));
      std::cout << line;
    }
    std::cout << "\ndistance " << csv::format(plan.distance) << " m, cost " << csv::format(plan.total_cost)
              << ", C_L " << csv::format(plan.C_L) << " %\n";
    std::cout << "battery " << csv::format(battery) << " %, B_min " << csv::format(p.policy.b_min) << " %: "
              << to_string(verdict) << "\n";
  }
  if (format != "text") {
    Json arcs = Json::array();
    for (const auto& a : plan.arcs)
      arcs.push_back({{"from", g.waypoint(a.from).id},
                      {"to", g.waypoint(a.to).id},
                      {"length", a.delta},
                      {"D_hat", a.D_hat},
                      {"L_hat", a.L_hat},
                      {"battery_cost", a.battery_cost},
                      {"cost", arc_cost(a, p.weights)}});
    Json route = Json::array();
    for (int w : plan.path) route.push_back(g.waypoint(w).id);
    Json j{{"route", route},          {"arcs", arcs},         {"distance", plan.distance},
           {"cost", plan.total_cost}, {"C_L", plan.C_L},      {"battery", battery},
           {"b_min", p.policy.b_min}, {"verdict", to_string(verdict)}, {"expansions", plan.expansions}};
    if (format == "both") std::cout << "\n";
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_experiment(const Common& c, const std::string& seeds_text, const std::vector<std::string>& approaches,
                   const std::string& model_file, const std::string& out_dir, unsigned threads) {
  auto p = c.parameters();
  const auto sc = c.scenario(p);
  if (!seeds_text.empty()) p.experiment.seeds = parse_seeds(seeds_text);
  const fs::path out(out_dir);
  const auto model = obtain_model(model_file, sc, p, out);

  std::vector<ApproachConfig> configs;
  for (const auto& a : approaches.empty() ? approach_names() : approaches)
    configs.push_back(make_approach(a, p.weights, p.policy));
  ExperimentOptions opt;
  opt.battery_carry_over = p.experiment.battery_carry_over;
  opt.tasks_per_slot = p.experiment.tasks_per_slot;
  const auto t0 = std::chrono::steady_clock::now();
  const auto runs = run_ablation(sc, configs, &model, p.sim, p.experiment.seeds, opt, threads);
  std::cerr << "ran " << runs.size() << " runs in "
            << csv::format(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) << " s\n";
  write_results(runs, sc, out);
  jsonutil::write_file((out / "parameters.json").string(), parameters_to_json(p));
  const auto rep = compute_metrics(runs);
  write_metrics_report(rep, out);
  for (const auto& a : rep.approaches)
    std::cout << a.approach << ": " << a.success << "/" << a.tasks << " succeeded, " << a.failure_D << " failure_D, "
              << a.failure_L << " failure_L, " << a.refused << " refused, " << a.collisions << " collisions\n";
  std::cout << "wrote " << (out / "report.md").string() << "\n";
  return 0;
}

int cmd_sensitivity(const Common& c, const std::string& model_file, const std::string& out_dir) {
  const auto p = c.parameters();
  const auto sc = c.scenario(p);
  const auto model = obtain_model(model_file, sc, p, out_dir);
  const auto rows = sensitivity_sweep(sc, model, p);
  write_sensitivity(rows, out_dir);
  std::size_t kept = 0;
  for (const auto& r : rows) kept += r.kept;
  std::cout << kept << " of " << rows.size() << " configurations kept; wrote "
            << (fs::path(out_dir) / "sensitivity.md").string() << "\n";
  return 0;
}

int cmd_scalability(const Common& c, const std::string& model_file, const std::vector<std::size_t>& sizes, int repeats,
                    const std::string& out_dir) {
  auto p = c.parameters();
  const auto sc = c.scenario(p);
  if (!sizes.empty()) p.scalability.sizes = sizes;
  if (repeats > 0) p.scalability.repeats = repeats;
  const auto model = obtain_model(model_file, sc, p, out_dir);
  const auto table = scalability_bench(sc.graph, model, p.scalability.sizes, p.scalability.repeats, p.scalability.seed);
  write_scalability(table, out_dir);
  for (const auto& r : table.rows)
    std::cout << r.size << " waypoints: " << csv::format(1000 * r.mean_seconds) << " ms\n";
  if (table.fit) std::cout << "R^2 = " << csv::format(table.fit->r_squared) << "\n";
  return 0;
}

int cmd_report(const Common& c, const std::string& input, const std::string& out_dir) {
  const auto p = c.parameters();
  const auto sc = c.scenario(p);
  const auto runs = read_results(input, sc);
  if (runs.empty()) throw Error("no runs in " + input);
  write_metrics_report(compute_metrics(runs), out_dir.empty() ? input : out_dir);
  std::cout << "wrote " << (fs::path(out_dir.empty() ? input : out_dir) / "report.md").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal navigation: simulate, learn, infer, plan and evaluate"};
  app.require_subcommand(1);

  Common common;
  std::uint64_t seed = 100;
  std::string out = "out", model_file, log_file, structure = "discovered";

  auto* sim = app.add_subcommand("simulate", "Generate a training log");
  common.add_to(sim);
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--out", out, "Output directory");

  auto* learn = app.add_subcommand("learn", "Dataset, structure discovery and model fit");
  common.add_to(learn);
  learn->add_option("--log", log_file, "Log written by simulate (simulated afresh when absent)")
      ->check(CLI::ExistingFile);
  learn->add_option("--seed", seed, "Seed for a fresh simulation");
  learn->add_option("--structure", structure, "Graph to fit")->check(CLI::IsMember({"discovered", "reference"}));
  learn->add_option("--out", out, "Output directory");

  std::string target;
  std::vector<std::string> dos, givens;
  bool json = false;
  auto* infer = app.add_subcommand("infer", "One interventional query");
  infer->add_option("--model", model_file, "Model file")->required()->check(CLI::ExistingFile);
  infer->add_option("--target", target, "Target variable, e.g. D or L")->required();
  infer->add_option("--do", dos, "Intervention VAR=value (repeatable)");
  infer->add_option("--given", givens, "Condition VAR=value (repeatable)");
  infer->add_flag("--json", json, "Machine-readable output");

  std::string from, to, slot = "S1", format = "both";
  double battery = 100;
  bool charging = false;
  std::vector<double> weights;
  auto* plan = app.add_subcommand("plan", "Route and proceed/abort verdict for one task");
  common.add_to(plan);
  plan->add_option("--model", model_file, "Model file")->required()->check(CLI::ExistingFile);
  plan->add_option("--from", from, "Start waypoint id")->required();
  plan->add_option("--to", to, "Goal waypoint id")->required();
  plan->add_option("--slot", slot, "Time slot id");
  plan->add_option("--battery", battery, "Current battery %")->check(CLI::Range(0.0, 100.0));
  plan->add_flag("--charging", charging, "Query with the charging flag set");
  plan->add_option("--weights", weights, "lambda_delta lambda_D lambda_L")->expected(3);
  plan->add_option("--format", format, "Output")->check(CLI::IsMember({"text", "json", "both"}));

  std::string seeds_text;
  std::vector<std::string> approaches;
  unsigned threads = 0;
  auto* exp = app.add_subcommand("experiment", "Four-approach ablation");
  common.add_to(exp);
  exp->add_option("--seeds", seeds_text, "Seeds, e.g. 1,2,3 or 1-5");
  exp->add_option("--approaches", approaches, "Subset of approaches")
      ->delimiter(',')
      ->check(CLI::IsMember(approach_names()));
  exp->add_option("--model", model_file, "Model file (trained from the profile when absent)")->check(CLI::ExistingFile);
  exp->add_option("--out", out, "Output directory");
  exp->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* sens = app.add_subcommand("sensitivity", "Heuristic weight sweep");
  common.add_to(sens);
  sens->add_option("--model", model_file, "Model file")->check(CLI::ExistingFile);
  sens->add_option("--out", out, "Output directory");

  std::vector<std::size_t> sizes;
  int repeats = 0;
  auto* scal = app.add_subcommand("scalability", "Query time against graph size");
  common.add_to(scal);
  scal->add_option("--model", model_file, "Model file")->check(CLI::ExistingFile);
  scal->add_option("--sizes", sizes, "Subgraph sizes")->delimiter(',');
  scal->add_option("--repeats", repeats, "Queries per size");
  scal->add_option("--out", out, "Output directory");

  std::string input;
  auto* rep = app.add_subcommand("report", "Tables from experiment output");
  common.add_to(rep);
  rep->add_option("--input", input, "Directory written by experiment")->required()->check(CLI::ExistingDirectory);
  rep->add_option("--out", out, "Output directory (defaults to --input)");

  CLI11_PARSE(app, argc, argv);
  try {
    common.apply_logging();
    if (*sim) return cmd_simulate(common, seed, out);
    if (*learn) return cmd_learn(common, log_file, seed, structure, out);
    if (*infer) return cmd_infer(model_file, target, dos, givens, json);
    if (*plan) return cmd_plan(common, model_file, from, to, slot, battery, charging, weights, format);
    if (*exp) return cmd_experiment(common, seeds_text, approaches, model_file, out, threads);
    if (*sens) return cmd_sensitivity(common, model_file, out);
    if (*scal) return cmd_scalability(common, model_file, sizes, repeats, out);
    if (*rep) return cmd_report(common, input, rep->count("--out") ? out : "");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
