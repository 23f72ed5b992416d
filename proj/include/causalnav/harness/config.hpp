#pragma once

#include <map>
#include <string>
#include <vector>

#include "causalnav/data/dataset.hpp"
#include "causalnav/graph/discovery.hpp"
#include "causalnav/harness/approach.hpp"
#include "causalnav/sim/params.hpp"

namespace causalnav {

struct ExperimentSettings {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::uint64_t training_seed = 100;
  bool battery_carry_over = false;
  std::string structure = "reference";  // "reference" or "discovered"
  int tasks_per_slot = 0;               // 0 keeps the scenario's counts
  std::size_t discovery_rows = 100000;  // cap on rows handed to discovery
};

struct SensitivitySettings {
  std::vector<std::string> slots{"S2", "S6"};
  int tasks = 5;
  std::uint64_t seed = 1;
  std::vector<double> lambda_delta{0.1, 1, 10}, lambda_D{1, 10, 100}, lambda_L{0.5, 5, 50};
};

struct ScalabilitySettings {
  std::vector<std::size_t> sizes{10, 20, 30, 40, 50, 60, 70};
  int repeats = 1000;
  std::uint64_t seed = 1;
};

/// Everything a command needs besides the scenario.
struct Parameters {
  std::string profile = "custom";
  SimParams sim;
  PipelineParams pipeline;
  DiscoveryOptions discovery;
  HeuristicWeights weights;
  DecisionPolicy policy;
  ExperimentSettings experiment;
  SensitivitySettings sensitivity;
  ScalabilitySettings scalability;
};

/// Built-in profiles. "desk" runs the 20-waypoint scenario in minutes; "full"
/// mirrors the 73-waypoint, 200-task setting.
inline Parameters profile_parameters(const std::string& name) {
  Parameters p;
  p.discovery.tiers = warehouse_tiers();
  p.discovery.seed = 1;
  p.sim.slot_duration = 3600;
  p.pipeline.subsample_rate = 2.5;
  if (name == "desk") {
    p.profile = "desk";
    // 50 tasks per slot never drain a full battery, so the battery carries
    // across slots and refusals actually happen
    p.experiment.battery_carry_over = true;
  } else if (name == "full") {
    p.profile = "full";
    p.sim.slot_duration = 1800;
  } else {
    throw Error("unknown profile '" + name + "' (expected desk or full)");
  }
  return p;
}

namespace detail {

inline std::vector<double> number_list(const jsonutil::Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw DocumentError(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(jsonutil::number(j[i], jsonutil::index(path, i)));
  return out;
}

inline std::uint64_t seed_value(const jsonutil::Json& j, const std::string& path) {
  const auto v = jsonutil::integer(j, path);
  if (v < 0) throw DocumentError(path, "seeds must be >= 0");
  return static_cast<std::uint64_t>(v);
}

}  // namespace detail

inline jsonutil::Json simulation_to_json(const SimParams& s) {
  return {{"dt", s.battery.dt},
          {"battery",
           {{"K_s", s.battery.static_drain},
            {"K_d", s.battery.motion_drain},
            {"K_o", s.battery.obstacle_factor},
            {"K_c", s.battery.charge_rate}}},
          {"robot",
           {{"v_max", s.robot.v_max},
            {"circumscribed_radius", s.robot.circumscribed_radius},
            {"stall_radius", s.robot.stall_radius},
            {"resume_margin", s.robot.resume_margin},
            {"obstacle_speed_factor", s.robot.obstacle_speed_factor},
            {"obstacle_detour", s.robot.obstacle_detour}}},
          {"workers",
           {{"speed", s.workers.speed},
            {"noise_sigma", s.workers.noise_sigma},
            {"dwell_min", s.workers.dwell_min},
            {"dwell_max", s.workers.dwell_max}}},
          {"obstacle_probability", s.obstacle_probability},
          {"task_deadline", s.task_deadline},
          {"proximity_period", s.proximity_period},
          {"slot_duration", s.slot_duration},
          {"recharge_threshold", s.recharge_threshold}};
}

inline jsonutil::Json parameters_to_json(const Parameters& p) {
  using jsonutil::Json;
  Json tiers = Json::object();
  for (const auto& [k, v] : p.discovery.tiers) tiers[k] = v;
  return {{"profile", p.profile},
          {"simulation", simulation_to_json(p.sim)},
          {"pipeline", {{"subsample_rate", p.pipeline.subsample_rate}, {"max_bins", p.pipeline.max_bins}}},
          {"discovery",
           {{"alpha", p.discovery.alpha},
            {"permutations", p.discovery.permutations},
            {"max_depth", p.discovery.max_depth},
            {"seed", p.discovery.seed},
            {"tiers", tiers}}},
          {"planner",
           {{"weights",
            {{"lambda_delta", p.weights.lambda_delta}, {"lambda_D", p.weights.lambda_D}, {"lambda_L", p.weights.lambda_L}}},
            {"b_min", p.policy.b_min},
            {"query_velocity", p.policy.query_velocity}}},
          {"experiment",
           {{"seeds", p.experiment.seeds},
            {"training_seed", p.experiment.training_seed},
            {"battery_carry_over", p.experiment.battery_carry_over},
            {"structure", p.experiment.structure},
            {"tasks_per_slot", p.experiment.tasks_per_slot},
            {"discovery_rows", p.experiment.discovery_rows}}},
          {"sensitivity",
           {{"slots", p.sensitivity.slots},
            {"tasks", p.sensitivity.tasks},
            {"seed", p.sensitivity.seed},
            {"grid",
             {{"lambda_delta", p.sensitivity.lambda_delta},
              {"lambda_D", p.sensitivity.lambda_D},
              {"lambda_L", p.sensitivity.lambda_L}}}}},
          {"scalability",
           {{"sizes", p.scalability.sizes}, {"repeats", p.scalability.repeats}, {"seed", p.scalability.seed}}}};
}

/// Reads a parameters document. Missing sections keep the values of the
/// profile named by "profile" (desk when absent); unknown keys are errors.
inline Parameters parameters_from_json(const jsonutil::Json& doc) {
  using namespace jsonutil;
  check_keys(doc, "", {"profile", "simulation", "pipeline", "discovery", "planner", "experiment", "sensitivity",
                       "scalability"});
  const std::string profile = doc.contains("profile") ? string(doc["profile"], "profile") : "desk";
  Parameters p = profile_parameters(profile);

  if (auto it = doc.find("simulation"); it != doc.end()) {
    // start from the profile's values, then apply the document on top
    Json merged = simulation_to_json(p.sim);
    check_keys(*it, "simulation",
               {"battery", "dt", "robot", "workers", "obstacle_probability", "task_deadline", "proximity_period",
                "slot_duration", "recharge_threshold"});
    for (auto kv = it->begin(); kv != it->end(); ++kv) {
      if (kv->is_object() && merged[kv.key()].is_object())
        for (auto inner = kv->begin(); inner != kv->end(); ++inner) merged[kv.key()][inner.key()] = inner.value();
      else
        merged[kv.key()] = kv.value();
    }
    p.sim = load_sim_params(merged, "simulation");
  }
  if (auto it = doc.find("pipeline"); it != doc.end()) {
    check_keys(*it, "pipeline", {"subsample_rate", "max_bins"});
    p.pipeline.subsample_rate = number_or(*it, "pipeline", "subsample_rate", p.pipeline.subsample_rate);
    if (it->contains("max_bins")) {
      const auto v = integer((*it)["max_bins"], "pipeline.max_bins");
      if (v < 1) throw DocumentError("pipeline.max_bins", "must be >= 1");
      p.pipeline.max_bins = static_cast<std::size_t>(v);
    }
    if (!(p.pipeline.subsample_rate > 0)) throw DocumentError("pipeline.subsample_rate", "must be > 0");
  }
  if (auto it = doc.find("discovery"); it != doc.end()) {
    check_keys(*it, "discovery", {"alpha", "permutations", "max_depth", "seed", "tiers"});
    p.discovery.alpha = number_or(*it, "discovery", "alpha", p.discovery.alpha);
    if (it->contains("permutations"))
      p.discovery.permutations = static_cast<int>(integer((*it)["permutations"], "discovery.permutations"));
    if (it->contains("max_depth"))
      p.discovery.max_depth = static_cast<int>(integer((*it)["max_depth"], "discovery.max_depth"));
    if (it->contains("seed")) p.discovery.seed = detail::seed_value((*it)["seed"], "discovery.seed");
    if (auto t = it->find("tiers"); t != it->end()) {
      require_object(*t, "discovery.tiers");
      p.discovery.tiers.clear();
      for (auto kv = t->begin(); kv != t->end(); ++kv)
        p.discovery.tiers[kv.key()] = static_cast<int>(integer(kv.value(), "discovery.tiers." + kv.key()));
    }
    if (!(p.discovery.alpha > 0 && p.discovery.alpha < 1)) throw DocumentError("discovery.alpha", "must lie in (0, 1)");
    if (p.discovery.permutations < 1) throw DocumentError("discovery.permutations", "must be >= 1");
    if (p.discovery.max_depth < 0) throw DocumentError("discovery.max_depth", "must be >= 0");
  }
  if (auto it = doc.find("planner"); it != doc.end()) {
    check_keys(*it, "planner", {"weights", "b_min", "query_velocity"});
    if (auto w = it->find("weights"); w != it->end()) {
      check_keys(*w, "planner.weights", {"lambda_delta", "lambda_D", "lambda_L"});
      p.weights.lambda_delta = number_or(*w, "planner.weights", "lambda_delta", p.weights.lambda_delta);
      p.weights.lambda_D = number_or(*w, "planner.weights", "lambda_D", p.weights.lambda_D);
      p.weights.lambda_L = number_or(*w, "planner.weights", "lambda_L", p.weights.lambda_L);
    }
    p.policy.b_min = number_or(*it, "planner", "b_min", p.policy.b_min);
    p.policy.query_velocity = number_or(*it, "planner", "query_velocity", p.policy.query_velocity);
    try {
      p.weights.validate();
      p.policy.validate();
    } catch (const DocumentError&) {
      throw;
    } catch (const Error& e) {
      throw DocumentError("planner", e.what());
    }
  }
  if (auto it = doc.find("experiment"); it != doc.end()) {
    check_keys(*it, "experiment",
               {"seeds", "training_seed", "battery_carry_over", "structure", "tasks_per_slot", "discovery_rows"});
    if (auto s = it->find("seeds"); s != it->end()) {
      if (!s->is_array() || s->empty()) throw DocumentError("experiment.seeds", "expected a non-empty array");
      p.experiment.seeds.clear();
      for (std::size_t i = 0; i < s->size(); ++i)
        p.experiment.seeds.push_back(detail::seed_value((*s)[i], index("experiment.seeds", i)));
    }
    if (it->contains("training_seed"))
      p.experiment.training_seed = detail::seed_value((*it)["training_seed"], "experiment.training_seed");
    if (auto b = it->find("battery_carry_over"); b != it->end()) {
      if (!b->is_boolean()) throw DocumentError("experiment.battery_carry_over", "expected true or false");
      p.experiment.battery_carry_over = b->get<bool>();
    }
    if (it->contains("structure")) {
      p.experiment.structure = string((*it)["structure"], "experiment.structure");
      if (p.experiment.structure != "reference" && p.experiment.structure != "discovered")
        throw DocumentError("experiment.structure", "expected \"reference\" or \"discovered\"");
    }
    if (it->contains("tasks_per_slot")) {
      const auto v = integer((*it)["tasks_per_slot"], "experiment.tasks_per_slot");
      if (v < 0) throw DocumentError("experiment.tasks_per_slot", "must be >= 0");
      p.experiment.tasks_per_slot = static_cast<int>(v);
    }
    if (it->contains("discovery_rows")) {
      const auto v = integer((*it)["discovery_rows"], "experiment.discovery_rows");
      if (v < 100) throw DocumentError("experiment.discovery_rows", "must be >= 100");
      p.experiment.discovery_rows = static_cast<std::size_t>(v);
    }
  }
  if (auto it = doc.find("sensitivity"); it != doc.end()) {
    check_keys(*it, "sensitivity", {"slots", "tasks", "seed", "grid"});
    if (auto s = it->find("slots"); s != it->end()) {
      if (!s->is_array() || s->empty()) throw DocumentError("sensitivity.slots", "expected a non-empty array");
      p.sensitivity.slots.clear();
      for (std::size_t i = 0; i < s->size(); ++i)
        p.sensitivity.slots.push_back(string((*s)[i], index("sensitivity.slots", i)));
    }
    if (it->contains("tasks")) {
      const auto v = integer((*it)["tasks"], "sensitivity.tasks");
      if (v < 1) throw DocumentError("sensitivity.tasks", "must be >= 1");
      p.sensitivity.tasks = static_cast<int>(v);
    }
    if (it->contains("seed")) p.sensitivity.seed = detail::seed_value((*it)["seed"], "sensitivity.seed");
    if (auto g = it->find("grid"); g != it->end()) {
      check_keys(*g, "sensitivity.grid", {"lambda_delta", "lambda_D", "lambda_L"});
      for (const char* key : {"lambda_delta", "lambda_D", "lambda_L"}) {
        if (!g->contains(key)) continue;
        auto v = detail::number_list((*g)[key], std::string("sensitivity.grid.") + key);
        for (double x : v)
          if (!(x >= 0)) throw DocumentError(std::string("sensitivity.grid.") + key, "weights must be >= 0");
        auto& dst = std::string(key) == "lambda_delta" ? p.sensitivity.lambda_delta
                    : std::string(key) == "lambda_D"   ? p.sensitivity.lambda_D
                                                       : p.sensitivity.lambda_L;
        dst = std::move(v);
      }
    }
  }
  if (auto it = doc.find("scalability"); it != doc.end()) {
    check_keys(*it, "scalability", {"sizes", "repeats", "seed"});
    if (auto s = it->find("sizes"); s != it->end()) {
      const auto v = detail::number_list(*s, "scalability.sizes");
      p.scalability.sizes.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] >= 1) || v[i] != std::floor(v[i]))
          throw DocumentError(index("scalability.sizes", i), "sizes must be positive integers");
        if (i && v[i] <= v[i - 1]) throw DocumentError("scalability.sizes", "sizes must be ascending");
        p.scalability.sizes.push_back(static_cast<std::size_t>(v[i]));
      }
    }
    if (it->contains("repeats")) {
      const auto v = integer((*it)["repeats"], "scalability.repeats");
      if (v < 1) throw DocumentError("scalability.repeats", "must be >= 1");
      p.scalability.repeats = static_cast<int>(v);
    }
    if (it->contains("seed")) p.scalability.seed = detail::seed_value((*it)["seed"], "scalability.seed");
  }
  return p;
}

inline Parameters load_parameters(const std::string& file) { return parameters_from_json(jsonutil::read_file(file)); }

}  // namespace causalnav
