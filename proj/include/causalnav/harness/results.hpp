#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "causalnav/core/csv.hpp"
#include "causalnav/harness/experiment.hpp"

namespace causalnav {

// Raw experiment output. Everything except *_timing.csv is a pure function of
// the inputs and seeds.
inline constexpr const char* kOutcomesFile = "outcomes.csv";
inline constexpr const char* kProximityFile = "proximity.csv";
inline constexpr const char* kPlanTimingFile = "plan_timing.csv";

inline TaskStatus parse_status(const std::string& s) {
  for (auto st : {TaskStatus::Success, TaskStatus::FailureDeadline, TaskStatus::FailureBattery, TaskStatus::Refused})
    if (s == to_string(st)) return st;
  throw Error("unknown task status '" + s + "'");
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

inline std::string path_field(const std::vector<int>& path, const WaypointGraph& g) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += ';';
    s += g.waypoint(path[i]).id;
  }
  return s;
}

}  // namespace detail

inline void write_results(const std::vector<RunResult>& runs, const Scenario& sc, const std::filesystem::path& dir) {
  using csv::format;
  std::filesystem::create_directories(dir);
  auto out = detail::open_out(dir / kOutcomesFile);
  out << "approach,seed,task,slot,start,goal,status,obstacle,battery_start,C_L,planned_distance,distance,active,"
         "stalled,battery_spent,collisions,min_person_dist,expansions,path\n";
  auto prox = detail::open_out(dir / kProximityFile);
  prox << "approach,seed,distance\n";
  auto timing = detail::open_out(dir / kPlanTimingFile);
  timing << "approach,seed,slot,task,plan_seconds\n";
  const auto& slots = sc.schedule.slots;
  for (const auto& r : runs) {
    for (const auto& t : r.outcomes) {
      const auto& g = sc.graph;
      out << csv::join({r.approach, std::to_string(r.seed), std::to_string(t.task), slots.at(t.slot).id,
                        g.waypoint(t.start).id, g.waypoint(t.goal).id, to_string(t.status), t.obstacle ? "1" : "0",
                        format(t.battery_start), format(t.C_L), format(t.planned_distance), format(t.distance),
                        format(t.active), format(t.stalled), format(t.battery_spent), std::to_string(t.collisions),
                        format(t.min_person_dist), std::to_string(t.expansions), detail::path_field(t.path, g)})
          << '\n';
      timing << r.approach << ',' << r.seed << ',' << slots.at(t.slot).id << ',' << t.task << ','
             << format(t.plan_seconds) << '\n';
    }
    for (double d : r.proximity) prox << r.approach << ',' << r.seed << ',' << format(d) << '\n';
  }
}

/// Reads write_results() output back. Plan timings are optional.
inline std::vector<RunResult> read_results(const std::filesystem::path& dir, const Scenario& sc) {
  std::map<std::pair<std::string, std::uint64_t>, std::size_t> index;
  std::vector<RunResult> runs;
  auto run_for = [&](const std::string& approach, const std::string& seed) -> RunResult& {
    const auto key = std::make_pair(approach, static_cast<std::uint64_t>(std::stoull(seed)));
    auto [it, fresh] = index.emplace(key, runs.size());
    if (fresh) {
      runs.emplace_back();
      runs.back().approach = key.first;
      runs.back().seed = key.second;
    }
    return runs[it->second];
  };
  auto slot_index = [&](const std::string& id) {
    for (std::size_t s = 0; s < sc.schedule.slots.size(); ++s)
      if (sc.schedule.slots[s].id == id) return static_cast<int>(s);
    throw Error("results mention unknown slot '" + id + "'");
  };

  const auto t = csv::read((dir / kOutcomesFile).string());
  const auto col = [&](const char* name) { return t.column(name); };
  const std::size_t c_app = col("approach"), c_seed = col("seed"), c_task = col("task"), c_slot = col("slot"),
                    c_start = col("start"), c_goal = col("goal"), c_status = col("status"),
                    c_obstacle = col("obstacle"), c_bs = col("battery_start"), c_cl = col("C_L"),
                    c_pd = col("planned_distance"), c_d = col("distance"), c_act = col("active"),
                    c_st = col("stalled"), c_bat = col("battery_spent"), c_col = col("collisions"),
                    c_min = col("min_person_dist"), c_exp = col("expansions"), c_path = col("path");
  for (const auto& row : t.rows) {
    auto& r = run_for(row[c_app], row[c_seed]);
    TaskOutcome o;
    o.task = std::stoi(row[c_task]);
    o.slot = slot_index(row[c_slot]);
    o.start = sc.graph.index_of(row[c_start]);
    o.goal = sc.graph.index_of(row[c_goal]);
    o.status = parse_status(row[c_status]);
    o.obstacle = row[c_obstacle] == "1";
    o.battery_start = csv::parse_double(row[c_bs]);
    o.C_L = csv::parse_double(row[c_cl]);
    o.planned_distance = csv::parse_double(row[c_pd]);
    o.distance = csv::parse_double(row[c_d]);
    o.active = csv::parse_double(row[c_act]);
    o.stalled = csv::parse_double(row[c_st]);
    o.battery_spent = csv::parse_double(row[c_bat]);
    o.collisions = std::stoi(row[c_col]);
    o.min_person_dist = csv::parse_double(row[c_min]);
    o.expansions = std::stoull(row[c_exp]);
    if (!row[c_path].empty())
      for (const auto& id : csv::split(row[c_path], ';')) o.path.push_back(sc.graph.index_of(id));
    if (o.status != TaskStatus::Refused) r.consumption += o.battery_spent;
    r.outcomes.push_back(std::move(o));
  }

  const auto p = csv::read((dir / kProximityFile).string());
  const std::size_t p_app = p.column("approach"), p_seed = p.column("seed"), p_d = p.column("distance");
  for (const auto& row : p.rows) run_for(row[p_app], row[p_seed]).proximity.push_back(csv::parse_double(row[p_d]));

  if (std::filesystem::exists(dir / kPlanTimingFile)) {
    const auto tm = csv::read((dir / kPlanTimingFile).string());
    const std::size_t t_app = tm.column("approach"), t_seed = tm.column("seed"), t_sec = tm.column("plan_seconds");
    std::map<std::pair<std::string, std::string>, std::size_t> cursor;
    for (const auto& row : tm.rows) {
      auto& r = run_for(row[t_app], row[t_seed]);
      auto& k = cursor[{row[t_app], row[t_seed]}];
      if (k < r.outcomes.size()) r.outcomes[k++].plan_seconds = csv::parse_double(row[t_sec]);
    }
  }
  return runs;
}

}  // namespace causalnav
