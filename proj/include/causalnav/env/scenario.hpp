#pragma once

#include <cstdio>
#include <cmath>
#include <string>
#include <vector>

#include "causalnav/core/json_util.hpp"
#include "causalnav/env/coverage.hpp"
#include "causalnav/env/waypoint_graph.hpp"

namespace causalnav {

enum class TaskKind { PickPlace, Service, Coverage };

inline const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::PickPlace: return "pick_place";
    case TaskKind::Service: return "service";
    case TaskKind::Coverage: return "coverage";
  }
  return "?";
}

/// Robot tasks in a slot. Pick/place kinds alternate goals between the two
/// station groups; coverage walks the cleaning route arc by arc.
struct TaskTemplate {
  TaskKind kind = TaskKind::PickPlace;
  std::vector<int> pick;
  std::vector<int> place;
};

struct TimeSlot {
  std::string id;
  std::string start;  // "HH:MM"
  std::string end;
  int start_minute = 0;
  int end_minute = 0;
  std::vector<double> occupancy;  // per waypoint index, sums to 1
  TaskTemplate task;
  int task_count = 0;
  int workers = 0;  // active workers during the slot
};

struct ScenarioSchedule {
  std::vector<TimeSlot> slots;

  int index_of(const std::string& id) const {
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].id == id) return static_cast<int>(i);
    throw DocumentError("slots", "unknown slot '" + id + "'");
  }
};

struct Scenario {
  std::string name;
  int workers = 0;
  WaypointGraph graph;
  ScenarioSchedule schedule;
  CoverageRoute coverage;  // filled when any slot uses the coverage template
};

namespace detail {

inline int parse_clock(const jsonutil::Json& j, const std::string& path) {
  const std::string s = jsonutil::string(j, path);
  int h = -1, m = -1;
  char colon = 0;
  if (s.size() != 5 || std::sscanf(s.c_str(), "%2d%c%2d", &h, &colon, &m) != 3 || colon != ':' ||
      h < 0 || h > 24 || m < 0 || m > 59)
    throw DocumentError(path, "expected HH:MM, got '" + s + "'");
  return h * 60 + m;
}

inline int waypoint_ref(const WaypointGraph& g, const jsonutil::Json& j, const std::string& path) {
  const std::string id = jsonutil::string(j, path);
  if (auto i = g.find(id)) return *i;
  throw DocumentError(path, "unknown waypoint '" + id + "'");
}

inline std::vector<int> waypoint_list(const WaypointGraph& g, const jsonutil::Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw DocumentError(path, "expected a non-empty array of waypoint ids");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(waypoint_ref(g, j[i], jsonutil::index(path, i)));
  return out;
}

}  // namespace detail

/// Parses and validates a scenario document (JSON). Every violation raises
/// DocumentError naming the field path; nothing is repaired silently.
inline Scenario load_scenario(const jsonutil::Json& doc) {
  using namespace jsonutil;
  check_keys(doc, "", {"name", "workers", "waypoints", "arcs", "stations", "slots"});
  Scenario sc;
  sc.name = string(field(doc, "", "name"), "name");
  sc.workers = static_cast<int>(integer(field(doc, "", "workers"), "workers"));
  if (sc.workers < 0) throw DocumentError("workers", "must be >= 0");

  const auto& wps = field(doc, "", "waypoints");
  if (!wps.is_array() || wps.empty()) throw DocumentError("waypoints", "expected a non-empty array");
  std::vector<Waypoint> waypoints;
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const std::string p = index("waypoints", i);
    check_keys(wps[i], p, {"id", "x", "y", "radius", "label"});
    Waypoint w;
    w.id = string(field(wps[i], p, "id"), child(p, "id"));
    w.position = {number(field(wps[i], p, "x"), child(p, "x")), number(field(wps[i], p, "y"), child(p, "y"))};
    w.radius = number(field(wps[i], p, "radius"), child(p, "radius"));
    if (!(w.radius > 0.0)) throw DocumentError(child(p, "radius"), "must be > 0");
    w.label = string(field(wps[i], p, "label"), child(p, "label"));
    const auto& labels = region_labels();
    if (std::find(labels.begin(), labels.end(), w.label) == labels.end())
      throw DocumentError(child(p, "label"), "unknown region label '" + w.label + "'");
    for (const auto& prev : waypoints)
      if (prev.id == w.id) throw DocumentError(child(p, "id"), "duplicate waypoint id '" + w.id + "'");
    waypoints.push_back(std::move(w));
  }
  auto lookup = [&](const Json& j, const std::string& path) {
    const std::string id = string(j, path);
    for (std::size_t k = 0; k < waypoints.size(); ++k)
      if (waypoints[k].id == id) return static_cast<int>(k);
    throw DocumentError(path, "unknown waypoint '" + id + "'");
  };

  const auto& arcs_doc = field(doc, "", "arcs");
  if (!arcs_doc.is_array()) throw DocumentError("arcs", "expected an array");
  std::vector<std::pair<int, int>> arcs;
  for (std::size_t i = 0; i < arcs_doc.size(); ++i) {
    const std::string p = index("arcs", i);
    if (!arcs_doc[i].is_array() || arcs_doc[i].size() != 2) throw DocumentError(p, "expected [from, to]");
    arcs.emplace_back(lookup(arcs_doc[i][0], index(p, 0)), lookup(arcs_doc[i][1], index(p, 1)));
  }

  const auto& st = field(doc, "", "stations");
  check_keys(st, "stations", {"goals", "charging"});
  std::vector<int> goals;
  const auto& goals_doc = field(st, "stations", "goals");
  if (!goals_doc.is_array()) throw DocumentError("stations.goals", "expected an array");
  for (std::size_t i = 0; i < goals_doc.size(); ++i) goals.push_back(lookup(goals_doc[i], index("stations.goals", i)));
  const int charging = lookup(field(st, "stations", "charging"), "stations.charging");

  try {
    sc.graph = WaypointGraph(std::move(waypoints), arcs, std::move(goals), charging);
  } catch (const GraphError& e) {
    throw DocumentError("arcs", e.what());
  }
  const auto& g = sc.graph;

  const auto& slots = field(doc, "", "slots");
  if (!slots.is_array() || slots.empty()) throw DocumentError("slots", "expected a non-empty array");
  bool needs_coverage = false;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const std::string p = index("slots", i);
    check_keys(slots[i], p, {"id", "start", "end", "occupancy", "task", "task_count", "workers"});
    TimeSlot s;
    s.id = string(field(slots[i], p, "id"), child(p, "id"));
    for (const auto& prev : sc.schedule.slots)
      if (prev.id == s.id) throw DocumentError(child(p, "id"), "duplicate slot id '" + s.id + "'");
    s.start = string(field(slots[i], p, "start"), child(p, "start"));
    s.end = string(field(slots[i], p, "end"), child(p, "end"));
    s.start_minute = detail::parse_clock(field(slots[i], p, "start"), child(p, "start"));
    s.end_minute = detail::parse_clock(field(slots[i], p, "end"), child(p, "end"));
    if (s.end_minute <= s.start_minute) throw DocumentError(child(p, "end"), "slot must end after it starts");

    const std::string op = child(p, "occupancy");
    const auto& occ = field(slots[i], p, "occupancy");
    require_object(occ, op);
    s.occupancy.assign(g.size(), 0.0);
    double total = 0.0;
    for (auto it = occ.begin(); it != occ.end(); ++it) {
      const std::string wp = child(op, it.key());
      auto wi = g.find(it.key());
      if (!wi) throw DocumentError(wp, "unknown waypoint '" + it.key() + "'");
      const double prob = number(it.value(), wp);
      if (!(prob >= 0.0 && prob <= 1.0)) throw DocumentError(wp, "probability outside [0, 1]");
      s.occupancy[static_cast<std::size_t>(*wi)] = prob;
      total += prob;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw DocumentError(op, "distribution sums to " + std::to_string(total) + ", expected 1");

    const std::string tp = child(p, "task");
    const auto& task = field(slots[i], p, "task");
    check_keys(task, tp, {"kind", "pick", "place"});
    const std::string kind = string(field(task, tp, "kind"), child(tp, "kind"));
    if (kind == "pick_place" || kind == "service") {
      s.task.kind = kind == "service" ? TaskKind::Service : TaskKind::PickPlace;
      s.task.pick = detail::waypoint_list(g, field(task, tp, "pick"), child(tp, "pick"));
      s.task.place = detail::waypoint_list(g, field(task, tp, "place"), child(tp, "place"));
      for (const auto* group : {&s.task.pick, &s.task.place})
        for (int w : *group)
          if (std::find(g.goal_stations().begin(), g.goal_stations().end(), w) == g.goal_stations().end())
            throw DocumentError(tp, "'" + g.waypoint(w).id + "' is not a goal station");
    } else if (kind == "coverage") {
      s.task.kind = TaskKind::Coverage;
      if (task.contains("pick") || task.contains("place"))
        throw DocumentError(tp, "coverage tasks take no station lists");
      needs_coverage = true;
    } else {
      throw DocumentError(child(tp, "kind"), "unknown task kind '" + kind + "'");
    }

    if (slots[i].contains("task_count")) {
      s.task_count = static_cast<int>(integer(slots[i]["task_count"], child(p, "task_count")));
      if (s.task_count <= 0) throw DocumentError(child(p, "task_count"), "must be > 0");
    } else if (s.task.kind != TaskKind::Coverage) {
      throw DocumentError(child(p, "task_count"), "missing required field");
    }
    s.workers = sc.workers;
    if (slots[i].contains("workers")) {
      s.workers = static_cast<int>(integer(slots[i]["workers"], child(p, "workers")));
      if (s.workers < 0) throw DocumentError(child(p, "workers"), "must be >= 0");
    }
    sc.schedule.slots.push_back(std::move(s));
  }

  if (needs_coverage) {
    sc.coverage = coverage_route(g);
    for (auto& s : sc.schedule.slots)
      if (s.task.kind == TaskKind::Coverage && s.task_count == 0) s.task_count = static_cast<int>(sc.coverage.arcs.size());
    for (std::size_t i = 0; i < sc.schedule.slots.size(); ++i)
      if (sc.schedule.slots[i].task_count <= 0)
        throw DocumentError(index("slots", i) + ".task_count", "coverage route is empty");
  }
  return sc;
}

inline Scenario load_scenario_text(const std::string& text) {
  return load_scenario(jsonutil::parse_text(text, "scenario"));
}

inline Scenario load_scenario_file(const std::string& path) { return load_scenario(jsonutil::read_file(path)); }

}  // namespace causalnav
