#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "causalnav/core/csv.hpp"
#include "causalnav/env/scenario.hpp"
#include "causalnav/sim/world.hpp"

namespace causalnav {

/// Column-major record of a simulation run. Person counts are stored flat,
/// `counts[row * waypoints + w]`.
struct TimeSeriesLog {
  std::vector<std::string> waypoint_ids;
  std::vector<std::string> slot_ids;
  double sample_period = 0.1;

  std::vector<double> t, V, B, L, min_person_dist;
  std::vector<int> C, O, S, robot_w;
  std::vector<int> counts;

  std::size_t size() const { return t.size(); }
  std::size_t waypoints() const { return waypoint_ids.size(); }
  int count(std::size_t row, std::size_t w) const { return counts[row * waypoints() + w]; }

  void append(const StepRecord& r, const std::vector<int>& people) {
    if (people.size() != waypoints()) throw Error("log: count vector does not match waypoints");
    t.push_back(r.t);
    V.push_back(r.V);
    B.push_back(r.B);
    L.push_back(r.L);
    C.push_back(r.ctx.charging);
    O.push_back(r.ctx.obstacle);
    S.push_back(r.ctx.slot);
    robot_w.push_back(r.ctx.robot_w);
    counts.insert(counts.end(), people.begin(), people.end());
    min_person_dist.push_back(r.min_person_dist);
  }

  static TimeSeriesLog for_scenario(const Scenario& sc, double dt) {
    TimeSeriesLog log;
    for (const auto& w : sc.graph.waypoints()) log.waypoint_ids.push_back(w.id);
    for (const auto& s : sc.schedule.slots) log.slot_ids.push_back(s.id);
    log.sample_period = dt;
    return log;
  }
};

inline std::string log_file_name(const std::string& scenario, std::uint64_t seed) {
  return scenario + "_" + std::to_string(seed) + ".csv";
}

inline void write_log_csv(const TimeSeriesLog& log, std::ostream& out) {
  out << "t,V,B,L,C,O,S,robot_W";
  for (const auto& id : log.waypoint_ids) out << ",cnt_" << id;
  out << ",min_person_dist\n";
  const std::size_t n = log.waypoints();
  for (std::size_t i = 0; i < log.size(); ++i) {
    out << csv::format(log.t[i]) << ',' << csv::format(log.V[i]) << ',' << csv::format(log.B[i]) << ','
        << csv::format(log.L[i]) << ',' << log.C[i] << ',' << log.O[i] << ','
        << log.slot_ids[static_cast<std::size_t>(log.S[i])] << ','
        << log.waypoint_ids[static_cast<std::size_t>(log.robot_w[i])];
    for (std::size_t w = 0; w < n; ++w) out << ',' << log.counts[i * n + w];
    out << ',' << csv::format(log.min_person_dist[i]) << '\n';
  }
}

inline void write_log_csv(const TimeSeriesLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_log_csv(log, out);
}

/// Reads a log written by write_log_csv. Waypoint columns are taken from the
/// header; slot ids are resolved against `sc` when given, otherwise in order of
/// first appearance.
inline TimeSeriesLog read_log_csv(const std::string& path, const Scenario* sc = nullptr) {
  const auto table = csv::read(path);
  const auto& h = table.header;
  const std::vector<std::string> fixed{"t", "V", "B", "L", "C", "O", "S", "robot_W"};
  if (h.size() < fixed.size() + 1 || h.back() != "min_person_dist")
    throw DocumentError(path, "not a time-series log header");
  for (std::size_t i = 0; i < fixed.size(); ++i)
    if (h[i] != fixed[i]) throw DocumentError(path, "expected column '" + fixed[i] + "'");
  TimeSeriesLog log;
  for (std::size_t i = fixed.size(); i + 1 < h.size(); ++i) {
    if (h[i].rfind("cnt_", 0) != 0) throw DocumentError(path, "unexpected column '" + h[i] + "'");
    log.waypoint_ids.push_back(h[i].substr(4));
  }
  if (sc) {
    for (const auto& s : sc->schedule.slots) log.slot_ids.push_back(s.id);
    if (sc->graph.size() != log.waypoints()) throw DocumentError(path, "waypoint columns do not match the scenario");
  }
  auto id_of = [](std::vector<std::string>& ids, const std::string& v, bool grow) {
    for (std::size_t k = 0; k < ids.size(); ++k)
      if (ids[k] == v) return static_cast<int>(k);
    if (!grow) throw Error("unknown id '" + v + "'");
    ids.push_back(v);
    return static_cast<int>(ids.size() - 1);
  };
  const std::size_t n = log.waypoints();
  for (const auto& row : table.rows) {
    log.t.push_back(csv::parse_double(row[0]));
    log.V.push_back(csv::parse_double(row[1]));
    log.B.push_back(csv::parse_double(row[2]));
    log.L.push_back(csv::parse_double(row[3]));
    log.C.push_back(static_cast<int>(csv::parse_double(row[4])));
    log.O.push_back(static_cast<int>(csv::parse_double(row[5])));
    log.S.push_back(id_of(log.slot_ids, row[6], sc == nullptr));
    log.robot_w.push_back(id_of(log.waypoint_ids, row[7], false));
    for (std::size_t w = 0; w < n; ++w) log.counts.push_back(static_cast<int>(csv::parse_double(row[8 + w])));
    log.min_person_dist.push_back(csv::parse_double(row.back()));
  }
  if (log.size() >= 2) log.sample_period = log.t[1] - log.t[0];
  return log;
}

}  // namespace causalnav
