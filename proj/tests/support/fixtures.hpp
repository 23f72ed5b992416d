#pragma once

#include <string>
#include <vector>

#include "causalnav/core/rng.hpp"
#include "causalnav/env/scenario.hpp"

namespace fixtures {

// Two waypoints 10 m apart joined by one arc, one slot.
inline std::string two_waypoint_doc(int workers = 0) {
  return R"({
    "name": "pair",
    "workers": )" + std::to_string(workers) + R"(,
    "waypoints": [
      {"id": "A", "x": 0, "y": 0, "radius": 1.5, "label": "shelf"},
      {"id": "B", "x": 10, "y": 0, "radius": 1.5, "label": "shelf"}
    ],
    "arcs": [["A", "B"]],
    "stations": {"goals": ["A", "B"], "charging": "A"},
    "slots": [
      {"id": "S1", "start": "08:00", "end": "09:00", "occupancy": {"A": 0.5, "B": 0.5},
       "task": {"kind": "pick_place", "pick": ["A"], "place": ["B"]}, "task_count": 4}
    ]
  })";
}

// Random connected planar-ish graph: a random spanning tree plus extra arcs.
inline causalnav::WaypointGraph random_graph(std::uint64_t seed, int n, int extra_arcs) {
  using namespace causalnav;
  Rng rng(seed);
  std::vector<Waypoint> wps;
  for (int i = 0; i < n; ++i)
    wps.push_back({"w" + std::to_string(i), {uniform(rng, 0, 20), uniform(rng, 0, 20)}, 1.0, "shelf"});
  std::vector<std::pair<int, int>> arcs;
  auto has = [&](int a, int b) {
    for (auto [x, y] : arcs)
      if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
  };
  for (int i = 1; i < n; ++i) arcs.emplace_back(static_cast<int>(uniform_index(rng, static_cast<std::size_t>(i))), i);
  for (int k = 0, tries = 0; k < extra_arcs && tries < 1000; ++tries) {
    const int a = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    const int b = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    if (a == b || has(a, b)) continue;
    arcs.emplace_back(a, b);
    ++k;
  }
  return WaypointGraph(std::move(wps), arcs);
}

// Floyd-Warshall over arc lengths.
inline std::vector<std::vector<double>> floyd(const causalnav::WaypointGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 1e300));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& a : g.arcs()) {
    d[static_cast<std::size_t>(a.a)][static_cast<std::size_t>(a.b)] = a.length;
    d[static_cast<std::size_t>(a.b)][static_cast<std::size_t>(a.a)] = a.length;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace fixtures
