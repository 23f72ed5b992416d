#pragma once

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "causalnav/plan/estimates.hpp"

namespace causalnav {

struct PathPlan {
  std::vector<int> path;
  std::vector<ArcEstimate> arcs;
  double total_cost = 0.0;
  double C_L = 0.0;      // % battery the path is expected to use
  double distance = 0.0;  // m
  std::size_t expansions = 0;
};

inline double arc_cost(const ArcEstimate& e, const HeuristicWeights& w) {
  return w.lambda_delta * e.delta + w.lambda_D * e.D_hat + w.lambda_L * e.battery_cost;
}

namespace detail {

inline bool costs_tie(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Path order: cost (relative tolerance 1e-9), then arc count, then the
/// waypoint id sequence.
inline bool path_less(const WaypointGraph& g, double ca, const std::vector<int>& a, double cb, const std::vector<int>& b) {
  if (!costs_tie(ca, cb)) return ca < cb;
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return g.waypoint(a[i]).id < g.waypoint(b[i]).id;
  return false;
}

}  // namespace detail

/// A* from start to goal. g sums arc_cost; the guide is lambda_delta times
/// the straight-line distance, which never overestimates.
inline PathPlan plan_path(const WaypointGraph& g, int start, int goal, const ArcEstimates& est, const HeuristicWeights& w) {
  w.validate();
  const std::size_t n = g.size();
  if (start < 0 || goal < 0 || static_cast<std::size_t>(start) >= n || static_cast<std::size_t>(goal) >= n)
    throw PlanningError("start or goal outside the graph");
  auto guide = [&](int u) { return w.lambda_delta * distance(g.waypoint(u).position, g.waypoint(goal).position); };

  struct Label {
    double cost = 0.0;
    std::vector<int> path;
    bool set = false;
  };
  std::vector<Label> best(n);
  struct Item {
    double f;
    double cost;
    std::vector<int> path;
  };
  auto worse = [&](const Item& a, const Item& b) {
    if (a.f != b.f) return a.f > b.f;
    return detail::path_less(g, b.cost, b.path, a.cost, a.path);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(worse)> open(worse);
  best[static_cast<std::size_t>(start)] = {0.0, {start}, true};
  open.push({guide(start), 0.0, {start}});
  std::size_t expansions = 0;
  while (!open.empty()) {
    Item it = open.top();
    open.pop();
    const int u = it.path.back();
    const auto& bu = best[static_cast<std::size_t>(u)];
    if (it.cost != bu.cost || it.path != bu.path) continue;  // stale entry
    const auto& bg = best[static_cast<std::size_t>(goal)];
    // entries that can still tie the goal's cost are worth expanding
    if (bg.set && u != goal && it.f > bg.cost && !detail::costs_tie(it.f, bg.cost)) break;
    ++expansions;
    if (u == goal) continue;
    for (const auto& [v, arc_index] : g.neighbors(u)) {
      (void)arc_index;
      if (std::find(it.path.begin(), it.path.end(), v) != it.path.end()) continue;
      const double c = it.cost + arc_cost(est.arc(g, u, v), w);
      std::vector<int> p = it.path;
      p.push_back(v);
      auto& bv = best[static_cast<std::size_t>(v)];
      if (bv.set && !detail::path_less(g, c, p, bv.cost, bv.path)) continue;
      bv = {c, p, true};
      open.push({c + guide(v), c, std::move(p)});
    }
  }
  const auto& bg = best[static_cast<std::size_t>(goal)];
  if (!bg.set) throw PlanningError("no path from " + g.waypoint(start).id + " to " + g.waypoint(goal).id);

  PathPlan plan;
  plan.path = bg.path;
  plan.expansions = expansions;
  for (std::size_t i = 1; i < plan.path.size(); ++i) {
    plan.arcs.push_back(est.arc(g, plan.path[i - 1], plan.path[i]));
    plan.total_cost += arc_cost(plan.arcs.back(), w);
    plan.C_L += plan.arcs.back().battery_cost;
    plan.distance += plan.arcs.back().delta;
  }
  return plan;
}

/// Cost of an explicit waypoint sequence, summed in path order.
inline double path_cost(const WaypointGraph& g, const std::vector<int>& path, const ArcEstimates& est, const HeuristicWeights& w) {
  double c = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) c += arc_cost(est.arc(g, path[i - 1], path[i]), w);
  return c;
}

}  // namespace causalnav
