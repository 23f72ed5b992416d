#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "causalnav/core/error.hpp"
#include "causalnav/core/geometry.hpp"

namespace causalnav {

inline const std::vector<std::string>& region_labels() {
  static const std::vector<std::string> labels{"office",   "canteen", "shelf", "corridor",
                                               "entrance", "toilet",  "charging"};
  return labels;
}

struct Waypoint {
  std::string id;
  Vec2 position;
  double radius = 1.0;  // metres
  std::string label;
};

struct Arc {
  int a = 0;
  int b = 0;
  double length = 0.0;  // metres, always recomputed from the endpoint positions
};

/// Euclidean distance between waypoint centres.
inline double pairwise_distance(const Waypoint& a, const Waypoint& b) {
  return distance(a.position, b.position);
}

/// Undirected waypoint graph. Construction validates every invariant: positive
/// radii, unique ids, no self-arcs or duplicate arcs, connectivity.
class WaypointGraph {
 public:
  WaypointGraph() = default;

  WaypointGraph(std::vector<Waypoint> waypoints, const std::vector<std::pair<int, int>>& arcs,
                std::vector<int> goal_stations = {}, int charging_station = -1)
      : waypoints_(std::move(waypoints)),
        goal_stations_(std::move(goal_stations)),
        charging_(charging_station) {
    if (waypoints_.empty()) throw GraphError("graph has no waypoints");
    for (std::size_t i = 0; i < waypoints_.size(); ++i) {
      const auto& w = waypoints_[i];
      if (!(w.radius > 0.0)) throw GraphError("waypoint '" + w.id + "' radius must be > 0");
      if (!index_.emplace(w.id, static_cast<int>(i)).second)
        throw GraphError("duplicate waypoint id '" + w.id + "'");
    }
    adjacency_.resize(waypoints_.size());
    for (auto [a, b] : arcs) add_arc(a, b);
    for (int g : goal_stations_) check_index(g, "goal station");
    if (charging_ >= 0) check_index(charging_, "charging station");
    if (!connected()) throw GraphError("graph is disconnected");
  }

  std::size_t size() const { return waypoints_.size(); }
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  const Waypoint& waypoint(int i) const { return waypoints_.at(static_cast<std::size_t>(i)); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<int>& goal_stations() const { return goal_stations_; }
  int charging_station() const { return charging_; }

  /// (neighbour, arc index) pairs, sorted by neighbour index.
  const std::vector<std::pair<int, int>>& neighbors(int i) const {
    return adjacency_.at(static_cast<std::size_t>(i));
  }

  std::optional<int> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int index_of(const std::string& id) const {
    if (auto i = find(id)) return *i;
    throw GraphError("unknown waypoint '" + id + "'");
  }

  std::optional<double> arc_length(int a, int b) const {
    for (auto [n, arc] : neighbors(a))
      if (n == b) return arcs_[static_cast<std::size_t>(arc)].length;
    return std::nullopt;
  }

  bool has_arc(int a, int b) const { return arc_length(a, b).has_value(); }

  double distance_between(int a, int b) const {
    return pairwise_distance(waypoint(a), waypoint(b));
  }

  /// Nearest waypoint centre to `p`; ties resolve to the lower index.
  int nearest(Vec2 p) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < waypoints_.size(); ++i) {
      const double d = distance(p, waypoints_[i].position);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  bool connected() const {
    std::vector<char> seen(waypoints_.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (auto [v, arc] : adjacency_[static_cast<std::size_t>(u)]) {
        (void)arc;
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == waypoints_.size();
  }

  /// Connected subgraph of `n` waypoints grown breadth-first from `root`
  /// (neighbours visited in index order). Station lists are filtered.
  WaypointGraph breadth_first_subgraph(std::size_t n, int root = 0) const {
    if (n == 0 || n > size()) throw GraphError("subgraph size out of range");
    std::vector<int> order{root};
    std::vector<char> seen(size(), 0);
    seen[static_cast<std::size_t>(root)] = 1;
    for (std::size_t h = 0; h < order.size() && order.size() < n; ++h)
      for (auto [v, arc] : neighbors(order[h])) {
        (void)arc;
        if (!seen[static_cast<std::size_t>(v)] && order.size() < n) {
          seen[static_cast<std::size_t>(v)] = 1;
          order.push_back(v);
        }
      }
    std::sort(order.begin(), order.end());
    std::vector<int> remap(size(), -1);
    std::vector<Waypoint> wps;
    for (int old : order) {
      remap[static_cast<std::size_t>(old)] = static_cast<int>(wps.size());
      wps.push_back(waypoint(old));
    }
    std::vector<std::pair<int, int>> sub_arcs;
    for (const auto& arc : arcs_) {
      const int a = remap[static_cast<std::size_t>(arc.a)], b = remap[static_cast<std::size_t>(arc.b)];
      if (a >= 0 && b >= 0) sub_arcs.emplace_back(a, b);
    }
    std::vector<int> goals;
    for (int g : goal_stations_)
      if (remap[static_cast<std::size_t>(g)] >= 0) goals.push_back(remap[static_cast<std::size_t>(g)]);
    const int charging = charging_ >= 0 ? remap[static_cast<std::size_t>(charging_)] : -1;
    return WaypointGraph(std::move(wps), sub_arcs, std::move(goals), charging);
  }

 private:
  void check_index(int i, const char* what) const {
    if (i < 0 || static_cast<std::size_t>(i) >= waypoints_.size())
      throw GraphError(std::string(what) + " index out of range");
  }

  void add_arc(int a, int b) {
    check_index(a, "arc endpoint");
    check_index(b, "arc endpoint");
    if (a == b) throw GraphError("self-arc at '" + waypoints_[static_cast<std::size_t>(a)].id + "'");
    if (has_arc(a, b))
      throw GraphError("duplicate arc " + waypoints_[static_cast<std::size_t>(a)].id + "-" +
                       waypoints_[static_cast<std::size_t>(b)].id);
    const int idx = static_cast<int>(arcs_.size());
    arcs_.push_back({a, b, distance_between(a, b)});
    auto insert_sorted = [](auto& list, std::pair<int, int> e) {
      list.insert(std::upper_bound(list.begin(), list.end(), e), e);
    };
    insert_sorted(adjacency_[static_cast<std::size_t>(a)], {b, idx});
    insert_sorted(adjacency_[static_cast<std::size_t>(b)], {a, idx});
  }

  std::vector<Waypoint> waypoints_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  std::map<std::string, int> index_;
  std::vector<int> goal_stations_;
  int charging_ = -1;
};

/// All-pairs metric shortest paths over arc lengths, with first-hop table.
/// Ties between equal-length routes resolve deterministically by index.
class ShortestPathTable {
 public:
  explicit ShortestPathTable(const WaypointGraph& g) : n_(g.size()) {
    dist_.assign(n_ * n_, std::numeric_limits<double>::infinity());
    next_.assign(n_ * n_, -1);
    for (std::size_t target = 0; target < n_; ++target) run_from(g, static_cast<int>(target));
  }

  double distance(int from, int to) const { return dist_[idx(from, to)]; }

  /// Waypoint sequence from `from` to `to`, both inclusive.
  std::vector<int> path(int from, int to) const {
    std::vector<int> out{from};
    int cur = from;
    while (cur != to) {
      cur = next_[idx(cur, to)];
      if (cur < 0) throw GraphError("no path");
      out.push_back(cur);
    }
    return out;
  }

 private:
  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b);
  }

  // Dijkstra rooted at `target`; the parent of u is u's first hop toward target.
  void run_from(const WaypointGraph& g, int target) {
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    std::vector<char> done(n_, 0);
    dist_[idx(target, target)] = 0.0;
    next_[idx(target, target)] = target;
    pq.emplace(0.0, target);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[static_cast<std::size_t>(u)]) continue;
      done[static_cast<std::size_t>(u)] = 1;
      for (auto [v, arc] : g.neighbors(u)) {
        const double nd = d + g.arcs()[static_cast<std::size_t>(arc)].length;
        double& cur = dist_[idx(v, target)];
        if (nd < cur) {
          cur = nd;
          next_[idx(v, target)] = u;
          pq.emplace(nd, v);
        }
      }
    }
  }

  std::size_t n_;
  std::vector<double> dist_;
  std::vector<int> next_;
};

}  // namespace causalnav
