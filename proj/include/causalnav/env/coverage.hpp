#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "causalnav/env/waypoint_graph.hpp"

namespace causalnav {

/// Open coverage tour of every waypoint. `order` is the visiting sequence in
/// the metric closure; `arcs` expands it into consecutive graph arcs, each of
/// which is one cleaning task.
struct CoverageRoute {
  std::vector<int> order;
  std::vector<std::pair<int, int>> arcs;
  double length = 0.0;
};

inline constexpr std::size_t kExactCoverageLimit = 14;

namespace detail {

inline double open_tour_length(const std::vector<int>& order, const ShortestPathTable& sp) {
  double len = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) len += sp.distance(order[i - 1], order[i]);
  return len;
}

// Held-Karp over subsets, free start and free end.
inline std::vector<int> exact_open_tour(std::size_t n, const ShortestPathTable& sp) {
  const std::size_t full = (std::size_t{1} << n) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp((full + 1) * n, inf);
  std::vector<int> parent((full + 1) * n, -1);
  for (std::size_t j = 0; j < n; ++j) dp[(std::size_t{1} << j) * n + j] = 0.0;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const double base = dp[mask * n + j];
      if (base == inf) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double cand = base + sp.distance(static_cast<int>(j), static_cast<int>(k));
        if (cand < dp[next * n + k]) {
          dp[next * n + k] = cand;
          parent[next * n + k] = static_cast<int>(j);
        }
      }
    }
  }
  std::size_t end = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (dp[full * n + j] < dp[full * n + end]) end = j;
  std::vector<int> order;
  std::size_t mask = full;
  int cur = static_cast<int>(end);
  while (cur >= 0) {
    order.push_back(cur);
    const int prev = parent[mask * n + static_cast<std::size_t>(cur)];
    mask &= ~(std::size_t{1} << cur);
    cur = prev;
  }
  return {order.rbegin(), order.rend()};
}

inline std::vector<int> nearest_neighbour_tour(std::size_t n, int start, const ShortestPathTable& sp) {
  std::vector<int> order{start};
  std::vector<char> used(n, 0);
  used[static_cast<std::size_t>(start)] = 1;
  while (order.size() < n) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (used[k]) continue;
      const double d = sp.distance(order.back(), static_cast<int>(k));
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(k);
      }
    }
    used[static_cast<std::size_t>(best)] = 1;
    order.push_back(best);
  }
  return order;
}

// 2-opt for an open path: reversing order[i..j] swaps edges (i-1,i) and (j,j+1);
// a missing neighbour at either end contributes nothing.
inline void two_opt(std::vector<int>& order, const ShortestPathTable& sp) {
  const std::size_t n = order.size();
  auto d = [&](std::size_t a, std::size_t b) { return sp.distance(order[a], order[b]); };
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double before = 0.0, after = 0.0;
        if (i > 0) {
          before += d(i - 1, i);
          after += d(i - 1, j);
        }
        if (j + 1 < n) {
          before += d(j, j + 1);
          after += d(i, j + 1);
        }
        if (after < before - 1e-12) {
          std::reverse(order.begin() + static_cast<long>(i), order.begin() + static_cast<long>(j) + 1);
          improved = true;
        }
      }
    }
  }
}

}  // namespace detail

/// Shortest open walk visiting every waypoint: exact dynamic programming up to
/// kExactCoverageLimit waypoints, nearest-neighbour (best start) plus 2-opt beyond.
inline CoverageRoute coverage_route(const WaypointGraph& graph) {
  if (!graph.connected()) throw GraphError("coverage route needs a connected graph");
  const std::size_t n = graph.size();
  const ShortestPathTable sp(graph);
  CoverageRoute route;
  if (n == 1) {
    route.order = {0};
    return route;
  }
  if (n <= kExactCoverageLimit) {
    route.order = detail::exact_open_tour(n, sp);
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
      auto tour = detail::nearest_neighbour_tour(n, static_cast<int>(s), sp);
      detail::two_opt(tour, sp);
      const double len = detail::open_tour_length(tour, sp);
      if (len < best - 1e-12) {
        best = len;
        route.order = std::move(tour);
      }
    }
  }
  for (std::size_t i = 1; i < route.order.size(); ++i) {
    const auto hop = sp.path(route.order[i - 1], route.order[i]);
    for (std::size_t k = 1; k < hop.size(); ++k) {
      route.arcs.emplace_back(hop[k - 1], hop[k]);
      route.length += *graph.arc_length(hop[k - 1], hop[k]);
    }
  }
  return route;
}

}  // namespace causalnav
