#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "causalnav/env/waypoint_graph.hpp"
#include "causalnav/infer/query.hpp"

namespace causalnav {

/// Weights of the arc cost: distance, density at the arrival waypoint, battery.
struct HeuristicWeights {
  double lambda_delta = 1.0;
  double lambda_D = 10.0;
  double lambda_L = 5.0;

  void validate() const {
    if (!(lambda_delta >= 0 && lambda_D >= 0 && lambda_L >= 0)) throw PlanningError("heuristic weights must be >= 0");
    if (lambda_delta + lambda_D + lambda_L == 0) throw PlanningError("heuristic weights are all zero");
  }
};

struct ArcEstimate {
  int from = 0;
  int to = 0;
  double delta = 0.0;         // m
  double D_hat = 0.0;         // persons/m^2 at `to`
  double L_hat = 0.0;         // % per second at the query velocity
  double battery_cost = 0.0;  // %
};

/// Per-slot cost inputs. Densities are per waypoint; the battery drain is the
/// same for every metre travelled at `velocity`.
struct ArcEstimates {
  std::vector<double> density;
  double L_hat_step = 0.0;     // expected L per training row
  double sample_period = 1.0;  // s per training row
  double velocity = 0.5;       // m/s

  double L_hat_per_second() const { return L_hat_step / sample_period; }

  ArcEstimate arc(const WaypointGraph& g, int from, int to) const {
    const auto len = g.arc_length(from, to);
    if (!len) throw PlanningError("no arc " + g.waypoint(from).id + "-" + g.waypoint(to).id);
    ArcEstimate e;
    e.from = from;
    e.to = to;
    e.delta = *len;
    e.D_hat = density.empty() ? 0.0 : density[static_cast<std::size_t>(to)];
    e.L_hat = L_hat_per_second();
    e.battery_cost = (e.delta / velocity) * std::abs(e.L_hat);
    return e;
  }

  /// Both directions of every arc.
  std::vector<ArcEstimate> all(const WaypointGraph& g) const {
    std::vector<ArcEstimate> out;
    for (const auto& a : g.arcs()) {
      out.push_back(arc(g, a.a, a.b));
      out.push_back(arc(g, a.b, a.a));
    }
    return out;
  }
};

/// Expected density per waypoint under do(S = slot) and the expected battery
/// change under do(V = v) given the charging flag.
inline ArcEstimates estimate_arcs(const WaypointGraph& g, const CausalInferenceModel& m, int slot, int charging, double v) {
  const auto& V = m.schema.at("V");
  if (!(v > 0) || v < V.bins.low || v > V.bins.high)
    throw PlanningError("query velocity " + std::to_string(v) + " outside the learned range of V [" +
                        std::to_string(V.bins.low) + ", " + std::to_string(V.bins.high) + "]");
  ArcEstimates est;
  est.velocity = v;
  est.sample_period = m.sample_period;
  est.density.resize(g.size());
  const auto& W = m.schema.at("W");
  for (std::size_t w = 0; w < g.size(); ++w) {
    const int code = W.code_of_label(g.waypoint(static_cast<int>(w)).id);
    const auto dist = do_query(m, {{{"S", slot}}, {{"W", code}}, "D"});
    est.density[w] = expected_value(dist, m.schema, "D");
  }
  const auto dist = do_query(m, {{{"V", V.bins.code(v)}}, {{"C", charging}}, "L"});
  est.L_hat_step = expected_value(dist, m.schema, "L");
  return est;
}

}  // namespace causalnav
