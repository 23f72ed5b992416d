// Train a small model on the desk floor, ask it one interventional question
// and plan one delivery with it.

#include <iostream>

#include "causalnav.hpp"

#ifndef CAUSALNAV_DATA_DIR
#define CAUSALNAV_DATA_DIR "."
#endif

using namespace causalnav;

int main() {
  const auto sc = load_scenario_file(std::string(CAUSALNAV_DATA_DIR) + "/scenarios/desk20.json");
  auto p = profile_parameters("desk");
  p.sim.slot_duration = 600;  // ten simulated minutes per slot keeps this quick

  const auto trained = train_model(sc, p, 100, "reference");
  std::cout << "trained on " << trained.data.rows() << " rows\n";

  // Expected battery change per sample when driving at full speed on a clear floor.
  const auto& m = trained.model;
  QuerySpec q;
  q.target = "L";
  q.interventions["V"] = code_of_value(m.schema, "V", 0.5);
  q.conditions["O"] = code_of_label(m.schema, "O", "0");
  q.conditions["C"] = code_of_label(m.schema, "C", "0");
  std::cout << "E[L | do(V=0.5)] = " << expected_value(do_query(m, q), m.schema, "L") << " % per sample\n";

  const int slot = 1;  // S2, morning peak
  const auto est = estimate_arcs(sc.graph, m, slot, 0, p.policy.query_velocity);
  const auto plan = plan_path(sc.graph, sc.graph.index_of("T1"), sc.graph.index_of("B3"), est, p.weights);
  std::cout << "route:";
  for (int w : plan.path) std::cout << ' ' << sc.graph.waypoint(w).id;
  std::cout << "\n" << plan.distance << " m, predicted battery cost " << plan.C_L << " %\n";
  for (double battery : {80.0, 20.1})
    std::cout << "at " << battery << " %: " << to_string(decide_task(plan, battery, p.policy)) << "\n";
}
