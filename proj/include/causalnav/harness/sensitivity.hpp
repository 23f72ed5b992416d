#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "causalnav/harness/config.hpp"
#include "causalnav/harness/metrics.hpp"

namespace causalnav {

struct SensitivityRow {
  HeuristicWeights weights;
  ApproachMetrics metrics;
  bool kept = false;     // no collisions and every task succeeded
  bool is_default = false;
  int rank = 0;          // 1-based among kept rows, 0 when excluded

  double success_percent() const { return 100.0 * metrics.success_rate(); }
};

/// Full Causal on a few tasks from the chosen slots, once per weight triple.
/// Kept rows are ranked by total task time, then total distance, then
/// battery; ties keep grid order.
inline std::vector<SensitivityRow> sensitivity_sweep(const Scenario& sc, const CausalInferenceModel& model,
                                                     const Parameters& p) {
  const auto& cfg = p.sensitivity;
  ExperimentOptions opt;
  opt.tasks_per_slot = cfg.tasks;
  for (const auto& id : cfg.slots) {
    bool found = false;
    for (std::size_t s = 0; s < sc.schedule.slots.size(); ++s)
      if (sc.schedule.slots[s].id == id) {
        opt.slots.push_back(static_cast<int>(s));
        found = true;
      }
    if (!found) throw Error("sensitivity: unknown slot '" + id + "'");
  }

  std::vector<ApproachConfig> grid;
  for (double a : cfg.lambda_delta)
    for (double d : cfg.lambda_D)
      for (double l : cfg.lambda_L) grid.push_back(make_approach("full_causal", {a, d, l}, p.policy));
  const auto runs = run_ablation(sc, grid, &model, p.sim, {cfg.seed}, opt);

  const HeuristicWeights def{1, 10, 5};
  std::vector<SensitivityRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SensitivityRow r;
    r.weights = grid[i].weights;
    r.metrics = compute_approach_metrics({&runs[i]});
    r.kept = r.metrics.collisions == 0 && r.metrics.success == r.metrics.tasks;
    r.is_default = r.weights.lambda_delta == def.lambda_delta && r.weights.lambda_D == def.lambda_D &&
                   r.weights.lambda_L == def.lambda_L;
    rows.push_back(std::move(r));
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].kept) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto &x = rows[a].metrics, &y = rows[b].metrics;
    if (x.time_total() != y.time_total()) return x.time_total() < y.time_total();
    if (x.distance_total() != y.distance_total()) return x.distance_total() < y.distance_total();
    return x.battery_total() < y.battery_total();
  });
  for (std::size_t k = 0; k < order.size(); ++k) rows[order[k]].rank = static_cast<int>(k + 1);
  return rows;
}

}  // namespace causalnav
