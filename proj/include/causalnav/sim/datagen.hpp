#pragma once

#include <cmath>

#include "causalnav/sim/execute.hpp"
#include "causalnav/sim/tasks.hpp"
#include "causalnav/sim/timeseries_log.hpp"

namespace causalnav {

/// Training-data run: every slot in order for `slot_duration` simulated
/// seconds, the robot serving the slot's tasks along shortest paths and
/// docking whenever its battery drops below `recharge_threshold`. Battery and
/// robot position carry over between slots.
inline TimeSeriesLog simulate(const Scenario& sc, const SimParams& params, std::uint64_t seed) {
  const ShortestPathTable paths(sc.graph);
  World world(sc, paths, params, seed);
  auto log = TimeSeriesLog::for_scenario(sc, params.battery.dt);
  auto record = [&](const StepRecord& r) { log.append(r, world.crowd().counts()); };

  const int charger = sc.graph.charging_station();
  int at = -1;
  double slot_end = 0.0;
  for (std::size_t s = 0; s < sc.schedule.slots.size(); ++s) {
    world.begin_slot(static_cast<int>(s));
    TaskStream tasks(sc, static_cast<int>(s), seed, params.obstacle_probability);
    slot_end += params.slot_duration;
    while (world.time() < slot_end) {
      const PlannedTask task = tasks.next();
      if (at < 0) {
        at = task.start;
        world.place_robot(at);
      }
      const auto path = paths.path(at, task.goal);
      const int arcs = static_cast<int>(path.size()) - 1;
      if (arcs == 0) {
        record(world.step());
      } else {
        const auto ex = execute_route(world, path, task.obstacle_arc(static_cast<std::size_t>(arcs)),
                                      params.task_deadline, -1.0, record);
        if (!ex.completed) world.place_robot(task.goal);
      }
      at = task.goal;

      if (charger >= 0 && world.battery() < params.recharge_threshold) {
        if (at != charger) {
          const auto ex = execute_route(world, paths.path(at, charger), -1, 1e9, -1.0, record);
          if (!ex.completed) world.place_robot(charger);
        }
        at = charger;
        world.set_charging(true);
        // stop before a step would overshoot 100 so the log never clamps
        const double gain = params.battery.dt * params.battery.charge_rate;
        while (world.battery() + gain <= 100.0) record(world.step());
        world.set_charging(false);
      }
    }
  }
  return log;
}

}  // namespace causalnav
