#pragma once

#include <vector>

#include "causalnav/core/rng.hpp"
#include "causalnav/env/scenario.hpp"

namespace causalnav {

/// A robot task: travel from `start` to `goal`. When `obstacle` is set, an
/// obstacle sits on arc floor(obstacle_u * arcs) of whichever path is chosen.
struct PlannedTask {
  int id = 0;
  int slot = 0;
  int start = 0;
  int goal = 0;
  bool obstacle = false;
  double obstacle_u = 0.0;

  int obstacle_arc(std::size_t path_arcs) const {
    if (!obstacle || path_arcs == 0) return -1;
    return static_cast<int>(std::min(path_arcs - 1, static_cast<std::size_t>(obstacle_u * static_cast<double>(path_arcs))));
  }
};

/// Endless task sequence for one slot. Pick/place and service templates
/// alternate goals between the two station groups, so task k runs from goal k
/// to goal k+1. Coverage cycles through the cleaning route's arcs.
class TaskStream {
 public:
  TaskStream(const Scenario& sc, int slot_index, std::uint64_t seed, double obstacle_probability)
      : sc_(&sc), slot_(slot_index), p_(obstacle_probability),
        goal_rng_(derive_seed(seed, {3, static_cast<std::uint64_t>(slot_index)})),
        obstacle_rng_(derive_seed(seed, {4, static_cast<std::uint64_t>(slot_index)})) {
    const auto& t = tmpl();
    if (t.kind == TaskKind::Coverage) {
      if (sc.coverage.arcs.empty()) throw Error("coverage slot on a graph without a route");
    } else {
      if (t.pick.empty() || t.place.empty()) throw Error("task template has empty station groups");
      current_ = draw(t.pick);
    }
  }

  PlannedTask next() {
    PlannedTask task;
    task.id = count_;
    task.slot = slot_;
    const auto& t = tmpl();
    if (t.kind == TaskKind::Coverage) {
      const auto& arc = sc_->coverage.arcs[static_cast<std::size_t>(count_) % sc_->coverage.arcs.size()];
      task.start = arc.first;
      task.goal = arc.second;
    } else {
      task.start = current_;
      task.goal = draw(count_ % 2 == 0 ? t.place : t.pick);
      current_ = task.goal;
    }
    // both draws are always consumed so the obstacle stream stays aligned
    task.obstacle = uniform01(obstacle_rng_) < p_;
    task.obstacle_u = uniform01(obstacle_rng_);
    ++count_;
    return task;
  }

 private:
  const TaskTemplate& tmpl() const { return sc_->schedule.slots.at(static_cast<std::size_t>(slot_)).task; }
  int draw(const std::vector<int>& group) { return group[uniform_index(goal_rng_, group.size())]; }

  const Scenario* sc_;
  int slot_;
  double p_;
  Rng goal_rng_, obstacle_rng_;
  int current_ = 0;
  int count_ = 0;
};

inline std::vector<PlannedTask> task_list(const Scenario& sc, int slot_index, std::uint64_t seed,
                                          double obstacle_probability, int count) {
  TaskStream stream(sc, slot_index, seed, obstacle_probability);
  std::vector<PlannedTask> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(stream.next());
  return out;
}

}  // namespace causalnav
