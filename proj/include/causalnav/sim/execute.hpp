#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "causalnav/sim/world.hpp"

namespace causalnav {

struct Execution {
  bool completed = false;
  bool battery_breach = false;  // battery fell below the abort level mid-route
  double elapsed = 0.0;         // s
  double active = 0.0;          // s with V > 0
  double stalled = 0.0;         // s with V = 0 while en route
  double distance = 0.0;        // m
  double battery_spent = 0.0;   // %
  int collisions = 0;
  double min_person_dist = std::numeric_limits<double>::infinity();
  std::vector<double> proximity;  // robot-nearest-person distance, sampled periodically
};

struct NoStepHook {
  void operator()(const StepRecord&) const {}
};

/// Drives the robot along `path` until it arrives, the deadline passes, or the
/// battery drops below `abort_below`.
template <class OnStep = NoStepHook>
Execution execute_route(World& world, const std::vector<int>& path, int obstructed_arc, double deadline,
                        double abort_below = -1.0, OnStep&& on_step = {}) {
  const auto& p = world.params();
  const double dt = p.battery.dt;
  const long long max_steps = std::llround(deadline / dt);
  const long long sample_every = std::max(1LL, std::llround(p.proximity_period / dt));
  world.set_route(path, obstructed_arc >= 0 ? std::optional<int>(obstructed_arc) : std::nullopt);

  Execution ex;
  long long n = 0;
  const double b0 = world.battery();
  while (!world.route_done()) {
    if (n >= max_steps) break;
    const StepRecord r = world.step();
    ++n;
    on_step(r);
    (r.V > 0.0 ? ex.active : ex.stalled) += dt;
    ex.distance += r.moved;
    ex.collisions += r.new_collisions;
    ex.min_person_dist = std::min(ex.min_person_dist, r.min_person_dist);
    if (n % sample_every == 0 && std::isfinite(r.min_person_dist)) ex.proximity.push_back(r.min_person_dist);
    // a breach on the arrival step counts as completion
    if (r.B < abort_below && !world.route_done()) {
      ex.battery_breach = true;
      break;
    }
  }
  ex.completed = world.route_done() && !ex.battery_breach;
  ex.elapsed = static_cast<double>(n) * dt;
  ex.battery_spent = b0 - world.battery();
  return ex;
}

}  // namespace causalnav
