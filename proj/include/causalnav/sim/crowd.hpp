#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <vector>

#include "causalnav/core/rng.hpp"
#include "causalnav/env/scenario.hpp"
#include "causalnav/sim/params.hpp"

namespace causalnav {

/// Inverse CDF in index order: the first index whose cumulative mass exceeds u.
inline int sample_index(const std::vector<double>& probs, double u) {
  double cum = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cum += probs[i];
    last_positive = static_cast<int>(i);
    if (u < cum) return last_positive;
  }
  if (last_positive < 0) throw Error("sample_index: distribution has no mass");
  return last_positive;  // u within rounding of 1
}

inline int sample_goal(const TimeSlot& slot, Rng& rng) { return sample_index(slot.occupancy, uniform01(rng)); }

inline int sample_goal(const std::string& slot_id, const ScenarioSchedule& schedule, Rng& rng) {
  return sample_goal(schedule.slots[static_cast<std::size_t>(schedule.index_of(slot_id))], rng);
}

/// Workers of one time-slot. Each worker owns two random streams derived from
/// (seed, slot, worker), so its goals and motion never depend on the robot.
class Crowd {
 public:
  Crowd() = default;

  Crowd(const Scenario& sc, const ShortestPathTable& paths, const WorkerParams& params, std::uint64_t seed,
        int slot_index)
      : graph_(&sc.graph), paths_(&paths), params_(params) {
    const auto& slot = sc.schedule.slots.at(static_cast<std::size_t>(slot_index));
    occupancy_ = slot.occupancy;
    const auto s = static_cast<std::uint64_t>(slot_index);
    workers_.resize(static_cast<std::size_t>(slot.workers));
    shown_.resize(workers_.size());
    for (std::size_t i = 0; i < workers_.size(); ++i) {
      auto& w = workers_[i];
      w.goal_rng.seed(derive_seed(seed, {1, s, i}));
      w.noise_rng.seed(derive_seed(seed, {2, s, i}));
      draw_goal(w);
      w.at = w.goal;
      w.nominal = w.spot;
      w.dwelling = true;
      w.dwell_left = w.dwell * uniform01(w.goal_rng);
      shown_[i] = jitter(w, 1e9);
    }
  }

  void step(double dt) {
    for (std::size_t i = 0; i < workers_.size(); ++i) {
      auto& w = workers_[i];
      if (w.dwelling) {
        w.dwell_left -= dt;
        if (w.dwell_left <= 0.0) depart(w);
      } else {
        walk(w, params_.speed * dt);
      }
      shown_[i] = jitter(w, dt);
    }
  }

  std::size_t size() const { return workers_.size(); }
  const std::vector<Vec2>& positions() const { return shown_; }

  /// People per waypoint by nearest waypoint centre; sums to the population.
  std::vector<int> counts() const {
    std::vector<int> out(graph_ ? graph_->size() : 0, 0);
    for (const auto& p : shown_) ++out[static_cast<std::size_t>(graph_->nearest(p))];
    return out;
  }

  /// Every goal drawn so far by worker i, in order.
  const std::vector<int>& goal_history(std::size_t i) const { return workers_.at(i).history; }

 private:
  struct Worker {
    Rng goal_rng, noise_rng;
    Vec2 nominal, spot, offset;
    std::deque<Vec2> route;
    int at = 0, goal = 0;
    double dwell = 0.0, dwell_left = 0.0;
    bool dwelling = true;
    std::vector<int> history;
  };

  void draw_goal(Worker& w) {
    w.goal = sample_index(occupancy_, uniform01(w.goal_rng));
    w.dwell = uniform(w.goal_rng, params_.dwell_min, params_.dwell_max);
    const auto& wp = graph_->waypoint(w.goal);
    const double r = 0.8 * wp.radius * std::sqrt(uniform01(w.goal_rng));
    const double a = 2.0 * std::numbers::pi * uniform01(w.goal_rng);
    w.spot = wp.position + Vec2{r * std::cos(a), r * std::sin(a)};
    w.history.push_back(w.goal);
  }

  void depart(Worker& w) {
    draw_goal(w);
    w.route.clear();
    const auto path = paths_->path(w.at, w.goal);
    for (std::size_t k = 1; k + 1 < path.size(); ++k) w.route.push_back(graph_->waypoint(path[k]).position);
    w.route.push_back(w.spot);
    w.dwelling = false;
  }

  void walk(Worker& w, double budget) {
    while (budget > 0.0 && !w.route.empty()) {
      const Vec2 target = w.route.front();
      const double d = distance(w.nominal, target);
      if (d <= budget) {
        w.nominal = target;
        budget -= d;
        w.route.pop_front();
      } else {
        w.nominal = w.nominal + (target - w.nominal) * (budget / d);
        budget = 0.0;
      }
    }
    if (w.route.empty()) {
      w.at = w.goal;
      w.dwelling = true;
      w.dwell_left = w.dwell;
    }
  }

  // Ornstein-Uhlenbeck offset with a 2 s correlation time, clipped at 3 sigma,
  // so jitter does not flicker people across region boundaries every step.
  Vec2 jitter(Worker& w, double dt) {
    const double s = params_.noise_sigma;
    if (s <= 0.0) return w.nominal;
    const double a = std::exp(-dt / 2.0), b = std::sqrt(1.0 - a * a) * s;
    w.offset.x = std::clamp(a * w.offset.x + b * standard_normal(w.noise_rng), -3 * s, 3 * s);
    w.offset.y = std::clamp(a * w.offset.y + b * standard_normal(w.noise_rng), -3 * s, 3 * s);
    return w.nominal + w.offset;
  }

  const WaypointGraph* graph_ = nullptr;
  const ShortestPathTable* paths_ = nullptr;
  WorkerParams params_;
  std::vector<double> occupancy_;
  std::vector<Worker> workers_;
  std::vector<Vec2> shown_;
};

}  // namespace causalnav
