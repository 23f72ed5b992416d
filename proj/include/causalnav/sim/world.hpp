#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "causalnav/sim/battery.hpp"
#include "causalnav/sim/crowd.hpp"
#include "causalnav/sim/proxemics.hpp"

namespace causalnav {

/// Contextual factors visible at one step.
struct ContextState {
  int slot = 0;       // index into the schedule
  int charging = 0;   // C
  int obstacle = 0;   // O
  int robot_w = 0;    // waypoint region containing the robot
};

/// One simulated step.
struct StepRecord {
  double t = 0.0;
  double V = 0.0;
  double B = 0.0;
  double L = 0.0;
  ContextState ctx;
  double min_person_dist = std::numeric_limits<double>::infinity();
  int new_collisions = 0;
  double moved = 0.0;  // metres travelled along the route this step
};

/// Robot plus the current slot's crowd. One instance per run, single-threaded.
class World {
 public:
  World(const Scenario& sc, const ShortestPathTable& paths, const SimParams& params, std::uint64_t seed)
      : sc_(&sc), paths_(&paths), params_(params), seed_(seed), collisions_(params.robot.circumscribed_radius) {
    params_.validate();
  }

  /// Replaces the crowd with the given slot's workers, in their initial state.
  void begin_slot(int slot_index) {
    slot_ = slot_index;
    crowd_ = Crowd(*sc_, *paths_, params_.workers, seed_, slot_index);
    gather_people();
    collisions_.resync(pos_, people_);
  }

  /// Moves the robot to a waypoint centre, dropping any route.
  void place_robot(int waypoint) {
    pos_ = sc_->graph.waypoint(waypoint).position;
    route_.clear();
    seg_ = 0;
    progress_ = 0.0;
    obstructed_.reset();
    stalled_ = false;
    gather_people();
    collisions_.resync(pos_, people_);
  }

  /// Follows `path` (waypoint indices, starting at the robot's waypoint).
  /// `obstructed_arc` indexes the arc path[k] -> path[k+1] carrying an obstacle.
  void set_route(const std::vector<int>& path, std::optional<int> obstructed_arc = std::nullopt) {
    route_ = path;
    seg_ = 0;
    progress_ = 0.0;
    obstructed_ = obstructed_arc;
    if (!route_.empty()) pos_ = sc_->graph.waypoint(route_.front()).position;
  }

  bool route_done() const { return route_.size() < 2 || seg_ + 1 >= route_.size(); }

  /// Stationary people outside the slot's crowd (e.g. someone standing on an
  /// arc). They count for stalls, collisions and distances but not densities.
  void add_bystander(Vec2 p) { bystanders_.push_back(p); }
  void clear_bystanders() { bystanders_.clear(); }

  void set_charging(bool on) { charging_ = on; }
  bool charging() const { return charging_; }
  void set_battery(double b) { battery_ = std::clamp(b, 0.0, 100.0); }
  double battery() const { return battery_; }
  double time() const { return static_cast<double>(steps_) * params_.battery.dt; }
  Vec2 position() const { return pos_; }
  int slot() const { return slot_; }
  const Crowd& crowd() const { return crowd_; }
  const SimParams& params() const { return params_; }
  long long total_collisions() const { return collisions_.total(); }

  StepRecord step() {
    const double dt = params_.battery.dt;
    crowd_.step(dt);
    ++steps_;
    gather_people();

    StepRecord r;
    r.t = time();
    r.ctx.slot = slot_;
    r.ctx.charging = charging_ ? 1 : 0;
    const bool moving = !charging_ && !route_done();
    const bool obstructed = moving && obstructed_ && *obstructed_ == static_cast<int>(seg_);
    r.ctx.obstacle = obstructed ? 1 : 0;

    double v = 0.0;
    if (moving) {
      v = params_.robot.v_max * (obstructed ? params_.robot.obstacle_speed_factor : 1.0);
      // a stalled robot waits for a clear margin so jitter cannot toggle it
      const double clear = params_.robot.stall_radius + (stalled_ ? params_.robot.resume_margin : 0.0);
      for (const auto& p : people_)
        if (distance(pos_, p) < clear) {
          v = 0.0;
          break;
        }
    }
    stalled_ = moving && v == 0.0;
    r.V = v;
    if (v > 0.0) r.moved = advance(v * dt);

    r.L = battery_delta(v, charging_, obstructed, params_.battery);
    battery_ = apply_battery(battery_, r.L);
    r.B = battery_;

    r.new_collisions = collisions_.update(pos_, people_);
    for (const auto& p : people_) r.min_person_dist = std::min(r.min_person_dist, distance(pos_, p));
    r.ctx.robot_w = sc_->graph.nearest(pos_);
    return r;
  }

 private:
  void gather_people() {
    people_ = crowd_.positions();
    people_.insert(people_.end(), bystanders_.begin(), bystanders_.end());
  }

  double segment_length(std::size_t k) const {
    const auto& g = sc_->graph;
    double len = distance(g.waypoint(route_[k]).position, g.waypoint(route_[k + 1]).position);
    if (obstructed_ && *obstructed_ == static_cast<int>(k)) len += params_.robot.obstacle_detour;
    return len;
  }

  // Moves `budget` metres along the route; leftover carries into the next arc.
  double advance(double budget) {
    const auto& g = sc_->graph;
    double moved = 0.0;
    while (budget > 0.0 && !route_done()) {
      const double len = segment_length(seg_);
      const double step = std::min(budget, len - progress_);
      progress_ += step;
      budget -= step;
      moved += step;
      const Vec2 a = g.waypoint(route_[seg_]).position;
      const Vec2 b = g.waypoint(route_[seg_ + 1]).position;
      if (progress_ >= len - 1e-12) {
        pos_ = b;
        // the obstacle disappears once the robot has passed it
        if (obstructed_ && *obstructed_ == static_cast<int>(seg_)) obstructed_.reset();
        ++seg_;
        progress_ = 0.0;
      } else {
        pos_ = a + (b - a) * (progress_ / len);
      }
    }
    return moved;
  }

  const Scenario* sc_;
  const ShortestPathTable* paths_;
  SimParams params_;
  std::uint64_t seed_;
  Crowd crowd_;
  CollisionTracker collisions_;
  int slot_ = 0;
  long long steps_ = 0;
  Vec2 pos_;
  double battery_ = 100.0;
  bool charging_ = false;
  bool stalled_ = false;
  std::vector<int> route_;
  std::size_t seg_ = 0;
  double progress_ = 0.0;
  std::optional<int> obstructed_;
  std::vector<Vec2> bystanders_, people_;
};

}  // namespace causalnav
