#pragma once

#include "causalnav/core/json_util.hpp"
#include "causalnav/sim/battery.hpp"

namespace causalnav {

struct RobotParams {
  double v_max = 0.5;                 // m/s
  double circumscribed_radius = 0.3;  // m
  double stall_radius = 0.6;          // m, any person closer forces V = 0
  double resume_margin = 0.15;        // m beyond stall_radius before a stalled robot moves again
  double obstacle_speed_factor = 0.5;
  double obstacle_detour = 0.5;  // m added to an obstructed arc
};

struct WorkerParams {
  double speed = 1.2;         // m/s
  double noise_sigma = 0.05;  // m, per-axis positional jitter
  double dwell_min = 2.0;     // s
  double dwell_max = 6.0;
};

struct SimParams {
  BatteryParams battery;
  RobotParams robot;
  WorkerParams workers;
  double obstacle_probability = 0.25;
  double task_deadline = 45.0;        // s
  double proximity_period = 1.0;      // s between robot-person distance samples
  double slot_duration = 900.0;       // s of simulated time per slot when generating data
  double recharge_threshold = 20.0;   // % below which data generation docks the robot

  void validate() const {
    battery.validate();
    if (!(robot.v_max > 0 && robot.circumscribed_radius > 0 && robot.stall_radius >= 0 && robot.resume_margin >= 0))
      throw Error("robot: v_max and circumscribed_radius must be > 0");
    if (!(robot.obstacle_speed_factor > 0 && robot.obstacle_speed_factor <= 1))
      throw Error("robot: obstacle_speed_factor must lie in (0, 1]");
    if (robot.obstacle_detour < 0) throw Error("robot: obstacle_detour must be >= 0");
    if (!(workers.speed > 0) || workers.noise_sigma < 0 || workers.dwell_min < 0 ||
        workers.dwell_max < workers.dwell_min)
      throw Error("workers: invalid speed, noise or dwell range");
    if (obstacle_probability < 0 || obstacle_probability > 1)
      throw Error("obstacle_probability must lie in [0, 1]");
    if (!(task_deadline > 0 && proximity_period > 0 && slot_duration > 0))
      throw Error("task_deadline, proximity_period and slot_duration must be > 0");
  }
};

inline SimParams load_sim_params(const jsonutil::Json& j, const std::string& path = "") {
  using namespace jsonutil;
  SimParams p;
  check_keys(j, path,
             {"battery", "dt", "robot", "workers", "obstacle_probability", "task_deadline", "proximity_period",
              "slot_duration", "recharge_threshold"});
  if (auto it = j.find("battery"); it != j.end()) {
    const auto bp = child(path, "battery");
    check_keys(*it, bp, {"K_s", "K_d", "K_o", "K_c"});
    p.battery.static_drain = number_or(*it, bp, "K_s", p.battery.static_drain);
    p.battery.motion_drain = number_or(*it, bp, "K_d", p.battery.motion_drain);
    p.battery.obstacle_factor = number_or(*it, bp, "K_o", p.battery.obstacle_factor);
    p.battery.charge_rate = number_or(*it, bp, "K_c", p.battery.charge_rate);
  }
  p.battery.dt = number_or(j, path, "dt", p.battery.dt);
  if (auto it = j.find("robot"); it != j.end()) {
    const auto rp = child(path, "robot");
    check_keys(*it, rp, {"v_max", "circumscribed_radius", "stall_radius", "resume_margin", "obstacle_speed_factor",
                         "obstacle_detour"});
    p.robot.v_max = number_or(*it, rp, "v_max", p.robot.v_max);
    p.robot.circumscribed_radius = number_or(*it, rp, "circumscribed_radius", p.robot.circumscribed_radius);
    p.robot.stall_radius = number_or(*it, rp, "stall_radius", p.robot.stall_radius);
    p.robot.resume_margin = number_or(*it, rp, "resume_margin", p.robot.resume_margin);
    p.robot.obstacle_speed_factor = number_or(*it, rp, "obstacle_speed_factor", p.robot.obstacle_speed_factor);
    p.robot.obstacle_detour = number_or(*it, rp, "obstacle_detour", p.robot.obstacle_detour);
  }
  if (auto it = j.find("workers"); it != j.end()) {
    const auto wp = child(path, "workers");
    check_keys(*it, wp, {"speed", "noise_sigma", "dwell_min", "dwell_max"});
    p.workers.speed = number_or(*it, wp, "speed", p.workers.speed);
    p.workers.noise_sigma = number_or(*it, wp, "noise_sigma", p.workers.noise_sigma);
    p.workers.dwell_min = number_or(*it, wp, "dwell_min", p.workers.dwell_min);
    p.workers.dwell_max = number_or(*it, wp, "dwell_max", p.workers.dwell_max);
  }
  p.obstacle_probability = number_or(j, path, "obstacle_probability", p.obstacle_probability);
  p.task_deadline = number_or(j, path, "task_deadline", p.task_deadline);
  p.proximity_period = number_or(j, path, "proximity_period", p.proximity_period);
  p.slot_duration = number_or(j, path, "slot_duration", p.slot_duration);
  p.recharge_threshold = number_or(j, path, "recharge_threshold", p.recharge_threshold);
  try {
    p.validate();
  } catch (const DocumentError&) {
    throw;
  } catch (const Error& e) {
    throw DocumentError(path.empty() ? "simulation" : path, e.what());
  }
  return p;
}

}  // namespace causalnav
