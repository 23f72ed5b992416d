#pragma once

#include <algorithm>

#include "causalnav/core/error.hpp"

namespace causalnav {

/// Battery constants (percent of full charge). K_s and K_d follow the robot
/// datasheet: idle drain empties the battery in 5 h, continuous motion at
/// maximum velocity in 4 h.
struct BatteryParams {
  double static_drain = 100.0 / (5.0 * 3600.0);  // K_s, %/s (~0.005556)
  double motion_drain = 0.0027;                   // K_d, % per metre
  double obstacle_factor = 3.0;                   // K_o, dimensionless
  double charge_rate = 100.0 / 3600.0;            // K_c, %/s: full charge in 1 h
  double dt = 0.1;                                // s

  void validate() const {
    if (!(static_drain > 0 && motion_drain > 0 && charge_rate > 0 && dt > 0))
      throw Error("battery: K_s, K_d, K_c and dt must be > 0");
    if (!(obstacle_factor >= 1.0)) throw Error("battery: K_o must be >= 1");
  }
};

/// Battery change over one step of length params.dt. Charging dominates: a
/// docked robot is stationary, so the obstacle flag has no effect.
inline double battery_delta(double speed, bool charging, bool obstacle, const BatteryParams& p) {
  if (charging) return p.dt * p.charge_rate;
  const double drain = p.dt * (p.static_drain + p.motion_drain * speed);
  return obstacle ? -drain * p.obstacle_factor : -drain;
}

inline double apply_battery(double previous, double delta) { return std::clamp(previous + delta, 0.0, 100.0); }

/// Seconds to drain 100% -> 0% at constant speed with no obstacle.
inline double discharge_time(double speed, const BatteryParams& p) {
  return 100.0 / (p.static_drain + p.motion_drain * speed);
}

}  // namespace causalnav
