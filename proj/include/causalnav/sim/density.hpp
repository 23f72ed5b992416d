#pragma once

#include <numbers>

#include "causalnav/core/error.hpp"

namespace causalnav {

/// People per square metre inside a waypoint's circular region.
inline double waypoint_density(double count, double radius) {
  if (!(radius > 0.0)) throw Error("waypoint_density: radius must be > 0");
  if (count < 0.0) throw Error("waypoint_density: negative count");
  return count / (std::numbers::pi * radius * radius);
}

}  // namespace causalnav
