#pragma once

#include "causalnav/plan/astar.hpp"

namespace causalnav {

struct DecisionPolicy {
  double b_min = 20.0;           // %
  double query_velocity = 0.5;  // m/s

  void validate() const {
    if (!(b_min >= 0 && b_min < 100)) throw PlanningError("B_min must lie in [0, 100)");
    if (!(query_velocity > 0)) throw PlanningError("query velocity must be > 0");
  }
};

enum class Verdict { Proceed, Abort };

inline const char* to_string(Verdict v) { return v == Verdict::Proceed ? "proceed" : "abort"; }

/// One-shot check before a task starts. Landing exactly on B_min proceeds.
inline Verdict decide_task(const PathPlan& plan, double battery_now, const DecisionPolicy& policy) {
  return battery_now - plan.C_L >= policy.b_min ? Verdict::Proceed : Verdict::Abort;
}

}  // namespace causalnav
