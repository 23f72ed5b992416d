#pragma once

#include <string>
#include <vector>

#include "causalnav/plan/decision.hpp"

namespace causalnav {

enum class Routing { Shortest, Causal };

struct ApproachConfig {
  std::string name;
  Routing routing = Routing::Shortest;
  bool refusal = false;
  HeuristicWeights weights;
  DecisionPolicy policy;

  bool uses_model() const { return routing == Routing::Causal || refusal; }
};

inline const std::vector<std::string>& approach_names() {
  static const std::vector<std::string> names{"baseline", "causal_routing", "refusal_only", "full_causal"};
  return names;
}

inline ApproachConfig make_approach(const std::string& name, const HeuristicWeights& w = {}, const DecisionPolicy& p = {}) {
  ApproachConfig a;
  a.name = name;
  a.weights = w;
  a.policy = p;
  if (name == "baseline") {
  } else if (name == "causal_routing") {
    a.routing = Routing::Causal;
  } else if (name == "refusal_only") {
    a.refusal = true;
  } else if (name == "full_causal") {
    a.routing = Routing::Causal;
    a.refusal = true;
  } else {
    throw Error("unknown approach '" + name + "' (expected baseline, causal_routing, refusal_only or full_causal)");
  }
  return a;
}

}  // namespace causalnav
