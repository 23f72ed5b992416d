#pragma once

#include <string>
#include <vector>

#include "causalnav/core/rng.hpp"
#include "causalnav/data/dataset.hpp"

namespace causalnav {

/// Samples from a discrete structural model wired exactly like
/// ground_truth_model(): O, C -> V; O, C, V -> L; S, W -> D; D(t-1) -> D.
/// Context variables are exogenous. One segment, one row per time step.
inline ProcessedDataset synthetic_warehouse_data(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x5e3}));
  constexpr int kSlots = 6, kWaypoints = 5, kV = 3, kL = 4, kD = 4;
  std::vector<int> S(n), W(n), C(n), O(n), V(n), L(n), D(n);
  auto pick = [&](const std::vector<double>& p) {
    double u = uniform01(rng), cum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      cum += p[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
  };
  auto noisy = [&](int value, int card, double keep) {
    return uniform01(rng) < keep ? value : static_cast<int>(uniform_index(rng, static_cast<std::size_t>(card)));
  };
  int w = 0;
  for (std::size_t t = 0; t < n; ++t) {
    S[t] = static_cast<int>(t * kSlots / n);
    if (uniform01(rng) < 0.1) w = static_cast<int>(uniform_index(rng, kWaypoints));
    W[t] = w;
    C[t] = uniform01(rng) < 0.1 ? 1 : 0;
    O[t] = uniform01(rng) < 0.25 ? 1 : 0;
    if (C[t])
      V[t] = pick({0.9, 0.05, 0.05});
    else
      V[t] = O[t] ? pick({0.3, 0.5, 0.2}) : pick({0.1, 0.2, 0.7});
    L[t] = C[t] ? noisy(3, kL, 0.9) : noisy(std::min(kL - 1, V[t] + O[t]), kL, 0.7);
    const int typical = (S[t] + 2 * W[t]) % kD;
    D[t] = (t > 0 && uniform01(rng) < 0.5) ? D[t - 1] : noisy(typical, kD, 0.8);
  }

  ProcessedDataset ds;
  auto add = [&](const std::string& name, int card, std::vector<int> codes) {
    VariableSchema v;
    v.name = name;
    for (int i = 0; i < card; ++i) v.labels.push_back(std::to_string(i));
    ds.schema.variables.push_back(std::move(v));
    ds.names.push_back(name);
    ds.columns.push_back(std::move(codes));
  };
  add("S", kSlots, std::move(S));
  add("W", kWaypoints, std::move(W));
  add("C", 2, std::move(C));
  add("O", 2, std::move(O));
  add("V", kV, std::move(V));
  add("L", kL, std::move(L));
  add("D", kD, std::move(D));
  ds.segment.assign(n, 0);
  ds.provenance.source = "synthetic";
  ds.provenance.schema_id = schema_id(ds.schema);
  ds.validate();
  return ds;
}

}  // namespace causalnav
