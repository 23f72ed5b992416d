#pragma once

#include <string>

#include "causalnav/core/log.hpp"
#include "causalnav/harness/config.hpp"
#include "causalnav/infer/model.hpp"
#include "causalnav/sim/datagen.hpp"

namespace causalnav {

/// Drops adjacencies discovery left undirected so the graph can be fitted.
inline LaggedDag directed_part(const LaggedDag& g) {
  std::vector<LaggedEdge> kept;
  for (const auto& e : g.edges()) {
    if (e.directed)
      kept.push_back(e);
    else
      log().warn("learn: dropping unoriented adjacency {} - {}", e.src, e.dst);
  }
  return LaggedDag(g.nodes(), kept, g.alpha());
}

/// Structure discovery on a thinned copy of `data`.
inline LaggedDag discover_for(const ProcessedDataset& data, const Parameters& p) {
  const auto thinned = thin_dataset(data, p.experiment.discovery_rows);
  return discover_structure(thinned, ground_truth_model().nodes(), p.discovery);
}

struct TrainedModel {
  ProcessedDataset data;
  LaggedDag graph;
  CausalInferenceModel model;
};

/// Simulates the training run, builds the dataset and fits either the
/// reference structure or a discovered one.
inline TrainedModel train_model(const Scenario& sc, const Parameters& p, std::uint64_t seed,
                                const std::string& structure) {
  TrainedModel t;
  const auto raw = simulate(sc, p.sim, seed);
  t.data = build_dataset(raw, sc, p.pipeline, log_file_name(sc.name, seed));
  if (structure == "reference")
    t.graph = ground_truth_model();
  else if (structure == "discovered")
    t.graph = directed_part(discover_for(t.data, p));
  else
    throw Error("unknown structure '" + structure + "' (expected reference or discovered)");
  t.model = fit_mle(t.graph, t.data);
  return t;
}

}  // namespace causalnav
