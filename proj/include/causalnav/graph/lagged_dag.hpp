#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "causalnav/core/error.hpp"
#include "causalnav/core/json_util.hpp"

namespace causalnav {

enum class NodeKind { Context, System };

inline const char* to_string(NodeKind k) { return k == NodeKind::Context ? "context" : "system"; }

struct NodeSpec {
  std::string name;
  NodeKind kind = NodeKind::System;
  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

/// src(t - lag) -> dst(t). An undirected edge (lag 0 only) marks an adjacency
/// whose direction could not be resolved.
struct LaggedEdge {
  std::string src;
  std::string dst;
  int lag = 0;
  bool directed = true;
  friend bool operator==(const LaggedEdge&, const LaggedEdge&) = default;
  friend auto operator<=>(const LaggedEdge&, const LaggedEdge&) = default;
};

struct Parent {
  std::string name;
  int lag = 0;
  friend bool operator==(const Parent&, const Parent&) = default;
};

inline std::string lagged_name(const std::string& name, int lag) {
  return lag == 0 ? name : name + "[t-" + std::to_string(lag) + "]";
}

class LaggedDag {
 public:
  LaggedDag() = default;
  LaggedDag(std::vector<NodeSpec> nodes, std::vector<LaggedEdge> edges, std::optional<double> alpha = std::nullopt)
      : nodes_(std::move(nodes)), edges_(std::move(edges)), alpha_(alpha) {
    validate();
  }

  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const std::vector<LaggedEdge>& edges() const { return edges_; }
  std::optional<double> alpha() const { return alpha_; }

  const NodeSpec* find(const std::string& name) const {
    for (const auto& n : nodes_)
      if (n.name == name) return &n;
    return nullptr;
  }
  NodeKind kind(const std::string& name) const {
    if (const auto* n = find(name)) return n->kind;
    throw GraphError("unknown node '" + name + "'");
  }

  bool fully_directed() const {
    return std::all_of(edges_.begin(), edges_.end(), [](const LaggedEdge& e) { return e.directed; });
  }

  /// Directed parents of `node` in edge order.
  std::vector<Parent> parents(const std::string& node) const {
    std::vector<Parent> out;
    for (const auto& e : edges_)
      if (e.directed && e.dst == node) out.push_back({e.src, e.lag});
    return out;
  }

  /// Throws GraphError on the first violated structural rule.
  void validate() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (nodes_[i].name == nodes_[j].name) throw GraphError("duplicate node '" + nodes_[i].name + "'");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      const auto* s = find(e.src);
      const auto* d = find(e.dst);
      if (!s || !d) throw GraphError("edge " + e.src + "->" + e.dst + " references an unknown node");
      if (e.lag != 0 && e.lag != 1) throw GraphError("edge " + e.src + "->" + e.dst + ": lag must be 0 or 1");
      if (e.src == e.dst && e.lag == 0) throw GraphError("self-loop on '" + e.src + "'");
      if (d->kind == NodeKind::Context) throw GraphError("edge into context node '" + e.dst + "'");
      if (s->kind == NodeKind::Context && e.lag != 0)
        throw GraphError("context edge " + e.src + "->" + e.dst + " must be contemporaneous");
      if (!e.directed && (e.lag != 0 || s->kind != NodeKind::System))
        throw GraphError("only contemporaneous system adjacencies may be undirected");
      for (std::size_t j = 0; j < i; ++j) {
        const auto& f = edges_[j];
        const bool same = f.src == e.src && f.dst == e.dst && f.lag == e.lag;
        const bool mirrored = e.lag == 0 && f.lag == 0 && f.src == e.dst && f.dst == e.src;
        if (same || mirrored) throw GraphError("duplicate edge " + e.src + "->" + e.dst);
      }
    }
    if (has_contemporaneous_cycle()) throw GraphError("contemporaneous subgraph has a cycle");
  }

 private:
  bool has_contemporaneous_cycle() const {
    // Kahn's algorithm on directed lag-0 edges
    std::vector<int> indeg(nodes_.size(), 0);
    auto idx = [&](const std::string& n) {
      for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].name == n) return i;
      return nodes_.size();
    };
    for (const auto& e : edges_)
      if (e.directed && e.lag == 0) ++indeg[idx(e.dst)];
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (indeg[i] == 0) queue.push_back(i);
    std::size_t seen = 0;
    while (!queue.empty()) {
      const auto u = queue.back();
      queue.pop_back();
      ++seen;
      for (const auto& e : edges_)
        if (e.directed && e.lag == 0 && e.src == nodes_[u].name)
          if (--indeg[idx(e.dst)] == 0) queue.push_back(idx(e.dst));
    }
    return seen != nodes_.size();
  }

  std::vector<NodeSpec> nodes_;
  std::vector<LaggedEdge> edges_;
  std::optional<double> alpha_;
};

/// The hand-specified warehouse model: battery and density sub-graphs plus
/// density autocorrelation.
inline LaggedDag ground_truth_model() {
  std::vector<NodeSpec> nodes{{"S", NodeKind::Context}, {"W", NodeKind::Context}, {"C", NodeKind::Context},
                              {"O", NodeKind::Context}, {"V", NodeKind::System},  {"L", NodeKind::System},
                              {"D", NodeKind::System}};
  std::vector<LaggedEdge> edges{{"O", "L", 0}, {"O", "V", 0}, {"C", "L", 0}, {"C", "V", 0},
                                {"V", "L", 0}, {"W", "D", 0}, {"S", "D", 0}, {"D", "D", 1}};
  return LaggedDag(std::move(nodes), std::move(edges));
}

inline jsonutil::Json dag_to_json(const LaggedDag& g) {
  using jsonutil::Json;
  Json nodes = Json::array(), edges = Json::array();
  for (const auto& n : g.nodes()) nodes.push_back({{"name", n.name}, {"kind", to_string(n.kind)}});
  for (const auto& e : g.edges()) {
    Json j{{"src", e.src}, {"dst", e.dst}, {"lag", e.lag}};
    if (!e.directed) j["directed"] = false;
    edges.push_back(std::move(j));
  }
  Json out{{"nodes", nodes}, {"edges", edges}};
  if (g.alpha()) out["alpha"] = *g.alpha();
  return out;
}

inline LaggedDag dag_from_json(const jsonutil::Json& doc, const std::string& path = "graph") {
  using namespace jsonutil;
  check_keys(doc, path, {"nodes", "edges", "alpha"});
  std::vector<NodeSpec> nodes;
  const auto& nd = field(doc, path, "nodes");
  if (!nd.is_array()) throw DocumentError(child(path, "nodes"), "expected an array");
  for (std::size_t i = 0; i < nd.size(); ++i) {
    const auto p = index(child(path, "nodes"), i);
    check_keys(nd[i], p, {"name", "kind"});
    const auto kind = string(field(nd[i], p, "kind"), child(p, "kind"));
    if (kind != "context" && kind != "system") throw DocumentError(child(p, "kind"), "expected context or system");
    nodes.push_back({string(field(nd[i], p, "name"), child(p, "name")),
                     kind == "context" ? NodeKind::Context : NodeKind::System});
  }
  std::vector<LaggedEdge> edges;
  const auto& ed = field(doc, path, "edges");
  if (!ed.is_array()) throw DocumentError(child(path, "edges"), "expected an array");
  for (std::size_t i = 0; i < ed.size(); ++i) {
    const auto p = index(child(path, "edges"), i);
    check_keys(ed[i], p, {"src", "dst", "lag", "directed"});
    LaggedEdge e;
    e.src = string(field(ed[i], p, "src"), child(p, "src"));
    e.dst = string(field(ed[i], p, "dst"), child(p, "dst"));
    e.lag = static_cast<int>(integer(field(ed[i], p, "lag"), child(p, "lag")));
    if (ed[i].contains("directed")) {
      if (!ed[i]["directed"].is_boolean()) throw DocumentError(child(p, "directed"), "expected a boolean");
      e.directed = ed[i]["directed"].get<bool>();
    }
    edges.push_back(std::move(e));
  }
  std::optional<double> alpha;
  if (doc.contains("alpha")) alpha = number(doc["alpha"], child(path, "alpha"));
  try {
    return LaggedDag(std::move(nodes), std::move(edges), alpha);
  } catch (const GraphError& e) {
    throw DocumentError(path, e.what());
  }
}

struct EdgeScore {
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  double precision() const {
    const int d = true_positives + false_positives;
    return d == 0 ? 1.0 : static_cast<double>(true_positives) / d;
  }
  double recall() const {
    const int d = true_positives + false_negatives;
    return d == 0 ? 1.0 : static_cast<double>(true_positives) / d;
  }
  double f1() const {
    const int d = 2 * true_positives + false_positives + false_negatives;
    return d == 0 ? 1.0 : 2.0 * true_positives / d;
  }
};

/// Directed edge comparison; undirected edges never match.
inline EdgeScore score_edges(const LaggedDag& found, const LaggedDag& truth) {
  EdgeScore s;
  auto contains = [](const LaggedDag& g, const LaggedEdge& e) {
    for (const auto& f : g.edges())
      if (f.directed && f.src == e.src && f.dst == e.dst && f.lag == e.lag) return true;
    return false;
  };
  for (const auto& e : found.edges()) {
    if (e.directed && contains(truth, e))
      ++s.true_positives;
    else
      ++s.false_positives;
  }
  for (const auto& e : truth.edges())
    if (!contains(found, e)) ++s.false_negatives;
  return s;
}

}  // namespace causalnav
