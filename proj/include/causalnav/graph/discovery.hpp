#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "causalnav/core/log.hpp"
#include "causalnav/data/dataset.hpp"
#include "causalnav/graph/ci_test.hpp"
#include "causalnav/graph/lagged_dag.hpp"

namespace causalnav {

struct DiscoveryOptions {
  double alpha = 0.05;
  int permutations = 500;
  int max_depth = 3;
  std::uint64_t seed = 0;
  // Background ordering for contemporaneous system adjacencies that the tests
  // leave symmetric: lower tier causes higher tier. Equal or missing tiers
  // leave the adjacency undirected.
  std::map<std::string, int> tiers;
};

/// Crowding slows the robot and consumption follows motion.
inline std::map<std::string, int> warehouse_tiers() { return {{"D", 0}, {"V", 1}, {"L", 2}}; }

struct CandidateTest {
  std::string target;
  Parent candidate;
  int depth = 0;  // conditioning set size; -1 for the final all-parents test
  double cmi = 0.0;
  double p_value = 1.0;
};

struct DiscoveryResult {
  LaggedDag graph;
  std::vector<CandidateTest> tests;
};

namespace detail {

inline std::uint64_t text_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

}  // namespace detail

/// Constrained conditional-independence search over the allowed edge classes:
/// context -> system at lag 0, system -> system at lags 0 and 1, and system
/// autocorrelation at lag 1. Candidates first go through a PC-style pruning
/// with growing conditioning sets drawn from the strongest other candidates,
/// then each survivor is tested against all other survivors.
inline DiscoveryResult discover_structure_detailed(const ProcessedDataset& data, const std::vector<NodeSpec>& nodes,
                                                   const DiscoveryOptions& opt = {}) {
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw PipelineError("alpha must lie in (0, 1)");
  if (opt.permutations < 1) throw PipelineError("permutations must be >= 1");

  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < data.rows(); ++r)
    if (data.has_previous(r)) rows.push_back(r);
  if (rows.size() < 10) throw PipelineError("too few rows for discovery");

  // lag-0 and lag-1 realisations of every node
  std::map<std::string, std::vector<int>> lag1;
  std::map<std::string, CodedColumn> col0, col1;
  std::set<std::string> constant_columns;  // independent of everything, so never adjacent
  for (const auto& nd : nodes) {
    const auto& c = data.column(nd.name);
    const int card = data.cardinality(nd.name);
    bool constant = true;
    for (std::size_t r : rows)
      if (c[r] != c[rows.front()]) {
        constant = false;
        break;
      }
    if (constant) {
      log().warn("discovery: column '{}' is constant in the data; it gets no edges", nd.name);
      constant_columns.insert(nd.name);
    }
    col0[nd.name] = {&c, card};
    if (nd.kind == NodeKind::System) {
      auto& l = lag1[nd.name];
      l.assign(c.size(), 0);
      for (std::size_t r : rows) l[r] = c[r - 1];
      col1[nd.name] = {&l, card};
    }
  }
  auto column = [&](const Parent& p) { return p.lag == 0 ? col0.at(p.name) : col1.at(p.name); };

  DiscoveryResult res;
  std::map<std::string, std::vector<Parent>> kept;
  for (const auto& target : nodes) {
    if (target.kind != NodeKind::System || constant_columns.count(target.name)) continue;
    std::vector<Parent> cands;
    for (const auto& nd : nodes) {
      if (constant_columns.count(nd.name)) continue;
      if (nd.kind == NodeKind::Context) {
        cands.push_back({nd.name, 0});
      } else {
        if (nd.name != target.name) cands.push_back({nd.name, 0});
        cands.push_back({nd.name, 1});
      }
    }
    auto run = [&](const Parent& c, const std::vector<Parent>& z, int depth) {
      std::vector<CodedColumn> zc;
      for (const auto& p : z) zc.push_back(column(p));
      const auto seed = derive_seed(opt.seed, {detail::text_hash(target.name), detail::text_hash(c.name),
                                               static_cast<std::uint64_t>(c.lag), static_cast<std::uint64_t>(depth + 1)});
      const auto r = cmi_permutation_test(column(c), col0.at(target.name), zc, opt.permutations, seed, opt.alpha, &rows);
      res.tests.push_back({target.name, c, depth, r.cmi, r.p_value});
      return r;
    };

    // depth 0 ranks candidates by marginal association
    std::vector<std::pair<double, Parent>> ranked;
    for (const auto& c : cands) {
      const auto r = run(c, {}, 0);
      if (r.p_value <= opt.alpha) ranked.emplace_back(r.cmi, c);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Parent> alive;
    for (const auto& [s, c] : ranked) alive.push_back(c);

    for (int d = 1; d <= opt.max_depth; ++d) {
      if (static_cast<int>(alive.size()) <= d) break;
      std::vector<Parent> next;
      for (const auto& c : alive) {
        std::vector<Parent> z;
        for (const auto& o : alive)
          if (!(o == c) && static_cast<int>(z.size()) < d) z.push_back(o);
        if (run(c, z, d).p_value <= opt.alpha) next.push_back(c);
      }
      alive = std::move(next);
    }

    std::vector<Parent> final_parents;
    for (const auto& c : alive) {
      std::vector<Parent> z;
      for (const auto& o : alive)
        if (!(o == c)) z.push_back(o);
      if (z.empty() || run(c, z, -1).p_value <= opt.alpha) final_parents.push_back(c);
    }
    kept[target.name] = std::move(final_parents);
  }

  // assemble and orient
  std::vector<LaggedEdge> edges;
  auto kept_has = [&](const std::string& target, const std::string& src, int lag) {
    const auto it = kept.find(target);
    if (it == kept.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const Parent& p) { return p.name == src && p.lag == lag; });
  };
  std::vector<std::pair<std::string, std::string>> handled;
  for (const auto& target : nodes) {
    if (target.kind != NodeKind::System) continue;
    for (const auto& p : kept[target.name]) {
      const bool contemporaneous_system = p.lag == 0 && col1.count(p.name);
      if (!contemporaneous_system) {
        edges.push_back({p.name, target.name, p.lag, true});
        continue;
      }
      const auto a = std::min(p.name, target.name), b = std::max(p.name, target.name);
      if (std::find(handled.begin(), handled.end(), std::make_pair(a, b)) != handled.end()) continue;
      handled.emplace_back(a, b);
      const bool reverse = kept_has(p.name, target.name, 0);
      if (!reverse) {
        edges.push_back({p.name, target.name, 0, true});  // only one side found the dependence
        continue;
      }
      const auto ta = opt.tiers.find(p.name), tb = opt.tiers.find(target.name);
      if (ta != opt.tiers.end() && tb != opt.tiers.end() && ta->second != tb->second) {
        if (ta->second < tb->second)
          edges.push_back({p.name, target.name, 0, true});
        else
          edges.push_back({target.name, p.name, 0, true});
      } else {
        edges.push_back({a, b, 0, false});
      }
    }
  }
  try {
    res.graph = LaggedDag(nodes, edges, opt.alpha);
  } catch (const GraphError&) {
    // asymmetric orientations closed a cycle; fall back to undirected adjacencies
    for (auto& e : edges)
      if (e.lag == 0 && col1.count(e.src) && col1.count(e.dst)) e.directed = false;
    log().warn("discovery: contemporaneous orientation produced a cycle; adjacencies left undirected");
    res.graph = LaggedDag(nodes, edges, opt.alpha);
  }
  return res;
}

inline LaggedDag discover_structure(const ProcessedDataset& data, const std::vector<NodeSpec>& nodes,
                                    const DiscoveryOptions& opt = {}) {
  return discover_structure_detailed(data, nodes, opt).graph;
}

}  // namespace causalnav
