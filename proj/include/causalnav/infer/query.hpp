#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "causalnav/infer/factor.hpp"
#include "causalnav/infer/model.hpp"

namespace causalnav {

/// P(target | do(interventions), conditions). Values are discrete codes.
/// Lagged variables are addressed as "D[t-1]".
struct QuerySpec {
  std::map<std::string, int> interventions;
  std::map<std::string, int> conditions;
  std::string target;
};

struct QueryStats {
  std::size_t factors = 0;     // CPD factors kept after pruning
  std::size_t eliminated = 0;  // variables summed out
  std::size_t largest = 0;     // biggest intermediate table
};

namespace detail {

struct NetNode {
  std::string name;
  const DiscreteCpd* cpd;
  std::vector<int> parents;  // network ids
};

inline std::vector<NetNode> network_of(const CausalInferenceModel& m) {
  std::vector<NetNode> net;
  for (const auto& c : m.cpds) net.push_back({c.node, &c, {}});
  for (const auto& c : m.lag_cpds) net.push_back({c.node, &c, {}});
  auto id = [&](const std::string& n) {
    for (std::size_t i = 0; i < net.size(); ++i)
      if (net[i].name == n) return static_cast<int>(i);
    throw InferenceError("model has no node '" + n + "'");
  };
  for (auto& n : net)
    for (const auto& p : n.cpd->parents) n.parents.push_back(id(lagged_name(p.name, p.lag)));
  return net;
}

// CPD as a factor over its free variables; fixed parents are sliced out
// while reading the table, so large CPDs are never copied whole.
inline Factor cpd_factor(const NetNode& n, int self, const std::vector<int>& fixed) {
  std::vector<int> all = n.parents;
  std::vector<int> all_cards = n.cpd->parent_cardinalities;
  all.push_back(self);
  all_cards.push_back(n.cpd->cardinality);
  std::vector<std::size_t> stride(all.size(), 1);
  for (std::size_t i = all.size(); i-- > 1;) stride[i - 1] = stride[i] * static_cast<std::size_t>(all_cards[i]);
  std::vector<int> vars, cards;
  std::vector<std::size_t> free_stride;
  std::size_t base = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const int f = fixed[static_cast<std::size_t>(all[i])];
    if (f >= 0) {
      base += static_cast<std::size_t>(f) * stride[i];
    } else if (std::find(vars.begin(), vars.end(), all[i]) == vars.end()) {
      vars.push_back(all[i]);
      cards.push_back(all_cards[i]);
      free_stride.push_back(stride[i]);
    } else {
      throw InferenceError(n.name + ": repeated parent");
    }
  }
  std::size_t size = 1;
  for (int c : cards) size *= static_cast<std::size_t>(c);
  std::vector<double> values(size);
  std::vector<int> idx(vars.size(), 0);
  std::size_t off = base;
  for (std::size_t k = 0; k < size; ++k) {
    values[k] = n.cpd->table[off];
    for (std::size_t d = vars.size(); d-- > 0;) {
      if (++idx[d] < cards[d]) {
        off += free_stride[d];
        break;
      }
      off -= free_stride[d] * static_cast<std::size_t>(cards[d] - 1);
      idx[d] = 0;
    }
  }
  return Factor(std::move(vars), std::move(cards), std::move(values));
}

}  // namespace detail

/// Exact interventional query by variable elimination on the mutilated
/// network. Throws ZeroProbabilityError when the conditions have probability 0.
inline std::vector<double> do_query(const CausalInferenceModel& m, const QuerySpec& q, QueryStats* stats = nullptr) {
  const auto net = detail::network_of(m);
  const int n = static_cast<int>(net.size());
  auto id = [&](const std::string& name) {
    for (int i = 0; i < n; ++i)
      if (net[static_cast<std::size_t>(i)].name == name) return i;
    throw InferenceError("query names unknown variable '" + name + "'");
  };
  const int target = id(q.target);
  if (q.interventions.count(q.target) || q.conditions.count(q.target))
    throw InferenceError("target " + q.target + " also appears in the do-set or conditions");
  const int tcard = net[static_cast<std::size_t>(target)].cpd->cardinality;
  std::vector<int> fixed(static_cast<std::size_t>(n), -1);
  std::vector<bool> intervened(static_cast<std::size_t>(n), false);
  auto assign = [&](const std::string& name, int value, bool is_do) {
    const int v = id(name);
    const int card = net[static_cast<std::size_t>(v)].cpd->cardinality;
    if (value < 0 || value >= card)
      throw InferenceError(name + ": value " + std::to_string(value) + " outside [0, " + std::to_string(card) + ")");
    if (fixed[static_cast<std::size_t>(v)] >= 0 && fixed[static_cast<std::size_t>(v)] != value)
      throw InferenceError(name + " is fixed to two different values");
    fixed[static_cast<std::size_t>(v)] = value;
    if (is_do) intervened[static_cast<std::size_t>(v)] = true;
  };
  for (const auto& [k, v] : q.interventions) assign(k, v, true);
  for (const auto& [k, v] : q.conditions) {
    if (q.interventions.count(k)) throw InferenceError(k + " is both intervened on and conditioned on");
    assign(k, v, false);
  }

  // ancestors of target and conditions in the mutilated graph; the rest is barren
  std::vector<bool> keep(static_cast<std::size_t>(n), false);
  std::vector<int> stack{target};
  for (const auto& [k, v] : q.conditions) stack.push_back(id(k));
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (keep[static_cast<std::size_t>(v)]) continue;
    keep[static_cast<std::size_t>(v)] = true;
    if (intervened[static_cast<std::size_t>(v)]) continue;
    for (int p : net[static_cast<std::size_t>(v)].parents) stack.push_back(p);
  }

  std::vector<Factor> factors;
  for (int v = 0; v < n; ++v) {
    if (!keep[static_cast<std::size_t>(v)] || intervened[static_cast<std::size_t>(v)]) continue;
    Factor f = detail::cpd_factor(net[static_cast<std::size_t>(v)], v, fixed);
    // a fully observed factor is a constant that normalization cancels
    if (f.vars().empty()) {
      if (!(f.sum() > 0.0)) throw ZeroProbabilityError("conditioning event has probability zero for target " + q.target);
      continue;
    }
    factors.push_back(std::move(f));
  }
  QueryStats st;
  st.factors = factors.size();

  std::vector<int> hidden;
  for (int v = 0; v < n; ++v)
    if (keep[static_cast<std::size_t>(v)] && v != target && fixed[static_cast<std::size_t>(v)] < 0) hidden.push_back(v);
  auto cards_of = [&](int v) { return net[static_cast<std::size_t>(v)].cpd->cardinality; };
  while (!hidden.empty()) {
    // min-size heuristic: eliminate the variable whose product table is smallest
    std::size_t best = 0, best_size = 0;
    for (std::size_t h = 0; h < hidden.size(); ++h) {
      std::vector<int> scope;
      for (const auto& f : factors)
        if (f.has(hidden[h]))
          for (int u : f.vars())
            if (std::find(scope.begin(), scope.end(), u) == scope.end()) scope.push_back(u);
      std::size_t size = 1;
      for (int u : scope) size *= static_cast<std::size_t>(cards_of(u));
      if (h == 0 || size < best_size) best = h, best_size = size;
    }
    const int v = hidden[best];
    hidden.erase(hidden.begin() + static_cast<std::ptrdiff_t>(best));
    Factor prod;
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (f.has(v))
        prod = prod * f;
      else
        rest.push_back(std::move(f));
    }
    st.largest = std::max(st.largest, prod.values().size());
    rest.push_back(prod.marginalize(v));
    factors = std::move(rest);
    ++st.eliminated;
  }
  Factor joint;
  for (const auto& f : factors) joint = joint * f;

  std::vector<double> dist(static_cast<std::size_t>(tcard), 0.0);
  for (int k = 0; k < tcard; ++k) dist[static_cast<std::size_t>(k)] = joint.restrict(target, k).sum();
  double z = 0.0;
  for (double p : dist) z += p;
  if (!(z > 0.0)) throw ZeroProbabilityError("conditioning event has probability zero for target " + q.target);
  for (double& p : dist) p /= z;
  if (stats) *stats = st;
  return dist;
}

/// Schema name of a network variable ("D[t-1]" -> "D").
inline std::string base_variable(const std::string& name) {
  const auto pos = name.find('[');
  return pos == std::string::npos ? name : name.substr(0, pos);
}

/// Mean of a distribution over the bin representatives of `variable`.
inline double expected_value(const std::vector<double>& dist, const DiscretizationSchema& schema, const std::string& variable) {
  const auto& v = schema.at(base_variable(variable));
  if (v.kind != VariableSchema::Kind::Continuous) throw InferenceError(variable + " is categorical");
  if (dist.size() != v.bins.representatives.size()) throw InferenceError(variable + ": distribution size mismatch");
  double e = 0.0, total = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    e += dist[k] * v.bins.representatives[k];
    total += dist[k];
  }
  if (std::abs(total - 1.0) > 1e-9) throw InferenceError(variable + ": distribution does not sum to 1");
  return e;
}

inline int code_of_value(const DiscretizationSchema& schema, const std::string& variable, double x) {
  const auto& v = schema.at(base_variable(variable));
  if (v.kind != VariableSchema::Kind::Continuous) throw InferenceError(variable + " is categorical");
  return v.bins.code(x);
}

inline int code_of_label(const DiscretizationSchema& schema, const std::string& variable, const std::string& label) {
  return schema.at(base_variable(variable)).code_of_label(label);
}

}  // namespace causalnav
