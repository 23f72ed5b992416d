#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "causalnav/core/json_util.hpp"
#include "causalnav/core/log.hpp"
#include "causalnav/data/dataset.hpp"
#include "causalnav/graph/lagged_dag.hpp"

namespace causalnav {

/// P(node | parents). Rows are indexed by the parent combination in mixed
/// radix (first parent most significant); each row holds `cardinality` probabilities.
struct DiscreteCpd {
  std::string node;
  int cardinality = 0;
  std::vector<Parent> parents;
  std::vector<int> parent_cardinalities;
  std::vector<double> table;
  int unseen_rows = 0;  // parent combinations absent from training data

  std::size_t rows() const {
    std::size_t n = 1;
    for (int c : parent_cardinalities) n *= static_cast<std::size_t>(c);
    return n;
  }
  double at(std::size_t row, int value) const {
    return table[row * static_cast<std::size_t>(cardinality) + static_cast<std::size_t>(value)];
  }

  void validate() const {
    if (cardinality < 1) throw InferenceError(node + ": cardinality must be >= 1");
    if (parents.size() != parent_cardinalities.size()) throw InferenceError(node + ": parent list mismatch");
    if (table.size() != rows() * static_cast<std::size_t>(cardinality))
      throw InferenceError(node + ": table does not cover the parent grid");
    for (std::size_t r = 0; r < rows(); ++r) {
      double s = 0.0;
      for (int v = 0; v < cardinality; ++v) {
        const double p = at(r, v);
        if (!(p >= 0.0)) throw InferenceError(node + ": negative or NaN probability");
        s += p;
      }
      if (std::abs(s - 1.0) > 1e-12) throw InferenceError(node + ": row " + std::to_string(r) + " does not sum to 1");
    }
  }
};

/// Fitted model. `lag_cpds` describe lag-1 parents X[t-1] given the
/// contemporaneous context parents of X, used when a query leaves them open.
struct CausalInferenceModel {
  LaggedDag dag;
  DiscretizationSchema schema;
  std::vector<DiscreteCpd> cpds;
  std::vector<DiscreteCpd> lag_cpds;
  double sample_period = 1.0;  // s per row of the training data

  const DiscreteCpd& cpd(const std::string& node) const {
    for (const auto& c : cpds)
      if (c.node == node) return c;
    for (const auto& c : lag_cpds)
      if (c.node == node) return c;
    throw InferenceError("model has no node '" + node + "'");
  }
  int cardinality(const std::string& node) const { return cpd(node).cardinality; }

  void validate() const {
    for (const auto& n : dag.nodes()) {
      const auto& c = cpd(n.name);
      if (c.parents != dag.parents(n.name)) throw InferenceError(n.name + ": CPD parents differ from the graph");
    }
    for (const auto& c : cpds) c.validate();
    for (const auto& c : lag_cpds) c.validate();
  }
};

namespace detail {

inline DiscreteCpd fit_counts(const std::string& node, int card, const std::vector<Parent>& parents,
                              const std::vector<int>& parent_cards,
                              const std::vector<const std::vector<int>*>& parent_cols, const std::vector<int>& parent_lags,
                              const std::vector<int>& child, int child_lag, const ProcessedDataset& data) {
  DiscreteCpd cpd;
  cpd.node = node;
  cpd.cardinality = card;
  cpd.parents = parents;
  cpd.parent_cardinalities = parent_cards;
  const std::size_t rows = cpd.rows();
  std::vector<double> counts(rows * static_cast<std::size_t>(card), 0.0);
  const bool lagged = child_lag > 0 ||
                      std::any_of(parent_lags.begin(), parent_lags.end(), [](int l) { return l > 0; });
  for (std::size_t r = 0; r < data.rows(); ++r) {
    if (lagged && !data.has_previous(r)) continue;
    std::size_t idx = 0;
    for (std::size_t p = 0; p < parent_cols.size(); ++p)
      idx = idx * static_cast<std::size_t>(parent_cards[p]) +
            static_cast<std::size_t>((*parent_cols[p])[r - static_cast<std::size_t>(parent_lags[p])]);
    counts[idx * static_cast<std::size_t>(card) + static_cast<std::size_t>(child[r - static_cast<std::size_t>(child_lag)])] += 1.0;
  }
  cpd.table.assign(counts.size(), 0.0);
  for (std::size_t row = 0; row < rows; ++row) {
    double total = 0.0;
    for (int v = 0; v < card; ++v) total += counts[row * static_cast<std::size_t>(card) + static_cast<std::size_t>(v)];
    for (int v = 0; v < card; ++v) {
      auto& cell = cpd.table[row * static_cast<std::size_t>(card) + static_cast<std::size_t>(v)];
      cell = total > 0 ? counts[row * static_cast<std::size_t>(card) + static_cast<std::size_t>(v)] / total : 1.0 / card;
    }
    if (total == 0) ++cpd.unseen_rows;
  }
  if (cpd.unseen_rows > 0)
    log().warn("fit: {} has {} of {} parent combinations unseen; using uniform rows", node, cpd.unseen_rows, rows);
  return cpd;
}

}  // namespace detail

/// Maximum-likelihood CPTs on a fully directed graph. Lag-1 parents come from
/// the previous row of the same segment.
inline CausalInferenceModel fit_mle(const LaggedDag& dag, const ProcessedDataset& data) {
  if (data.rows() == 0) throw InferenceError("fit_mle: empty dataset");
  if (!dag.fully_directed()) throw InferenceError("fit_mle: graph has undirected edges");
  CausalInferenceModel m;
  m.dag = dag;
  m.schema = data.schema;
  m.sample_period = data.provenance.sample_period > 0 ? data.provenance.sample_period : 1.0;

  std::vector<std::string> lagged_nodes;
  for (const auto& n : dag.nodes()) {
    const auto parents = dag.parents(n.name);
    std::vector<int> cards, lags;
    std::vector<const std::vector<int>*> cols;
    for (const auto& p : parents) {
      cards.push_back(data.cardinality(p.name));
      cols.push_back(&data.column(p.name));
      lags.push_back(p.lag);
      if (p.lag == 1 && std::find(lagged_nodes.begin(), lagged_nodes.end(), p.name) == lagged_nodes.end())
        lagged_nodes.push_back(p.name);
    }
    m.cpds.push_back(detail::fit_counts(n.name, data.cardinality(n.name), parents, cards, cols, lags,
                                        data.column(n.name), 0, data));
  }
  for (const auto& name : lagged_nodes) {
    std::vector<Parent> ctx;
    std::vector<int> cards, lags;
    std::vector<const std::vector<int>*> cols;
    for (const auto& p : dag.parents(name))
      if (p.lag == 0 && dag.kind(p.name) == NodeKind::Context) {
        ctx.push_back(p);
        cards.push_back(data.cardinality(p.name));
        cols.push_back(&data.column(p.name));
        lags.push_back(0);
      }
    auto cpd = detail::fit_counts(lagged_name(name, 1), data.cardinality(name), ctx, cards, cols, lags,
                                  data.column(name), 1, data);
    m.lag_cpds.push_back(std::move(cpd));
  }
  m.validate();
  return m;
}

inline jsonutil::Json cpd_to_json(const DiscreteCpd& c) {
  using jsonutil::Json;
  Json parents = Json::array();
  for (const auto& p : c.parents) parents.push_back({{"name", p.name}, {"lag", p.lag}});
  Json rows = Json::array();
  for (std::size_t r = 0; r < c.rows(); ++r) {
    Json row = Json::array();
    for (int v = 0; v < c.cardinality; ++v) row.push_back(c.at(r, v));
    rows.push_back(std::move(row));
  }
  return Json{{"node", c.node},
              {"cardinality", c.cardinality},
              {"parents", parents},
              {"parent_cardinalities", c.parent_cardinalities},
              {"unseen_rows", c.unseen_rows},
              {"rows", rows}};
}

inline DiscreteCpd cpd_from_json(const jsonutil::Json& j, const std::string& path) {
  using namespace jsonutil;
  check_keys(j, path, {"node", "cardinality", "parents", "parent_cardinalities", "unseen_rows", "rows"});
  DiscreteCpd c;
  c.node = string(field(j, path, "node"), child(path, "node"));
  c.cardinality = static_cast<int>(integer(field(j, path, "cardinality"), child(path, "cardinality")));
  const auto& ps = field(j, path, "parents");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto p = index(child(path, "parents"), i);
    check_keys(ps[i], p, {"name", "lag"});
    c.parents.push_back({string(field(ps[i], p, "name"), child(p, "name")),
                         static_cast<int>(integer(field(ps[i], p, "lag"), child(p, "lag")))});
  }
  c.parent_cardinalities = field(j, path, "parent_cardinalities").get<std::vector<int>>();
  if (j.contains("unseen_rows")) c.unseen_rows = j["unseen_rows"].get<int>();
  const auto& rows = field(j, path, "rows");
  if (!rows.is_array() || rows.size() != c.rows())
    throw DocumentError(child(path, "rows"), "expected " + std::to_string(c.rows()) + " rows");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != static_cast<std::size_t>(c.cardinality))
      throw DocumentError(index(child(path, "rows"), r), "expected " + std::to_string(c.cardinality) + " entries");
    for (const auto& v : rows[r]) c.table.push_back(number(v, index(child(path, "rows"), r)));
  }
  try {
    c.validate();
  } catch (const InferenceError& e) {
    throw DocumentError(path, e.what());
  }
  return c;
}

inline jsonutil::Json model_to_json(const CausalInferenceModel& m) {
  using jsonutil::Json;
  auto schema = schema_to_json(m.schema);
  schema["id"] = schema_id(m.schema);
  Json cpds = Json::array(), lag = Json::array();
  for (const auto& c : m.cpds) cpds.push_back(cpd_to_json(c));
  for (const auto& c : m.lag_cpds) lag.push_back(cpd_to_json(c));
  return Json{{"graph", dag_to_json(m.dag)},
              {"schema", schema},
              {"sample_period", m.sample_period},
              {"cpds", cpds},
              {"lag_cpds", lag}};
}

inline CausalInferenceModel model_from_json(const jsonutil::Json& doc, const std::string& path = "") {
  using namespace jsonutil;
  check_keys(doc, path, {"graph", "schema", "sample_period", "cpds", "lag_cpds"});
  CausalInferenceModel m;
  m.dag = dag_from_json(field(doc, path, "graph"), child(path, "graph"));
  m.schema = schema_from_json(field(doc, path, "schema"), child(path, "schema"));
  m.sample_period = number(field(doc, path, "sample_period"), child(path, "sample_period"));
  for (const char* key : {"cpds", "lag_cpds"}) {
    const auto& arr = field(doc, path, key);
    if (!arr.is_array()) throw DocumentError(child(path, key), "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      (std::string(key) == "cpds" ? m.cpds : m.lag_cpds).push_back(cpd_from_json(arr[i], index(child(path, key), i)));
  }
  try {
    m.validate();
  } catch (const InferenceError& e) {
    throw DocumentError(path.empty() ? "model" : path, e.what());
  }
  return m;
}

inline void save_model(const CausalInferenceModel& m, const std::string& file) { jsonutil::write_file(file, model_to_json(m)); }
inline CausalInferenceModel load_model(const std::string& file) { return model_from_json(jsonutil::read_file(file), ""); }

}  // namespace causalnav
