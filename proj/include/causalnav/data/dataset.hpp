#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "causalnav/core/csv.hpp"
#include "causalnav/core/json_util.hpp"
#include "causalnav/data/discretize.hpp"
#include "causalnav/data/spectral.hpp"
#include "causalnav/env/scenario.hpp"
#include "causalnav/sim/density.hpp"
#include "causalnav/sim/timeseries_log.hpp"

namespace causalnav {

/// How one variable maps between real values and discrete codes.
struct VariableSchema {
  enum class Kind { Continuous, Categorical };
  std::string name;
  Kind kind = Kind::Categorical;
  BinSpec bins;                     // continuous only
  std::vector<std::string> labels;  // categorical only

  std::size_t cardinality() const { return kind == Kind::Continuous ? bins.bins() : labels.size(); }

  int code_of_label(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<int>(i);
    throw PipelineError(name + ": unknown label '" + label + "'");
  }
};

struct DiscretizationSchema {
  std::vector<VariableSchema> variables;

  const VariableSchema* find(const std::string& name) const {
    for (const auto& v : variables)
      if (v.name == name) return &v;
    return nullptr;
  }
  const VariableSchema& at(const std::string& name) const {
    if (const auto* v = find(name)) return *v;
    throw PipelineError("schema has no variable '" + name + "'");
  }
};

inline jsonutil::Json schema_to_json(const DiscretizationSchema& s) {
  jsonutil::Json vars = jsonutil::Json::array();
  for (const auto& v : s.variables) {
    jsonutil::Json j{{"name", v.name}};
    if (v.kind == VariableSchema::Kind::Continuous) {
      j["kind"] = "continuous";
      j["cuts"] = v.bins.cuts;
      j["low"] = v.bins.low;
      j["high"] = v.bins.high;
      j["representatives"] = v.bins.representatives;
      j["counts"] = v.bins.counts;
    } else {
      j["kind"] = "categorical";
      j["labels"] = v.labels;
    }
    vars.push_back(std::move(j));
  }
  return jsonutil::Json{{"variables", vars}};
}

inline DiscretizationSchema schema_from_json(const jsonutil::Json& doc, const std::string& path = "schema") {
  using namespace jsonutil;
  check_keys(doc, path, {"variables", "id"});
  DiscretizationSchema s;
  const auto& vars = field(doc, path, "variables");
  if (!vars.is_array()) throw DocumentError(child(path, "variables"), "expected an array");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto p = index(child(path, "variables"), i);
    const auto& j = vars[i];
    VariableSchema v;
    v.name = string(field(j, p, "name"), child(p, "name"));
    const auto kind = string(field(j, p, "kind"), child(p, "kind"));
    if (kind == "continuous") {
      check_keys(j, p, {"name", "kind", "cuts", "low", "high", "representatives", "counts"});
      v.kind = VariableSchema::Kind::Continuous;
      v.bins.cuts = field(j, p, "cuts").get<std::vector<double>>();
      v.bins.low = number(field(j, p, "low"), child(p, "low"));
      v.bins.high = number(field(j, p, "high"), child(p, "high"));
      v.bins.representatives = field(j, p, "representatives").get<std::vector<double>>();
      if (j.contains("counts")) v.bins.counts = j["counts"].get<std::vector<std::size_t>>();
      if (v.bins.representatives.size() != v.bins.bins())
        throw DocumentError(child(p, "representatives"), "expected one representative per bin");
      for (std::size_t k = 1; k < v.bins.cuts.size(); ++k)
        if (!(v.bins.cuts[k] > v.bins.cuts[k - 1])) throw DocumentError(child(p, "cuts"), "must increase strictly");
    } else if (kind == "categorical") {
      check_keys(j, p, {"name", "kind", "labels"});
      v.labels = field(j, p, "labels").get<std::vector<std::string>>();
      if (v.labels.empty()) throw DocumentError(child(p, "labels"), "must not be empty");
    } else {
      throw DocumentError(child(p, "kind"), "unknown kind '" + kind + "'");
    }
    s.variables.push_back(std::move(v));
  }
  return s;
}

/// Content hash of a schema, used to tie datasets and models together.
inline std::string schema_id(const DiscretizationSchema& s) {
  const std::string text = schema_to_json(s).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) h = (h ^ c) * 1099511628211ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Provenance {
  std::string source;
  std::size_t subsample_factor = 1;
  double sample_period = 0.0;  // s between consecutive rows of one segment
  std::string schema_id;
};

/// Discrete, aligned columns. Rows sharing a `segment` value are consecutive
/// in time, so a lag-1 value is the previous row within the same segment.
struct ProcessedDataset {
  std::vector<std::string> names;
  std::vector<std::vector<int>> columns;
  std::vector<int> segment;
  DiscretizationSchema schema;
  Provenance provenance;

  std::size_t rows() const { return segment.size(); }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw PipelineError("dataset has no column '" + name + "'");
  }
  const std::vector<int>& column(const std::string& name) const { return columns[column_index(name)]; }
  int cardinality(const std::string& name) const { return static_cast<int>(schema.at(name).cardinality()); }

  bool has_previous(std::size_t row) const { return row > 0 && segment[row] == segment[row - 1]; }

  void validate() const {
    if (columns.size() != names.size()) throw PipelineError("dataset: column count mismatch");
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows()) throw PipelineError("dataset: ragged column '" + names[c] + "'");
      const int card = cardinality(names[c]);
      for (int v : columns[c])
        if (v < 0 || v >= card) throw PipelineError("dataset: code out of range in '" + names[c] + "'");
    }
  }
};

/// At most `max_rows` rows as evenly spaced windows of `window` consecutive
/// rows. Each window becomes its own segment, so lags never span a gap.
inline ProcessedDataset thin_dataset(const ProcessedDataset& ds, std::size_t max_rows, std::size_t window = 20) {
  if (window == 0) throw PipelineError("thinning window must be >= 1");
  if (ds.rows() <= max_rows) return ds;
  const std::size_t k = max_rows / window;
  if (k == 0) throw PipelineError("max_rows is smaller than one window");
  ProcessedDataset out;
  out.names = ds.names;
  out.schema = ds.schema;
  out.provenance = ds.provenance;
  out.columns.resize(ds.columns.size());
  const double stride = static_cast<double>(ds.rows() - window) / static_cast<double>(std::max<std::size_t>(1, k - 1));
  int seg = -1;
  for (std::size_t j = 0; j < k; ++j) {
    const auto start = static_cast<std::size_t>(std::floor(static_cast<double>(j) * stride));
    for (std::size_t r = start; r < start + window; ++r) {
      if (r == start || !ds.has_previous(r)) ++seg;
      out.segment.push_back(seg);
      for (std::size_t c = 0; c < ds.columns.size(); ++c) out.columns[c].push_back(ds.columns[c][r]);
    }
  }
  return out;
}

/// L and per-waypoint D from a log. L[i] = B[i+1] - B[i] (the first row has no
/// predecessor); D[i][w] is the density at row i.
struct DerivedSeries {
  std::vector<double> L;
  std::vector<std::vector<double>> D;  // [row][waypoint]
};

inline DerivedSeries derive_series(const TimeSeriesLog& log, const WaypointGraph& graph) {
  if (log.size() == 0) throw PipelineError("derive_series: empty log");
  if (log.waypoints() != graph.size()) throw PipelineError("derive_series: log does not match the graph");
  DerivedSeries out;
  for (std::size_t i = 1; i < log.size(); ++i) out.L.push_back(log.B[i] - log.B[i - 1]);
  out.D.resize(log.size(), std::vector<double>(graph.size()));
  for (std::size_t i = 0; i < log.size(); ++i)
    for (std::size_t w = 0; w < graph.size(); ++w)
      out.D[i][w] = waypoint_density(log.count(i, w), graph.waypoint(static_cast<int>(w)).radius);
  return out;
}

struct PipelineParams {
  double subsample_rate = 1.0;  // Hz requested from the Nyquist check
  std::size_t max_bins = 8;
};

/// Log -> subsampled, derived, discretized long-format dataset with columns
/// S, W, C, O, V, L, D. Each waypoint contributes one segment of rows.
inline ProcessedDataset build_dataset(const TimeSeriesLog& raw, const Scenario& sc, const PipelineParams& pp,
                                      const std::string& source = "", SubsamplePlan* plan_out = nullptr) {
  if (raw.size() < 3) throw PipelineError("log too short to build a dataset");
  const double rate = uniform_rate(raw.t);
  const std::size_t nw = raw.waypoints();

  std::vector<std::vector<double>> series{raw.V, raw.B};
  auto as_double = [](const std::vector<int>& v) { return std::vector<double>(v.begin(), v.end()); };
  series.push_back(as_double(raw.C));
  series.push_back(as_double(raw.O));
  for (std::size_t w = 0; w < nw; ++w) {
    std::vector<double> c(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) c[i] = raw.count(i, w);
    series.push_back(std::move(c));
  }
  const auto plan = plan_subsample(series, rate, pp.subsample_rate);
  if (plan_out) *plan_out = plan;

  TimeSeriesLog log;
  log.waypoint_ids = raw.waypoint_ids;
  log.slot_ids = raw.slot_ids;
  log.sample_period = 1.0 / plan.rate;
  for (std::size_t i = 0; i < raw.size(); i += plan.factor) {
    log.t.push_back(raw.t[i]);
    log.V.push_back(raw.V[i]);
    log.B.push_back(raw.B[i]);
    log.L.push_back(raw.L[i]);
    log.C.push_back(raw.C[i]);
    log.O.push_back(raw.O[i]);
    log.S.push_back(raw.S[i]);
    log.robot_w.push_back(raw.robot_w[i]);
    log.min_person_dist.push_back(raw.min_person_dist[i]);
    for (std::size_t w = 0; w < nw; ++w) log.counts.push_back(raw.count(i, w));
  }
  const auto derived = derive_series(log, sc.graph);
  const std::size_t n = log.size() - 1;  // first row has no L

  std::vector<double> V, L, D;
  std::vector<int> S, W, C, O, seg;
  const std::size_t total = n * nw;
  for (auto* v : {&V, &L, &D}) v->reserve(total);
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t i = 1; i <= n; ++i) {
      seg.push_back(static_cast<int>(w));
      S.push_back(log.S[i]);
      W.push_back(static_cast<int>(w));
      C.push_back(log.C[i]);
      O.push_back(log.O[i]);
      V.push_back(log.V[i]);
      L.push_back(derived.L[i - 1]);
      D.push_back(derived.D[i][w]);
    }
  }

  ProcessedDataset ds;
  ds.segment = std::move(seg);
  auto categorical = [&](const std::string& name, std::vector<std::string> labels, std::vector<int> codes) {
    VariableSchema v;
    v.name = name;
    v.labels = std::move(labels);
    ds.schema.variables.push_back(std::move(v));
    ds.names.push_back(name);
    ds.columns.push_back(std::move(codes));
  };
  auto continuous = [&](const std::string& name, const std::vector<double>& x) {
    const auto k = elbow_bins(x, pp.max_bins);
    auto d = quantile_discretize(x, k, name);
    VariableSchema v;
    v.name = name;
    v.kind = VariableSchema::Kind::Continuous;
    v.bins = std::move(d.spec);
    ds.schema.variables.push_back(std::move(v));
    ds.names.push_back(name);
    ds.columns.push_back(std::move(d.codes));
  };
  categorical("S", log.slot_ids, std::move(S));
  categorical("W", log.waypoint_ids, std::move(W));
  categorical("C", {"0", "1"}, std::move(C));
  categorical("O", {"0", "1"}, std::move(O));
  continuous("V", V);
  continuous("L", L);
  continuous("D", D);

  ds.provenance.source = source;
  ds.provenance.subsample_factor = plan.factor;
  ds.provenance.sample_period = log.sample_period;
  ds.provenance.schema_id = schema_id(ds.schema);
  ds.validate();
  return ds;
}

inline std::string schema_sidecar_path(const std::string& csv_path) {
  const auto dot = csv_path.rfind(".csv");
  return (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".schema.json";
}

inline void write_dataset(const ProcessedDataset& ds, const std::string& csv_path) {
  {
    std::ofstream out(csv_path);
    if (!out) throw Error("cannot write " + csv_path);
    out << "segment";
    for (const auto& n : ds.names) out << ',' << n;
    out << '\n';
    for (std::size_t r = 0; r < ds.rows(); ++r) {
      out << ds.segment[r];
      for (const auto& c : ds.columns) out << ',' << c[r];
      out << '\n';
    }
  }
  auto doc = schema_to_json(ds.schema);
  doc["id"] = schema_id(ds.schema);
  jsonutil::Json meta{{"source", ds.provenance.source},
                      {"subsample_factor", ds.provenance.subsample_factor},
                      {"sample_period", ds.provenance.sample_period},
                      {"rows", ds.rows()},
                      {"columns", ds.names}};
  jsonutil::write_file(schema_sidecar_path(csv_path), jsonutil::Json{{"schema", doc}, {"dataset", meta}});
}

inline ProcessedDataset read_dataset(const std::string& csv_path) {
  using namespace jsonutil;
  const auto side_path = schema_sidecar_path(csv_path);
  const auto side = read_file(side_path);
  check_keys(side, "", {"schema", "dataset"});
  ProcessedDataset ds;
  ds.schema = schema_from_json(field(side, "", "schema"));
  const auto& meta = field(side, "", "dataset");
  check_keys(meta, "dataset", {"source", "subsample_factor", "sample_period", "rows", "columns"});
  ds.provenance.source = meta.value("source", "");
  ds.provenance.subsample_factor = meta.value("subsample_factor", std::size_t{1});
  ds.provenance.sample_period = number_or(meta, "dataset", "sample_period", 0.0);
  ds.provenance.schema_id = schema_id(ds.schema);
  if (side["schema"].contains("id") && side["schema"]["id"] != ds.provenance.schema_id)
    throw DocumentError(side_path, "schema id does not match its content");

  const auto table = csv::read(csv_path);
  if (table.header.empty() || table.header[0] != "segment") throw DocumentError(csv_path, "expected a segment column");
  ds.names.assign(table.header.begin() + 1, table.header.end());
  ds.columns.assign(ds.names.size(), {});
  for (const auto& row : table.rows) {
    ds.segment.push_back(std::stoi(row[0]));
    for (std::size_t c = 0; c < ds.names.size(); ++c) ds.columns[c].push_back(std::stoi(row[c + 1]));
  }
  for (const auto& n : ds.names)
    if (!ds.schema.find(n)) throw DocumentError(side_path, "schema lacks column '" + n + "'");
  ds.validate();
  return ds;
}

}  // namespace causalnav
