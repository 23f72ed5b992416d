#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "causalnav/graph/discovery.hpp"
#include "causalnav/graph/synthetic.hpp"

using namespace causalnav;

namespace {

ProcessedDataset noise_dataset(std::size_t n, std::uint64_t seed, int columns, int card) {
  Rng rng(seed);
  ProcessedDataset ds;
  for (int c = 0; c < columns; ++c) {
    VariableSchema v;
    v.name = "X" + std::to_string(c);
    for (int i = 0; i < card; ++i) v.labels.push_back(std::to_string(i));
    std::vector<int> codes(n);
    for (auto& x : codes) x = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(card)));
    ds.schema.variables.push_back(v);
    ds.names.push_back(v.name);
    ds.columns.push_back(std::move(codes));
  }
  ds.segment.assign(n, 0);
  return ds;
}

// CMI from plug-in probabilities, summed cell by cell.
double cmi_oracle(const std::vector<int>& x, const std::vector<int>& y, const std::vector<int>& z) {
  std::map<std::tuple<int, int, int>, double> xyz;
  std::map<std::pair<int, int>, double> xz, yz;
  std::map<int, double> zc;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xyz[{x[i], y[i], z[i]}] += 1;
    xz[{x[i], z[i]}] += 1;
    yz[{y[i], z[i]}] += 1;
    zc[z[i]] += 1;
  }
  double out = 0;
  for (const auto& [k, c] : xyz) {
    const auto [a, b, g] = k;
    out += c / n * std::log((c / n) * (zc[g] / n) / ((xz[{a, g}] / n) * (yz[{b, g}] / n)));
  }
  return out;
}

std::set<std::tuple<std::string, std::string, int>> edge_set(const LaggedDag& g) {
  std::set<std::tuple<std::string, std::string, int>> s;
  for (const auto& e : g.edges()) s.insert({e.src, e.dst, e.lag});
  return s;
}

}  // namespace

TEST(LaggedDag, GroundTruthEdges) {
  const auto g = ground_truth_model();
  const std::set<std::tuple<std::string, std::string, int>> expected{
      {"O", "L", 0}, {"O", "V", 0}, {"C", "L", 0}, {"C", "V", 0},
      {"V", "L", 0}, {"W", "D", 0}, {"S", "D", 0}, {"D", "D", 1}};
  EXPECT_EQ(edge_set(g), expected);
  EXPECT_EQ(g.edges().size(), 8u);
  for (const auto& n : g.nodes()) {
    const bool context = n.name == "S" || n.name == "W" || n.name == "C" || n.name == "O";
    EXPECT_EQ(n.kind, context ? NodeKind::Context : NodeKind::System);
  }
  EXPECT_NO_THROW(g.validate());
}

TEST(LaggedDag, JsonRoundTrip) {
  const auto g = ground_truth_model();
  const auto back = dag_from_json(dag_to_json(g));
  EXPECT_EQ(back.nodes(), g.nodes());
  EXPECT_EQ(back.edges(), g.edges());
  EXPECT_EQ(dag_to_json(back).dump(), dag_to_json(g).dump());
}

TEST(LaggedDag, ValidatorRejectsForbiddenEdges) {
  const std::vector<NodeSpec> nodes{{"S", NodeKind::Context}, {"V", NodeKind::System}, {"L", NodeKind::System}};
  EXPECT_THROW(LaggedDag(nodes, {{"V", "S", 0}}), GraphError);           // into context
  EXPECT_THROW(LaggedDag(nodes, {{"S", "V", 1}}), GraphError);           // lagged context
  EXPECT_THROW(LaggedDag(nodes, {{"V", "L", 0}, {"L", "V", 0}}), GraphError);  // duplicate adjacency
  EXPECT_THROW(LaggedDag(nodes, {{"V", "X", 0}}), GraphError);
  EXPECT_THROW(LaggedDag(nodes, {{"V", "L", 2}}), GraphError);
  EXPECT_THROW(LaggedDag(nodes, {{"V", "V", 0}}), GraphError);
  const std::vector<NodeSpec> three{{"A", NodeKind::System}, {"B", NodeKind::System}, {"C", NodeKind::System}};
  EXPECT_THROW(LaggedDag(three, {{"A", "B", 0}, {"B", "C", 0}, {"C", "A", 0}}), GraphError);
  EXPECT_NO_THROW(LaggedDag(three, {{"A", "B", 0}, {"B", "C", 0}, {"C", "A", 1}}));
  EXPECT_NO_THROW(LaggedDag(nodes, {{"V", "V", 1}, {"L", "V", 1}}));
}

TEST(CiTest, StatisticMatchesPlugInOracle) {
  Rng rng(4);
  const std::size_t n = 3000;
  std::vector<int> x(n), y(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = static_cast<int>(uniform_index(rng, 3));
    x[i] = (z[i] + static_cast<int>(uniform_index(rng, 2))) % 3;
    y[i] = uniform01(rng) < 0.7 ? x[i] % 2 : static_cast<int>(uniform_index(rng, 2));
  }
  const auto r = cmi_permutation_test({&x, 3}, {&y, 2}, {{&z, 3}}, 200, 1);
  EXPECT_NEAR(r.cmi, cmi_oracle(x, y, z), 1e-12);
  EXPECT_NEAR(r.p_value, 1.0 / 201, 1e-12);
  EXPECT_EQ(r.permutations, 200);
}

TEST(CiTest, IndependentDataRarelyRejects) {
  int rejections = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto ds = noise_dataset(2000, s, 3, 3);
    const auto r = cmi_permutation_test({&ds.columns[0], 3}, {&ds.columns[1], 3}, {{&ds.columns[2], 3}}, 200, s);
    EXPECT_GE(r.p_value, 1.0 / 201);
    EXPECT_LE(r.p_value, 1.0);
    rejections += r.p_value <= 0.05;
  }
  EXPECT_LE(rejections, 8);  // nominal 2 of 40
}

TEST(CiTest, EarlyStopKeepsDecision) {
  const auto ds = noise_dataset(2000, 9, 2, 3);
  const auto full = cmi_permutation_test({&ds.columns[0], 3}, {&ds.columns[1], 3}, {}, 500, 3);
  const auto fast = cmi_permutation_test({&ds.columns[0], 3}, {&ds.columns[1], 3}, {}, 500, 3, 0.05);
  EXPECT_EQ(full.p_value <= 0.05, fast.p_value <= 0.05);
  EXPECT_LE(fast.p_value, full.p_value + 1e-12);
}

TEST(Discovery, IndependentNoiseGivesNoEdges) {
  auto ds = noise_dataset(5000, 2, 4, 3);
  const std::vector<NodeSpec> nodes{{"X0", NodeKind::Context}, {"X1", NodeKind::System},
                                    {"X2", NodeKind::System}, {"X3", NodeKind::System}};
  DiscoveryOptions opt;
  opt.alpha = 0.01;
  EXPECT_TRUE(discover_structure(ds, nodes, opt).edges().empty());
}

TEST(Discovery, RecoversSyntheticStructure) {
  const auto ds = synthetic_warehouse_data(20000, 1);
  DiscoveryOptions opt;
  opt.tiers = warehouse_tiers();
  const auto g = discover_structure(ds, ground_truth_model().nodes(), opt);
  EXPECT_GE(score_edges(g, ground_truth_model()).f1(), 0.9);
  for (const auto& e : g.edges()) EXPECT_EQ(g.kind(e.dst), NodeKind::System);
}

TEST(Discovery, WithoutTiersTheMotionBatteryLinkStaysUndirected) {
  const auto ds = synthetic_warehouse_data(20000, 2);
  const auto g = discover_structure(ds, ground_truth_model().nodes(), {});
  bool undirected = false;
  for (const auto& e : g.edges())
    if (!e.directed) undirected = (e.src == "L" && e.dst == "V") || (e.src == "V" && e.dst == "L");
  EXPECT_TRUE(undirected);
  EXPECT_LT(score_edges(g, ground_truth_model()).f1(), 1.0);
}

TEST(Discovery, MonotoneInAlpha) {
  // weak signal so the two levels actually differ
  Rng rng(8);
  const std::size_t n = 4000;
  auto ds = noise_dataset(n, 8, 4, 3);
  for (std::size_t i = 0; i < n; ++i)
    if (uniform01(rng) < 0.06) ds.columns[2][i] = ds.columns[1][i];
  for (std::size_t i = 1; i < n; ++i)
    if (uniform01(rng) < 0.05) ds.columns[3][i] = ds.columns[3][i - 1];
  const std::vector<NodeSpec> nodes{{"X0", NodeKind::Context}, {"X1", NodeKind::System},
                                    {"X2", NodeKind::System}, {"X3", NodeKind::System}};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    DiscoveryOptions lo, hi;
    lo.alpha = 0.01;
    hi.alpha = 0.1;
    lo.seed = hi.seed = seed;
    const auto a = edge_set(discover_structure(ds, nodes, lo));
    const auto b = edge_set(discover_structure(ds, nodes, hi));
    EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
  const auto synth = synthetic_warehouse_data(5000, 3);
  DiscoveryOptions lo, hi;
  lo.alpha = 0.01;
  hi.alpha = 0.1;
  const auto a = edge_set(discover_structure(synth, ground_truth_model().nodes(), lo));
  const auto b = edge_set(discover_structure(synth, ground_truth_model().nodes(), hi));
  EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
}

TEST(Discovery, RejectsBadInputs) {
  auto ds = noise_dataset(500, 1, 2, 3);
  const std::vector<NodeSpec> nodes{{"X0", NodeKind::Context}, {"X1", NodeKind::System}};
  DiscoveryOptions opt;
  opt.alpha = 1.0;
  EXPECT_THROW(discover_structure(ds, nodes, opt), PipelineError);
  opt.alpha = 0.0;
  EXPECT_THROW(discover_structure(ds, nodes, opt), PipelineError);
  EXPECT_THROW(discover_structure(noise_dataset(8, 1, 2, 3), nodes, {}), PipelineError);
}

TEST(Discovery, ConstantColumnStaysIsolated) {
  auto ds = synthetic_warehouse_data(20000, 5);
  auto& c = ds.columns[ds.column_index("C")];
  std::fill(c.begin(), c.end(), 0);
  DiscoveryOptions opt;
  opt.tiers = warehouse_tiers();
  const auto g = discover_structure(ds, ground_truth_model().nodes(), opt);
  for (const auto& e : g.edges()) {
    EXPECT_NE(e.src, "C");
    EXPECT_NE(e.dst, "C");
  }
  EXPECT_FALSE(g.edges().empty());
}
