#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "causalnav/data/discretize.hpp"
#include "causalnav/graph/synthetic.hpp"
#include "causalnav/infer/query.hpp"
#include "inference_oracle.hpp"

using namespace causalnav;

namespace {

using namespace oracles;

ProcessedDataset tiny_dataset(std::vector<std::pair<std::string, std::vector<int>>> cols,
                              std::vector<int> cards, std::vector<int> segment = {}) {
  ProcessedDataset ds;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    ds.names.push_back(cols[i].first);
    ds.columns.push_back(cols[i].second);
    ds.schema.variables.push_back(categorical(cols[i].first, cards[i]));
  }
  ds.segment = segment.empty() ? std::vector<int>(ds.columns[0].size(), 0) : segment;
  ds.provenance.sample_period = 1.0;
  return ds;
}

}  // namespace

TEST(Factor, ProductRestrictMarginalize) {
  Factor a({0, 1}, {2, 3}, {1, 2, 3, 4, 5, 6});
  Factor b({1, 2}, {3, 2}, {1, 10, 2, 20, 3, 30});
  const Factor ab = a * b;
  ASSERT_EQ(ab.vars(), (std::vector<int>{0, 1, 2}));
  // a(1,2) * b(2,1) = 6 * 30
  EXPECT_DOUBLE_EQ(ab.restrict(0, 1).restrict(1, 2).restrict(2, 1).sum(), 180.0);
  EXPECT_DOUBLE_EQ(a.marginalize(0).restrict(1, 1).sum(), 7.0);
  EXPECT_DOUBLE_EQ(a.marginalize(1).restrict(0, 0).sum(), 6.0);
  EXPECT_DOUBLE_EQ(ab.sum(), (1 + 4) * 11 + (2 + 5) * 22 + (3 + 6) * 33);
}

TEST(Fit, ParentlessFrequencies) {
  std::vector<int> x(100, 1);
  std::fill(x.begin(), x.begin() + 30, 0);
  LaggedDag g({{"X", NodeKind::System}}, {});
  const auto m = fit_mle(g, tiny_dataset({{"X", x}}, {2}));
  EXPECT_DOUBLE_EQ(m.cpd("X").at(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(m.cpd("X").at(0, 1), 0.7);
}

TEST(Fit, MatchesIndependentTally) {
  const auto ds = synthetic_warehouse_data(20000, 5);
  const auto m = fit_mle(ground_truth_model(), ds);
  // D given (S, W, D[t-1]) counted directly
  const auto& S = ds.column("S");
  const auto& W = ds.column("W");
  const auto& D = ds.column("D");
  std::map<std::tuple<int, int, int>, std::map<int, double>> tally;
  for (std::size_t r = 1; r < ds.rows(); ++r)
    if (ds.segment[r] == ds.segment[r - 1]) tally[{S[r], W[r], D[r - 1]}][D[r]] += 1;
  const auto& cpd = m.cpd("D");
  std::vector<int> order;
  for (const auto& p : cpd.parents) order.push_back(p.name == "S" ? 0 : p.name == "W" ? 1 : 2);
  for (const auto& [key, hist] : tally) {
    const int vals[3] = {std::get<0>(key), std::get<1>(key), std::get<2>(key)};
    std::size_t row = 0;
    for (std::size_t j = 0; j < order.size(); ++j)
      row = row * static_cast<std::size_t>(cpd.parent_cardinalities[j]) + static_cast<std::size_t>(vals[order[j]]);
    double total = 0;
    for (const auto& [v, c] : hist) total += c;
    for (int v = 0; v < cpd.cardinality; ++v) {
      const double expect = hist.count(v) ? hist.at(v) / total : 0.0;
      EXPECT_NEAR(cpd.at(row, v), expect, 1e-12);
    }
  }
  for (const auto& c : m.cpds)
    for (std::size_t r = 0; r < c.rows(); ++r) {
      double s = 0;
      for (int v = 0; v < c.cardinality; ++v) s += c.at(r, v);
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(Fit, HandEnumeratedThreeVariables) {
  // A -> B, A -> C, B -> C
  const std::vector<int> A{0, 0, 0, 1, 1, 1, 1, 0, 1, 0};
  const std::vector<int> B{0, 1, 1, 0, 1, 1, 0, 0, 1, 1};
  const std::vector<int> C{1, 0, 1, 1, 0, 0, 1, 1, 0, 2};
  LaggedDag g({{"A", NodeKind::Context}, {"B", NodeKind::System}, {"C", NodeKind::System}},
              {{"A", "B", 0}, {"A", "C", 0}, {"B", "C", 0}});
  const auto m = fit_mle(g, tiny_dataset({{"A", A}, {"B", B}, {"C", C}}, {2, 2, 3}));
  std::map<std::pair<int, int>, std::map<int, double>> tally;
  for (std::size_t i = 0; i < A.size(); ++i) tally[{A[i], B[i]}][C[i]] += 1;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto& h = tally[{a, b}];
      double total = 0;
      for (const auto& [v, c] : h) total += c;
      for (int c = 0; c < 3; ++c)
        EXPECT_DOUBLE_EQ(m.cpd("C").at(static_cast<std::size_t>(a * 2 + b), c), h.count(c) ? h.at(c) / total : 0.0);
    }
  EXPECT_DOUBLE_EQ(m.cpd("A").at(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(m.cpd("B").at(1, 1), 0.6);
}

TEST(Fit, UnseenParentCombinationIsUniform) {
  LaggedDag g({{"A", NodeKind::Context}, {"B", NodeKind::System}}, {{"A", "B", 0}});
  const auto m = fit_mle(g, tiny_dataset({{"A", {0, 0, 0}}, {"B", {1, 2, 2}}}, {2, 3}));
  for (int v = 0; v < 3; ++v) EXPECT_DOUBLE_EQ(m.cpd("B").at(1, v), 1.0 / 3.0);
  EXPECT_EQ(m.cpd("B").unseen_rows, 1);
}

TEST(Fit, LagParentsUseSegments) {
  // two segments; the pair straddling the boundary must not be counted
  LaggedDag g({{"D", NodeKind::System}}, {{"D", "D", 1}});
  const auto m = fit_mle(g, tiny_dataset({{"D", {0, 1, 1, 0, 0}}}, {2}, {0, 0, 0, 1, 1}));
  const auto& c = m.cpd("D");
  EXPECT_DOUBLE_EQ(c.at(0, 1), 0.5);  // D[t-1]=0: 0->1 and 0->0
  EXPECT_DOUBLE_EQ(c.at(1, 1), 1.0);  // D[t-1]=1: 1->1 only
  EXPECT_DOUBLE_EQ(m.cpd("D[t-1]").at(0, 0), 2.0 / 3.0);
}

TEST(Fit, Errors) {
  LaggedDag g({{"X", NodeKind::System}}, {});
  auto ds = tiny_dataset({{"X", {}}}, {2});
  EXPECT_THROW(fit_mle(g, ds), InferenceError);
  LaggedDag und({{"X", NodeKind::System}, {"Y", NodeKind::System}}, {{"X", "Y", 0, false}});
  EXPECT_THROW(fit_mle(und, tiny_dataset({{"X", {0, 1}}, {"Y", {1, 0}}}, {2, 2})), InferenceError);
}

TEST(Query, MatchesEnumerationOnRandomNetworks) {
  int queries = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto m = random_model(seed);
    const auto vars = variables_of(m);
    Rng rng(seed * 7919);
    for (int trial = 0; trial < 6; ++trial) {
      QuerySpec q;
      q.target = vars[uniform_index(rng, vars.size())];
      for (const auto& v : vars) {
        if (v == q.target) continue;
        const double u = uniform01(rng);
        const int value = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(m.cardinality(v))));
        if (u < 0.2 && trial % 3 != 0) q.interventions[v] = value;
        else if (u < 0.45) q.conditions[v] = value;
      }
      const auto expect = enumerate_query(m, q);
      if (expect.empty()) {
        EXPECT_THROW(do_query(m, q), ZeroProbabilityError);
        continue;
      }
      const auto got = do_query(m, q);
      ASSERT_EQ(got.size(), expect.size());
      for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], expect[k], 1e-9) << "seed " << seed;
      EXPECT_NEAR(std::accumulate(got.begin(), got.end(), 0.0), 1.0, 1e-9);
      ++queries;
    }
  }
  EXPECT_GT(queries, 300);
}

TEST(Query, BackdoorAdjustment) {
  const auto m = backdoor_model();
  const double pO[2] = {0.7, 0.3};
  for (int v = 0; v < 2; ++v) {
    QuerySpec q{{{"V", v}}, {}, "L"};
    const auto got = do_query(m, q);
    for (int l = 0; l < 3; ++l) {
      double expect = 0;
      for (int o = 0; o < 2; ++o) expect += pO[o] * m.cpd("L").at(static_cast<std::size_t>(o * 2 + v), l);
      EXPECT_NEAR(got[static_cast<std::size_t>(l)], expect, 1e-12);
    }
  }
  // plain conditioning differs because O confounds V and L
  const auto cond = do_query(m, {{}, {{"V", 1}}, "L"});
  const auto intv = do_query(m, {{{"V", 1}}, {}, "L"});
  EXPECT_GT(std::abs(cond[0] - intv[0]), 0.05);
  // 0.7*(0.3,0.4,0.3) + 0.3*(0.8,0.15,0.05) on (-0.025,-0.015,-0.005)
  EXPECT_NEAR(expected_value(intv, m.schema, "L"), 0.45 * -0.025 + 0.325 * -0.015 + 0.225 * -0.005, 1e-12);
}

TEST(Query, ContextInterventionEqualsConditioning) {
  const auto ds = synthetic_warehouse_data(20000, 9);
  const auto m = fit_mle(ground_truth_model(), ds);
  for (int s = 0; s < m.cardinality("S"); ++s)
    for (int w = 0; w < m.cardinality("W"); ++w) {
      const auto a = do_query(m, {{{"S", s}}, {{"W", w}}, "D"});
      const auto b = do_query(m, {{}, {{"S", s}, {"W", w}}, "D"});
      for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
    }
}

TEST(Query, ParentlessInterventionEqualsConditioning) {
  const auto m = backdoor_model();
  for (int o = 0; o < 2; ++o) {
    const auto a = do_query(m, {{{"O", o}}, {}, "L"});
    const auto b = do_query(m, {{}, {{"O", o}}, "L"});
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-15);
  }
}

TEST(Query, ZeroProbabilityAndValidation) {
  auto m = backdoor_model();
  m.cpds[0].table = {1.0, 0.0};
  EXPECT_THROW(do_query(m, {{}, {{"O", 1}}, "L"}), ZeroProbabilityError);
  EXPECT_THROW(do_query(m, {{{"V", 2}}, {}, "L"}), InferenceError);
  EXPECT_THROW(do_query(m, {{{"V", 0}}, {{"V", 0}}, "L"}), InferenceError);
  EXPECT_THROW(do_query(m, {{}, {{"L", 0}}, "L"}), InferenceError);
  EXPECT_THROW(do_query(m, {{}, {}, "Q"}), InferenceError);
}

TEST(Query, LagNodeMarginalizedWhenOpen) {
  // D[t-1] has no context parents here, so P(D) = sum_d P(D | d) P(D[t-1] = d)
  LaggedDag g({{"D", NodeKind::System}}, {{"D", "D", 1}});
  const auto m = fit_mle(g, tiny_dataset({{"D", {0, 1, 1, 0, 0, 0, 1}}}, {2}));
  const auto got = do_query(m, {{}, {}, "D"});
  const auto& lag = m.cpd("D[t-1]");
  const auto& d = m.cpd("D");
  EXPECT_NEAR(got[1], lag.at(0, 0) * d.at(0, 1) + lag.at(0, 1) * d.at(1, 1), 1e-12);
  const auto given = do_query(m, {{}, {{"D[t-1]", 1}}, "D"});
  EXPECT_NEAR(given[1], d.at(1, 1), 1e-12);
}

TEST(Expectation, Examples) {
  DiscretizationSchema s;
  VariableSchema v;
  v.name = "L";
  v.kind = VariableSchema::Kind::Continuous;
  v.bins.cuts = {-0.006, 0.0};
  v.bins.low = -0.01;
  v.bins.high = 0.01;
  v.bins.representatives = {-0.007, -0.003, 0.004};
  s.variables.push_back(v);
  EXPECT_DOUBLE_EQ(expected_value({1, 0, 0}, s, "L"), -0.007);
  v.name = "U";
  v.bins.cuts = {0.5};
  v.bins.low = 0;
  v.bins.high = 1;
  v.bins.representatives = {0, 1};
  s.variables.push_back(v);
  EXPECT_DOUBLE_EQ(expected_value({0.5, 0.5}, s, "U"), 0.5);
  v.name = "T";
  v.bins.cuts = {1.5, 3};
  v.bins.low = 1;
  v.bins.high = 4;
  v.bins.representatives = {1, 2, 4};
  s.variables.push_back(v);
  EXPECT_NEAR(expected_value({0.2, 0.3, 0.5}, s, "T"), 2.8, 1e-12);
  EXPECT_THROW(expected_value({1.0}, s, "missing"), Error);
  EXPECT_THROW(expected_value({0.5, 0.4}, s, "U"), InferenceError);
}

TEST(Expectation, RecomposedRowNearSampleMean) {
  Rng rng(3);
  std::vector<int> parent;
  std::vector<double> x;
  for (int i = 0; i < 5000; ++i) {
    const int p = static_cast<int>(uniform_index(rng, 2));
    parent.push_back(p);
    x.push_back(p == 0 ? uniform(rng, 0, 1) : uniform(rng, 0.5, 3));
  }
  const auto disc = quantile_discretize(x, 6, "X");
  auto ds = tiny_dataset({{"P", parent}, {"X", disc.codes}}, {2, 6});
  ds.schema.variables[1].kind = VariableSchema::Kind::Continuous;
  ds.schema.variables[1].labels.clear();
  ds.schema.variables[1].bins = disc.spec;
  LaggedDag g({{"P", NodeKind::Context}, {"X", NodeKind::System}}, {{"P", "X", 0}});
  const auto m = fit_mle(g, ds);
  double width = 0;
  for (std::size_t k = 0; k < disc.spec.bins(); ++k) width = std::max(width, disc.spec.bin_high(k) - disc.spec.bin_low(k));
  for (int p = 0; p < 2; ++p) {
    double sum = 0, n = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (parent[i] == p) sum += x[i], n += 1;
    const auto dist = do_query(m, {{}, {{"P", p}}, "X"});
    EXPECT_LE(std::abs(expected_value(dist, m.schema, "X") - sum / n), width);
  }
}

TEST(ModelFile, RoundTrip) {
  const auto m = fit_mle(ground_truth_model(), synthetic_warehouse_data(5000, 2));
  const auto back = model_from_json(model_to_json(m));
  EXPECT_EQ(model_to_json(back).dump(), model_to_json(m).dump());
  auto doc = model_to_json(m);
  doc["cpds"][0]["rows"][0][0] = 5.0;
  EXPECT_THROW(model_from_json(doc), DocumentError);
  doc = model_to_json(m);
  doc["extra"] = 1;
  EXPECT_THROW(model_from_json(doc), DocumentError);
}
