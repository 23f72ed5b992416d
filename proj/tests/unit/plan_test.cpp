#include <gtest/gtest.h>

#include <functional>

#include "causalnav/graph/synthetic.hpp"
#include "causalnav/plan/decision.hpp"
#include "fixtures.hpp"
#include "planner_oracle.hpp"

using namespace causalnav;

namespace {

using namespace oracles;

// Gives V, L, D real-valued bins and labels W by the ids of `random_graph`
// waypoints.
void with_real_bins(ProcessedDataset& ds) {
  auto cont = [&](const std::string& name, std::vector<double> cuts, double lo, double hi, std::vector<double> reps) {
    for (auto& v : ds.schema.variables)
      if (v.name == name) {
        v.kind = VariableSchema::Kind::Continuous;
        v.labels.clear();
        v.bins.cuts = std::move(cuts);
        v.bins.low = lo;
        v.bins.high = hi;
        v.bins.representatives = std::move(reps);
      }
  };
  cont("V", {0.15, 0.35}, 0.0, 0.5, {0.0, 0.25, 0.5});
  cont("L", {-0.025, -0.015, 0.0}, -0.035, 0.035, {-0.03, -0.02, -0.01, 0.028});
  cont("D", {0.05, 0.2, 0.45}, 0.0, 1.0, {0.0, 0.1, 0.3, 0.6});
  for (auto& v : ds.schema.variables)
    if (v.name == "W")
      for (std::size_t i = 0; i < v.labels.size(); ++i) v.labels[i] = "w" + std::to_string(i);
  ds.provenance.sample_period = 1.0;
}

CausalInferenceModel small_model(std::uint64_t seed) {
  auto ds = synthetic_warehouse_data(20000, seed);
  with_real_bins(ds);
  return fit_mle(ground_truth_model(), ds);
}

}  // namespace

TEST(Planner, MatchesBruteForceOnRandomGraphs) {
  const HeuristicWeights weights[] = {{1, 10, 5}, {1, 0, 0}, {0.1, 100, 50}, {0, 1, 0}, {10, 1, 0.5}};
  int cases = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    Rng rng(seed);
    const int n = 2 + static_cast<int>(uniform_index(rng, 9));
    const auto g = fixtures::random_graph(seed, n, static_cast<int>(uniform_index(rng, static_cast<std::size_t>(2 * n))));
    const auto est = random_estimates(seed + 1000, g.size());
    const auto& w = weights[seed % 5];
    const int s = static_cast<int>(uniform_index(rng, g.size()));
    const int t = static_cast<int>(uniform_index(rng, g.size()));
    const auto plan = plan_path(g, s, t, est, w);
    const auto brute = brute_force(g, s, t, est, w);
    EXPECT_EQ(plan.total_cost, brute.cost) << "seed " << seed;
    EXPECT_EQ(plan.path, brute.path) << "seed " << seed;
    double cl = 0;
    for (const auto& a : plan.arcs) cl += a.battery_cost;
    EXPECT_NEAR(plan.C_L, cl, 1e-9);
    for (std::size_t i = 1; i < plan.path.size(); ++i) EXPECT_TRUE(g.has_arc(plan.path[i - 1], plan.path[i]));
    ++cases;
  }
  EXPECT_GE(cases, 100);
}

TEST(Planner, DistanceOnlyEqualsDijkstra) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto g = fixtures::random_graph(seed * 31, 10, 8);
    const ShortestPathTable sp(g);
    const auto est = random_estimates(seed, g.size());
    for (int s = 0; s < 10; s += 3)
      for (int t = 0; t < 10; ++t) {
        const auto plan = plan_path(g, s, t, est, {1, 0, 0});
        EXPECT_EQ(plan.path, sp.path(s, t));
        EXPECT_NEAR(plan.distance, sp.distance(s, t), 1e-9);
      }
  }
}

TEST(Planner, GuideIsAdmissible) {
  const HeuristicWeights w{1, 10, 5};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = fixtures::random_graph(seed, 8, 6);
    const auto est = random_estimates(seed, g.size());
    for (int goal = 0; goal < 8; ++goal)
      for (int u = 0; u < 8; ++u) {
        const auto b = brute_force(g, u, goal, est, w);
        EXPECT_LE(w.lambda_delta * distance(g.waypoint(u).position, g.waypoint(goal).position), b.cost + 1e-12);
      }
  }
}

TEST(Planner, DiamondPrefersUncrowdedBranch) {
  WaypointGraph g({{"A", {0, 0}, 1, "shelf"}, {"B", {2, 1}, 1, "shelf"}, {"C", {2, -3}, 1, "shelf"}, {"D", {4, 0}, 1, "shelf"}},
                  {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  ArcEstimates est;
  est.density = {0, 1.0, 0, 0};
  est.L_hat_step = -0.01;
  est.velocity = 0.5;
  const HeuristicWeights w{1, 10, 5};
  const double short_total = path_cost(g, {0, 1, 3}, est, w);
  const double long_total = path_cost(g, {0, 2, 3}, est, w);
  ASSERT_LT(long_total, short_total);
  const auto plan = plan_path(g, 0, 3, est, w);
  EXPECT_EQ(plan.path, (std::vector<int>{0, 2, 3}));
  EXPECT_EQ(plan.total_cost, long_total);
  EXPECT_EQ(plan_path(g, 0, 3, est, {1, 0, 0}).path, (std::vector<int>{0, 1, 3}));
}

TEST(Planner, UniformEstimatesFollowMetricOrder) {
  // equal D everywhere adds lambda_D * D per arc, so zero D gives the metric
  // shortest path and positive D the cheapest (length, arc count) trade-off
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = fixtures::random_graph(seed * 7, 9, 9);
    const ShortestPathTable sp(g);
    ArcEstimates est;
    est.L_hat_step = -0.02;
    est.density.assign(g.size(), 0.0);
    for (int t = 1; t < 9; ++t) EXPECT_EQ(plan_path(g, 0, t, est, {1, 10, 5}).path, sp.path(0, t));
    est.density.assign(g.size(), 0.4);
    for (int t = 1; t < 9; ++t) {
      const auto b = brute_force(g, 0, t, est, {1, 10, 5});
      EXPECT_EQ(plan_path(g, 0, t, est, {1, 10, 5}).path, b.path);
    }
  }
}

TEST(Planner, TrivialAndErrors) {
  const auto g = fixtures::random_graph(3, 5, 2);
  const auto est = random_estimates(3, 5);
  const auto plan = plan_path(g, 2, 2, est, {});
  EXPECT_EQ(plan.path, (std::vector<int>{2}));
  EXPECT_EQ(plan.total_cost, 0.0);
  EXPECT_THROW(plan_path(g, 0, 9, est, {}), PlanningError);
  EXPECT_THROW(plan_path(g, 0, 1, est, {0, 0, 0}), PlanningError);
  EXPECT_THROW(plan_path(g, 0, 1, est, {-1, 0, 0}), PlanningError);
}

TEST(Decision, Examples) {
  PathPlan p;
  DecisionPolicy policy;
  p.C_L = 10;
  EXPECT_EQ(decide_task(p, 100, policy), Verdict::Proceed);
  p.C_L = 6;
  EXPECT_EQ(decide_task(p, 25, policy), Verdict::Abort);
  EXPECT_EQ(decide_task(p, 26, policy), Verdict::Proceed);
}

TEST(Decision, MonotoneInBattery) {
  Rng rng(4);
  DecisionPolicy policy;
  for (int i = 0; i < 1000; ++i) {
    PathPlan p;
    p.C_L = uniform(rng, 0, 30);
    const double b = uniform(rng, 0, 100);
    if (decide_task(p, b, policy) == Verdict::Proceed) {
      EXPECT_EQ(decide_task(p, b + uniform(rng, 0, 10), policy), Verdict::Proceed);
    }
  }
}

TEST(Estimates, BatteryCostDefinition) {
  const auto m = small_model(2);
  const auto g = fixtures::random_graph(5, 5, 3);
  const auto fast = estimate_arcs(g, m, 0, 0, 0.5);
  const auto slow = estimate_arcs(g, m, 0, 0, 0.25);
  for (const auto* e : {&fast, &slow})
    for (const auto& a : e->all(g)) EXPECT_EQ(a.battery_cost, (a.delta / e->velocity) * std::abs(a.L_hat));
  // halving v doubles the traversal time of every arc
  const auto af = fast.arc(g, g.arcs()[0].a, g.arcs()[0].b);
  const auto as = slow.arc(g, g.arcs()[0].a, g.arcs()[0].b);
  EXPECT_DOUBLE_EQ(as.delta / slow.velocity, 2 * af.delta / fast.velocity);
  // L-hat is the backdoor-adjusted expectation
  const auto dist = do_query(m, {{{"V", 2}}, {{"C", 0}}, "L"});
  EXPECT_DOUBLE_EQ(fast.L_hat_step, expected_value(dist, m.schema, "L"));
  EXPECT_THROW(estimate_arcs(g, m, 0, 0, 0.7), PlanningError);
  EXPECT_THROW(estimate_arcs(g, m, 0, 0, 0.0), PlanningError);
}

TEST(Estimates, EmptySlotHasZeroDensity) {
  auto ds = synthetic_warehouse_data(20000, 8);
  auto& D = ds.columns[ds.column_index("D")];
  const auto& S = ds.column("S");
  for (std::size_t i = 0; i < ds.rows(); ++i)
    if (S[i] == 5) D[i] = 0;
  with_real_bins(ds);
  const auto m = fit_mle(ground_truth_model(), ds);
  const auto g = fixtures::random_graph(5, 5, 3);
  const auto est = estimate_arcs(g, m, 5, 0, 0.5);
  for (double d : est.density) EXPECT_EQ(d, 0.0);
  const auto busy = estimate_arcs(g, m, 1, 0, 0.5);
  EXPECT_GT(*std::max_element(busy.density.begin(), busy.density.end()), 0.0);
}
