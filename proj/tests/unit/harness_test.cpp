#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "causalnav.hpp"

using namespace causalnav;
namespace fs = std::filesystem;

namespace {

TaskOutcome outcome(TaskStatus st, double distance, double planned, double battery, double active = 10,
                    double stalled = 0) {
  TaskOutcome t;
  t.status = st;
  t.distance = distance;
  t.planned_distance = planned;
  t.battery_spent = battery;
  t.active = active;
  t.stalled = stalled;
  return t;
}

RunResult run_of(std::string approach, std::vector<TaskOutcome> outcomes) {
  RunResult r;
  r.approach = std::move(approach);
  r.outcomes = std::move(outcomes);
  for (const auto& t : r.outcomes)
    if (t.status != TaskStatus::Refused) r.consumption += t.battery_spent;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("causalnav_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Desk scenario plus a reference-structure model trained on a short run.
struct Desk {
  Scenario sc;
  Parameters p;
  CausalInferenceModel model;
};

const Desk& desk() {
  static const Desk d = [] {
    Desk x;
    x.sc = load_scenario_file(std::string(CAUSALNAV_SOURCE_DIR) + "/scenarios/desk20.json");
    x.p = profile_parameters("desk");
    auto train = x.p;
    train.sim.slot_duration = 600;
    x.model = train_model(x.sc, train, 100, "reference").model;
    return x;
  }();
  return d;
}

// Per-slot goal histories, split back into one list per worker.
std::vector<std::vector<std::vector<int>>> split_goals(const RunResult& r) {
  std::vector<std::vector<std::vector<int>>> out;
  for (const auto& flat : r.worker_goals) {
    auto& slot = out.emplace_back();
    for (std::size_t i = 0; i < flat.size();) {
      const auto n = static_cast<std::size_t>(flat[i++]);
      slot.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i), flat.begin() + static_cast<std::ptrdiff_t>(i + n));
      i += n;
    }
  }
  return out;
}

int slot_of(const Scenario& sc, const std::string& id) {
  for (std::size_t s = 0; s < sc.schedule.slots.size(); ++s)
    if (sc.schedule.slots[s].id == id) return static_cast<int>(s);
  return -1;
}

}  // namespace

TEST(Metrics, SingleCleanSuccess) {
  const auto run = run_of("a", {outcome(TaskStatus::Success, 10, 10, 1)});
  const auto m = compute_approach_metrics({&run});
  EXPECT_EQ(m.success, 1u);
  EXPECT_DOUBLE_EQ(m.distance_planned, 10);
  EXPECT_DOUBLE_EQ(m.distance_extra, 0);
  EXPECT_DOUBLE_EQ(m.distance_wasted, 0);
  EXPECT_DOUBLE_EQ(m.time_wasted, 0);
}

TEST(Metrics, EffectiveAndWastedBatterySplitConsumption) {
  const auto run = run_of("a", {outcome(TaskStatus::Success, 10, 10, 5), outcome(TaskStatus::FailureDeadline, 8, 12, 5)});
  const auto m = compute_approach_metrics({&run});
  EXPECT_DOUBLE_EQ(m.battery_effective, 0.05);
  EXPECT_DOUBLE_EQ(m.battery_wasted, 0.05);
  EXPECT_NEAR(m.battery_effective / m.consumption, 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(m.distance_wasted, 8);
  EXPECT_DOUBLE_EQ(m.time_wasted, 10);
}

TEST(Metrics, RefusedTasksAddNoWaste) {
  auto refused = outcome(TaskStatus::Refused, 0, 14, 0, 0);
  const auto run = run_of("a", {outcome(TaskStatus::Success, 11, 10, 2), refused});
  const auto m = compute_approach_metrics({&run});
  EXPECT_EQ(m.refused, 1u);
  EXPECT_EQ(m.tasks, 2u);
  EXPECT_DOUBLE_EQ(m.distance_wasted, 0);
  EXPECT_DOUBLE_EQ(m.time_wasted, 0);
  EXPECT_DOUBLE_EQ(m.battery_wasted, 0);
  EXPECT_DOUBLE_EQ(m.distance_extra, 1);
  EXPECT_EQ(m.task_time.size(), 1u);
}

TEST(Metrics, ProximityZonesDelegate) {
  auto run = run_of("a", {outcome(TaskStatus::Success, 1, 1, 0)});
  run.proximity = {0.2, 0.44, 0.46, 1.1, 1.3, 3.0, 3.7, 9.0, 0.0};
  const auto m = compute_approach_metrics({&run});
  std::array<std::size_t, 5> expect{};
  for (double d : run.proximity) ++expect[static_cast<std::size_t>(classify_proxemics(d))];
  EXPECT_EQ(m.zones, expect);
}

TEST(Metrics, PercentagesSumToHundred) {
  const auto p = percentages<3>({1.0, 2.5, 0.125});
  EXPECT_NEAR(p[0] + p[1] + p[2], 100.0, 1e-9);
  const auto z = percentages<2>({0.0, 0.0});
  EXPECT_EQ(z[0] + z[1], 0.0);
}

TEST(Metrics, ReportComparesAgainstReference) {
  std::vector<RunResult> runs;
  runs.push_back(run_of("baseline", {outcome(TaskStatus::Success, 10, 10, 2), outcome(TaskStatus::FailureDeadline, 3, 10, 1)}));
  runs.push_back(run_of("full_causal", {outcome(TaskStatus::Success, 12, 12, 2), outcome(TaskStatus::Success, 9, 9, 1)}));
  runs[0].proximity = {0.5, 0.7};
  runs[1].proximity = {1.5, 1.7};
  const auto rep = compute_metrics(runs);
  ASSERT_EQ(rep.approaches.size(), 2u);
  EXPECT_EQ(rep.at("full_causal").success, 2u);
  std::set<std::string> metrics;
  for (const auto& c : rep.tests) {
    EXPECT_EQ(c.approach, "full_causal");
    metrics.insert(c.metric);
    if (c.result) {
      EXPECT_GE(c.result->p_value, 0.0);
      EXPECT_LE(c.result->p_value, 1.0);
    }
  }
  EXPECT_EQ(metrics, (std::set<std::string>{"success", "task_time", "distance", "battery", "proximity", "collisions"}));
}

TEST(Metrics, ReportFilesHaveClosedPercentages) {
  std::vector<RunResult> runs;
  runs.push_back(run_of("baseline", {outcome(TaskStatus::Success, 10, 9, 2), outcome(TaskStatus::FailureBattery, 3, 10, 1)}));
  runs.push_back(run_of("refusal_only", {outcome(TaskStatus::Success, 10, 10, 2), outcome(TaskStatus::Refused, 0, 10, 0, 0)}));
  runs[0].proximity = runs[1].proximity = {0.5, 1.0, 2.0};
  const auto dir = scratch_dir("report");
  write_metrics_report(compute_metrics(runs), dir);
  for (const char* f : {"efficiency.csv", "safety.csv", "tests.csv", "runtime.csv", "runtime_timing.csv", "report.md"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto eff = csv::read((dir / "efficiency.csv").string());
  for (const auto& row : eff.rows) {
    double sum = 0;
    for (const char* c : {"success_pct", "failure_D_pct", "failure_L_pct", "refused_pct"})
      sum += csv::parse_double(row[eff.column(c)]);
    EXPECT_NEAR(sum, 100.0, 0.1);
  }
  fs::remove_all(dir);
}

TEST(Approach, NamedCombinations) {
  EXPECT_EQ(approach_names(), (std::vector<std::string>{"baseline", "causal_routing", "refusal_only", "full_causal"}));
  const auto b = make_approach("baseline"), c = make_approach("causal_routing"), r = make_approach("refusal_only"),
             f = make_approach("full_causal");
  EXPECT_TRUE(b.routing == Routing::Shortest && !b.refusal);
  EXPECT_TRUE(c.routing == Routing::Causal && !c.refusal);
  EXPECT_TRUE(r.routing == Routing::Shortest && r.refusal);
  EXPECT_TRUE(f.routing == Routing::Causal && f.refusal);
  EXPECT_FALSE(b.uses_model());
  EXPECT_THROW(make_approach("greedy"), Error);
}

TEST(Experiment, RepeatableAndCrowdStreamsShared) {
  const auto& d = desk();
  ExperimentOptions opt;
  opt.slots = {slot_of(d.sc, "S2"), slot_of(d.sc, "S6")};
  opt.tasks_per_slot = 6;
  std::vector<ApproachConfig> approaches;
  for (const auto& n : approach_names()) approaches.push_back(make_approach(n, d.p.weights, d.p.policy));
  const auto runs = run_ablation(d.sc, approaches, &d.model, d.p.sim, {3}, opt, 2);
  ASSERT_EQ(runs.size(), 4u);
  // Runs last different times, so each consumes a different amount of the
  // same streams; the consumed parts must agree.
  const auto ref = split_goals(runs[0]);
  ASSERT_EQ(ref.size(), 2u);
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const auto other = split_goals(runs[i]);
    ASSERT_EQ(other.size(), ref.size());
    for (std::size_t s = 0; s < ref.size(); ++s) {
      ASSERT_EQ(other[s].size(), ref[s].size());
      for (std::size_t w = 0; w < ref[s].size(); ++w) {
        const auto n = std::min(ref[s][w].size(), other[s][w].size());
        EXPECT_GT(n, 0u);
        EXPECT_TRUE(std::equal(ref[s][w].begin(), ref[s][w].begin() + static_cast<std::ptrdiff_t>(n), other[s][w].begin()))
            << runs[i].approach << " slot " << s << " worker " << w;
      }
    }
  }

  const auto again = run_experiment(d.sc, approaches[3], &d.model, d.p.sim, 3, opt);
  ASSERT_EQ(again.outcomes.size(), runs[3].outcomes.size());
  for (std::size_t i = 0; i < again.outcomes.size(); ++i) {
    const auto &x = again.outcomes[i], &y = runs[3].outcomes[i];
    EXPECT_EQ(x.status, y.status);
    EXPECT_EQ(x.path, y.path);
    EXPECT_EQ(x.distance, y.distance);
    EXPECT_EQ(x.battery_spent, y.battery_spent);
    EXPECT_EQ(x.collisions, y.collisions);
  }
  EXPECT_EQ(again.proximity, runs[3].proximity);
  EXPECT_EQ(again.worker_goals, runs[3].worker_goals);
}

TEST(Experiment, ModelRequiredForCausalApproaches) {
  const auto& d = desk();
  EXPECT_THROW(run_experiment(d.sc, make_approach("full_causal"), nullptr, d.p.sim, 1, {}), Error);
}

TEST(Experiment, RefusalSafetyAndAccountingClosure) {
  const auto& d = desk();
  ExperimentOptions opt;
  opt.battery_carry_over = true;
  for (const auto& name : {"refusal_only", "full_causal"}) {
    const auto run = run_experiment(d.sc, make_approach(name, d.p.weights, d.p.policy), &d.model, d.p.sim, 2, opt);
    std::size_t refused = 0;
    for (const auto& t : run.outcomes) {
      if (t.status == TaskStatus::Refused) {
        ++refused;
        EXPECT_LT(t.battery_start - t.C_L, d.p.policy.b_min);
        continue;
      }
      EXPECT_GE(t.battery_start - t.C_L, d.p.policy.b_min) << name << " started task " << t.task;
      EXPECT_NE(t.status, TaskStatus::FailureBattery);
    }
    EXPECT_GT(refused, 0u) << name;
    const auto m = compute_approach_metrics({&run});
    EXPECT_NEAR(m.battery_effective + m.battery_wasted, run.consumption / 100.0, 1e-6);
  }
}

TEST(Config, BundledParameterFilesMatchProfiles) {
  for (const std::string name : {"desk", "full"}) {
    const auto file = std::string(CAUSALNAV_SOURCE_DIR) + "/params/" + name + ".json";
    EXPECT_EQ(parameters_to_json(load_parameters(file)), parameters_to_json(profile_parameters(name))) << name;
  }
}

TEST(Config, RoundTripAndMerge) {
  auto p = profile_parameters("full");
  p.weights = {0.1, 100, 50};
  p.experiment.seeds = {7, 9};
  p.sim.workers.dwell_max = 11;
  const auto j = parameters_to_json(p);
  EXPECT_EQ(parameters_to_json(parameters_from_json(j)), j);

  const auto partial = parameters_from_json(jsonutil::Json::parse(R"({"simulation": {"dt": 0.05}})"));
  EXPECT_EQ(partial.profile, "desk");
  EXPECT_DOUBLE_EQ(partial.sim.battery.dt, 0.05);
  EXPECT_DOUBLE_EQ(partial.sim.battery.motion_drain, profile_parameters("desk").sim.battery.motion_drain);
}

TEST(Config, RejectsUnknownKeysAndProfiles) {
  EXPECT_THROW(parameters_from_json(jsonutil::Json::parse(R"({"planer": {}})")), Error);
  EXPECT_THROW(parameters_from_json(jsonutil::Json::parse(R"({"planner": {"b_mn": 3}})")), Error);
  EXPECT_THROW(profile_parameters("huge"), Error);
}

TEST(Results, RoundTrip) {
  const auto& d = desk();
  ExperimentOptions opt;
  opt.slots = {slot_of(d.sc, "S3")};
  opt.tasks_per_slot = 5;
  const auto runs = run_ablation(d.sc, {make_approach("baseline"), make_approach("full_causal", d.p.weights, d.p.policy)},
                                 &d.model, d.p.sim, {1, 2}, opt, 1);
  const auto dir = scratch_dir("results");
  write_results(runs, d.sc, dir);
  const auto back = read_results(dir, d.sc);
  ASSERT_EQ(back.size(), runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    EXPECT_EQ(back[i].approach, runs[i].approach);
    EXPECT_EQ(back[i].seed, runs[i].seed);
    ASSERT_EQ(back[i].outcomes.size(), runs[i].outcomes.size());
    EXPECT_EQ(back[i].proximity.size(), runs[i].proximity.size());
    for (std::size_t k = 0; k < runs[i].outcomes.size(); ++k) {
      const auto &x = back[i].outcomes[k], &y = runs[i].outcomes[k];
      EXPECT_EQ(x.status, y.status);
      EXPECT_EQ(x.path, y.path);
      EXPECT_EQ(x.slot, y.slot);
      EXPECT_NEAR(x.distance, y.distance, 1e-7 * (1 + y.distance));
    }
  }
  // Writing what was read reproduces the deterministic files exactly.
  const auto dir2 = scratch_dir("results2");
  write_results(back, d.sc, dir2);
  EXPECT_EQ(slurp(dir / kOutcomesFile), slurp(dir2 / kOutcomesFile));
  EXPECT_EQ(slurp(dir / kProximityFile), slurp(dir2 / kProximityFile));
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST(Sensitivity, GridFilterAndRanking) {
  const auto& d = desk();
  auto p = d.p;
  p.sensitivity.tasks = 2;
  const auto rows = sensitivity_sweep(d.sc, d.model, p);
  ASSERT_EQ(rows.size(), 27u);
  int defaults = 0;
  std::vector<const SensitivityRow*> kept;
  for (const auto& r : rows) {
    defaults += r.is_default;
    EXPECT_EQ(r.metrics.tasks, 4u);
    EXPECT_EQ(r.kept, r.metrics.collisions == 0 && r.metrics.success == r.metrics.tasks);
    EXPECT_EQ(r.rank > 0, r.kept);
    if (r.kept) kept.push_back(&r);
  }
  EXPECT_EQ(defaults, 1);
  std::sort(kept.begin(), kept.end(), [](auto a, auto b) { return a->rank < b->rank; });
  for (std::size_t i = 1; i < kept.size(); ++i)
    EXPECT_LE(kept[i - 1]->metrics.time_total(), kept[i]->metrics.time_total());

  p.sensitivity.slots = {"S99"};
  EXPECT_THROW(sensitivity_sweep(d.sc, d.model, p), Error);
}

TEST(Scalability, LinearFitExactLine) {
  const auto f = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_DOUBLE_EQ(f.slope, 2);
  EXPECT_DOUBLE_EQ(f.intercept, 1);
  EXPECT_DOUBLE_EQ(f.r_squared, 1);
  EXPECT_THROW(linear_fit({1}, {1}), Error);
  EXPECT_THROW(linear_fit({2, 2}, {1, 3}), Error);
}

TEST(Scalability, SingleRepeatHasNoSpread) {
  const auto& d = desk();
  const auto t = scalability_bench(d.sc.graph, d.model, {5, 10, 20}, 1, 1);
  ASSERT_EQ(t.rows.size(), 3u);
  for (const auto& r : t.rows) {
    EXPECT_FALSE(r.std_seconds.has_value());
    EXPECT_GT(r.mean_seconds, 0);
  }
  ASSERT_TRUE(t.fit.has_value());
  const auto t2 = scalability_bench(d.sc.graph, d.model, {5, 10}, 3, 1);
  EXPECT_TRUE(t2.rows[0].std_seconds.has_value());
  EXPECT_THROW(scalability_bench(d.sc.graph, d.model, {10, 5}, 1, 1), Error);
  EXPECT_THROW(scalability_bench(d.sc.graph, d.model, {500}, 1, 1), Error);
}

TEST(Thinning, WindowsBecomeSegments) {
  ProcessedDataset ds;
  ds.names = {"X"};
  ds.columns.resize(1);
  for (int r = 0; r < 1000; ++r) {
    ds.columns[0].push_back(r);
    ds.segment.push_back(r < 500 ? 0 : 1);
  }
  EXPECT_EQ(thin_dataset(ds, 5000).rows(), 1000u);
  const auto t = thin_dataset(ds, 100, 20);
  ASSERT_EQ(t.rows(), 100u);
  std::set<int> segments(t.segment.begin(), t.segment.end());
  EXPECT_GE(segments.size(), 5u);
  for (std::size_t r = 1; r < t.rows(); ++r)
    if (t.has_previous(r)) {
      EXPECT_EQ(t.columns[0][r], t.columns[0][r - 1] + 1);
    }
  EXPECT_EQ(t.columns[0].front(), 0);
  EXPECT_EQ(t.columns[0].back(), 999);
  EXPECT_THROW(thin_dataset(ds, 10, 20), PipelineError);
}
