#pragma once

#include <atomic>
#include <chrono>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "causalnav/harness/approach.hpp"
#include "causalnav/sim/execute.hpp"
#include "causalnav/sim/tasks.hpp"

namespace causalnav {

enum class TaskStatus { Success, FailureDeadline, FailureBattery, Refused };

inline const char* to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::Success: return "success";
    case TaskStatus::FailureDeadline: return "failure_D";
    case TaskStatus::FailureBattery: return "failure_L";
    case TaskStatus::Refused: return "refused";
  }
  return "?";
}

struct TaskOutcome {
  int task = 0;
  int slot = 0;
  int start = 0;
  int goal = 0;
  TaskStatus status = TaskStatus::Success;
  std::vector<int> path;
  bool obstacle = false;
  double battery_start = 0.0;  // %
  double C_L = 0.0;            // % predicted for the plan
  double planned_distance = 0.0;
  double distance = 0.0;  // m actually travelled
  double active = 0.0;    // s
  double stalled = 0.0;   // s
  double battery_spent = 0.0;  // %
  int collisions = 0;
  double min_person_dist = std::numeric_limits<double>::infinity();
  std::size_t expansions = 0;
  double plan_seconds = 0.0;  // wall clock for estimation plus search

  double elapsed() const { return active + stalled; }
};

struct ExperimentOptions {
  bool battery_carry_over = false;  // keep the battery between slots instead of starting each one full
  std::vector<int> slots;           // empty runs every slot
  int tasks_per_slot = 0;           // > 0 overrides the schedule's counts
};

struct RunResult {
  std::string approach;
  std::uint64_t seed = 0;
  std::vector<TaskOutcome> outcomes;
  std::vector<double> proximity;  // sampled robot-nearest-person distances, m
  double consumption = 0.0;       // % drained over all executed tasks
  std::vector<std::vector<int>> worker_goals;  // goal history per slot and worker, flattened per slot
};

/// One approach on one seed. Tasks, obstacles and worker goal streams depend
/// only on the seed, so every approach faces the same crowd and task list.
inline RunResult run_experiment(const Scenario& sc, const ApproachConfig& approach, const CausalInferenceModel* model,
                                const SimParams& params, std::uint64_t seed, const ExperimentOptions& opt = {}) {
  approach.weights.validate();
  approach.policy.validate();
  if (approach.uses_model() && !model) throw Error(approach.name + " needs a fitted model");
  const ShortestPathTable paths(sc.graph);
  World world(sc, paths, params, seed);
  RunResult run;
  run.approach = approach.name;
  run.seed = seed;

  std::vector<int> slots = opt.slots;
  if (slots.empty())
    for (std::size_t s = 0; s < sc.schedule.slots.size(); ++s) slots.push_back(static_cast<int>(s));
  const HeuristicWeights shortest{1.0, 0.0, 0.0};

  for (int s : slots) {
    const auto& slot = sc.schedule.slots.at(static_cast<std::size_t>(s));
    world.begin_slot(s);
    if (!opt.battery_carry_over) world.set_battery(100.0);
    const int count = opt.tasks_per_slot > 0 ? opt.tasks_per_slot : slot.task_count;
    const auto tasks = task_list(sc, s, seed, params.obstacle_probability, count);
    for (const auto& task : tasks) {
      if (world.position() != sc.graph.waypoint(task.start).position) world.place_robot(task.start);
      TaskOutcome out;
      out.task = task.id;
      out.slot = s;
      out.start = task.start;
      out.goal = task.goal;
      out.battery_start = world.battery();

      const auto t0 = std::chrono::steady_clock::now();
      ArcEstimates est;
      if (approach.uses_model())
        est = estimate_arcs(sc.graph, *model, s, world.charging() ? 1 : 0, approach.policy.query_velocity);
      const auto plan = plan_path(sc.graph, task.start, task.goal, est,
                                  approach.routing == Routing::Causal ? approach.weights : shortest);
      Verdict verdict = Verdict::Proceed;
      if (approach.refusal) verdict = decide_task(plan, world.battery(), approach.policy);
      out.plan_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.path = plan.path;
      out.C_L = plan.C_L;
      out.planned_distance = plan.distance;
      out.expansions = plan.expansions;

      if (verdict == Verdict::Abort) {
        out.status = TaskStatus::Refused;
        world.set_battery(100.0);  // as if the robot had docked
        world.place_robot(task.goal);
        run.outcomes.push_back(std::move(out));
        continue;
      }

      const int arcs = static_cast<int>(plan.path.size()) - 1;
      out.obstacle = task.obstacle && arcs > 0;
      const auto ex = execute_route(world, plan.path, task.obstacle_arc(static_cast<std::size_t>(arcs)),
                                    params.task_deadline, approach.policy.b_min);
      run.consumption += ex.battery_spent;
      run.proximity.insert(run.proximity.end(), ex.proximity.begin(), ex.proximity.end());
      out.distance = ex.distance;
      out.active = ex.active;
      out.stalled = ex.stalled;
      out.battery_spent = ex.battery_spent;
      out.collisions = ex.collisions;
      out.min_person_dist = ex.min_person_dist;
      if (ex.completed) {
        out.status = TaskStatus::Success;
        if (world.battery() < approach.policy.b_min) world.set_battery(100.0);
      } else if (ex.battery_breach) {
        out.status = TaskStatus::FailureBattery;
        world.set_battery(100.0);
        world.place_robot(task.goal);
      } else {
        out.status = TaskStatus::FailureDeadline;
        world.place_robot(task.goal);
      }
      run.outcomes.push_back(std::move(out));
    }
    std::vector<int> goals;
    for (std::size_t w = 0; w < world.crowd().size(); ++w) {
      const auto& h = world.crowd().goal_history(w);
      goals.push_back(static_cast<int>(h.size()));
      goals.insert(goals.end(), h.begin(), h.end());
    }
    run.worker_goals.push_back(std::move(goals));
  }
  return run;
}

/// Every (approach, seed) pair, approach-major. Runs are independent and may
/// execute on `threads` workers (0 = hardware concurrency); the result order
/// never depends on scheduling.
inline std::vector<RunResult> run_ablation(const Scenario& sc, const std::vector<ApproachConfig>& approaches,
                                           const CausalInferenceModel* model, const SimParams& params,
                                           const std::vector<std::uint64_t>& seeds, const ExperimentOptions& opt = {},
                                           unsigned threads = 0) {
  std::vector<RunResult> out(approaches.size() * seeds.size());
  if (out.empty()) return out;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(out.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < out.size(); i = next++) {
      try {
        out[i] = run_experiment(sc, approaches[i / seeds.size()], model, params, seeds[i % seeds.size()], opt);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace causalnav
