#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "causalnav/harness/experiment.hpp"
#include "causalnav/harness/stats.hpp"
#include "causalnav/sim/proxemics.hpp"

namespace causalnav {

/// Per-approach totals over every seed. Times in s, distances in m, battery in
/// cycles (one cycle = 100 %).
struct ApproachMetrics {
  std::string approach;
  std::size_t runs = 0;
  std::size_t tasks = 0, success = 0, failure_D = 0, failure_L = 0, refused = 0;
  double distance_planned = 0, distance_extra = 0, distance_wasted = 0;
  double time_active = 0, time_stalled = 0, time_wasted = 0;
  double battery_effective = 0, battery_wasted = 0;
  double consumption = 0;  // cycles drained according to the runs themselves
  long long collisions = 0;
  std::array<std::size_t, 5> zones{};  // proximity samples per ProxemicZone
  std::vector<double> proximity;
  double min_person_dist = std::numeric_limits<double>::infinity();
  double mean_expansions = 0;
  double mean_plan_seconds = 0;

  // per executed task, for the rank and count tests
  std::vector<double> task_time, task_distance, task_battery, task_collisions;

  double failures() const { return static_cast<double>(failure_D + failure_L + refused); }
  double success_rate() const { return tasks ? static_cast<double>(success) / static_cast<double>(tasks) : 0.0; }
  double distance_total() const { return distance_planned + distance_extra + distance_wasted; }
  double time_total() const { return time_active + time_stalled + time_wasted; }
  double battery_total() const { return battery_effective + battery_wasted; }
};

/// Shares of a stacked bar in percent; all zero when the bar is empty.
template <std::size_t N>
std::array<double, N> percentages(const std::array<double, N>& parts) {
  double total = 0;
  for (double p : parts) total += p;
  std::array<double, N> out{};
  if (total > 0)
    for (std::size_t i = 0; i < N; ++i) out[i] = 100.0 * parts[i] / total;
  return out;
}

inline ApproachMetrics compute_approach_metrics(const std::vector<const RunResult*>& runs) {
  if (runs.empty()) throw Error("compute_metrics: no runs");
  ApproachMetrics m;
  m.approach = runs.front()->approach;
  double expansions = 0, plan_seconds = 0;
  for (const auto* r : runs) {
    if (r->approach != m.approach) throw Error("compute_metrics: runs mix approaches");
    ++m.runs;
    m.consumption += r->consumption / 100.0;
    for (const auto& t : r->outcomes) {
      ++m.tasks;
      expansions += static_cast<double>(t.expansions);
      plan_seconds += t.plan_seconds;
      switch (t.status) {
        case TaskStatus::Success:
          ++m.success;
          m.distance_planned += t.planned_distance;
          m.distance_extra += std::max(0.0, t.distance - t.planned_distance);
          m.time_active += t.active;
          m.time_stalled += t.stalled;
          m.battery_effective += t.battery_spent / 100.0;
          break;
        case TaskStatus::FailureDeadline:
        case TaskStatus::FailureBattery:
          ++(t.status == TaskStatus::FailureDeadline ? m.failure_D : m.failure_L);
          m.distance_wasted += t.distance;
          m.time_wasted += t.elapsed();
          m.battery_wasted += t.battery_spent / 100.0;
          break;
        case TaskStatus::Refused:
          ++m.refused;
          continue;
      }
      m.collisions += t.collisions;
      m.min_person_dist = std::min(m.min_person_dist, t.min_person_dist);
      m.task_time.push_back(t.elapsed());
      m.task_distance.push_back(t.distance);
      m.task_battery.push_back(t.battery_spent);
      m.task_collisions.push_back(t.collisions);
    }
    m.proximity.insert(m.proximity.end(), r->proximity.begin(), r->proximity.end());
  }
  for (double d : m.proximity) ++m.zones[static_cast<std::size_t>(classify_proxemics(d))];
  if (m.tasks) {
    m.mean_expansions = expansions / static_cast<double>(m.tasks);
    m.mean_plan_seconds = plan_seconds / static_cast<double>(m.tasks);
  }
  return m;
}

struct Comparison {
  std::string approach;  // compared against the reference approach
  std::string metric;
  std::optional<StatTestResult> result;
  std::string note;  // why the test is undefined, when it is
};

struct MetricsReport {
  std::vector<ApproachMetrics> approaches;
  std::string reference;
  std::vector<Comparison> tests;

  const ApproachMetrics& at(const std::string& name) const {
    for (const auto& a : approaches)
      if (a.approach == name) return a;
    throw Error("no metrics for approach '" + name + "'");
  }
};

inline double quantile(std::vector<double> x, double q) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (x[hi] - x[lo]) * (pos - static_cast<double>(lo));
}

/// Aggregates runs per approach (in first-seen order) and tests every other
/// approach against `reference`: chi-square on success/failure, Mann-Whitney
/// on per-task time, distance and battery and on proximity samples, negative
/// binomial on per-task collisions.
inline MetricsReport compute_metrics(const std::vector<RunResult>& runs, const std::string& reference = "baseline") {
  if (runs.empty()) throw Error("compute_metrics: no runs");
  MetricsReport rep;
  rep.reference = reference;
  std::vector<std::string> order;
  for (const auto& r : runs)
    if (std::find(order.begin(), order.end(), r.approach) == order.end()) order.push_back(r.approach);
  for (const auto& name : order) {
    std::vector<const RunResult*> mine;
    for (const auto& r : runs)
      if (r.approach == name) mine.push_back(&r);
    rep.approaches.push_back(compute_approach_metrics(mine));
  }
  if (std::find(order.begin(), order.end(), reference) == order.end()) return rep;
  const auto& ref = rep.at(reference);
  for (const auto& a : rep.approaches) {
    if (a.approach == reference) continue;
    auto add = [&](const std::string& metric, auto&& fn) {
      Comparison c{a.approach, metric, std::nullopt, ""};
      try {
        c.result = fn();
      } catch (const StatsError& e) {
        c.note = e.what();
      }
      rep.tests.push_back(std::move(c));
    };
    add("success", [&] {
      return chi_square_2x2(static_cast<double>(a.success), a.failures(), static_cast<double>(ref.success),
                            ref.failures());
    });
    add("task_time", [&] { return mann_whitney_u(a.task_time, ref.task_time); });
    add("distance", [&] { return mann_whitney_u(a.task_distance, ref.task_distance); });
    add("battery", [&] { return mann_whitney_u(a.task_battery, ref.task_battery); });
    add("proximity", [&] { return mann_whitney_u(a.proximity, ref.proximity); });
    add("collisions", [&] { return negative_binomial_test(a.task_collisions, ref.task_collisions); });
  }
  return rep;
}

}  // namespace causalnav
