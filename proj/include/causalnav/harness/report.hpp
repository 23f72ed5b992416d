#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "causalnav/core/csv.hpp"
#include "causalnav/harness/metrics.hpp"
#include "causalnav/harness/scalability.hpp"
#include "causalnav/harness/sensitivity.hpp"

namespace causalnav {

namespace detail {

inline std::string fixed(double x, int digits) {
  if (std::isnan(x)) return "-";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline std::string p_text(double p) {
  if (p < 1e-4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", p);
    return buf;
  }
  return fixed(p, 4);
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

inline std::string md_row(const std::vector<std::string>& cells) {
  std::string s = "|";
  for (const auto& c : cells) s += " " + c + " |";
  return s + "\n";
}

inline std::string md_rule(std::size_t n) {
  std::string s = "|";
  for (std::size_t i = 0; i < n; ++i) s += "---|";
  return s + "\n";
}

}  // namespace detail

/// efficiency.csv, safety.csv, tests.csv, runtime.csv, runtime_timing.csv and
/// report.md in `dir`.
inline void write_metrics_report(const MetricsReport& rep, const std::filesystem::path& dir) {
  using csv::format;
  using detail::fixed;
  std::filesystem::create_directories(dir);

  std::ostringstream eff, saf, tst, rt, rtt, md;
  eff << "approach,tasks,success,failure_D,failure_L,refused,success_pct,failure_D_pct,failure_L_pct,refused_pct,"
         "distance_planned_km,distance_extra_km,distance_wasted_km,distance_planned_pct,distance_extra_pct,"
         "distance_wasted_pct,time_active_h,time_stalled_h,time_wasted_h,time_active_pct,time_stalled_pct,"
         "time_wasted_pct,battery_effective_cycles,battery_wasted_cycles,battery_effective_pct,battery_wasted_pct\n";
  saf << "approach,collisions,samples,intimate_pct,personal_pct,social_pct,public_pct,beyond_pct,median_m,q1_m,q3_m,"
         "min_m\n";
  tst << "approach,reference,metric,test,statistic,p_value,n_a,n_b,exact,note\n";
  rt << "approach,tasks,mean_expansions\n";
  rtt << "approach,tasks,mean_query_ms\n";

  md << "# Ablation results\n\n";
  md << "## Task outcomes\n\n";
  md << detail::md_row({"approach", "tasks", "success", "failure D", "failure L", "refused", "success %"});
  md << detail::md_rule(7);
  for (const auto& a : rep.approaches) {
    const auto outcome = percentages<4>({static_cast<double>(a.success), static_cast<double>(a.failure_D),
                                         static_cast<double>(a.failure_L), static_cast<double>(a.refused)});
    const auto dist = percentages<3>({a.distance_planned, a.distance_extra, a.distance_wasted});
    const auto time = percentages<3>({a.time_active, a.time_stalled, a.time_wasted});
    const auto bat = percentages<2>({a.battery_effective, a.battery_wasted});
    eff << csv::join({a.approach, std::to_string(a.tasks), std::to_string(a.success), std::to_string(a.failure_D),
                      std::to_string(a.failure_L), std::to_string(a.refused), format(outcome[0]), format(outcome[1]),
                      format(outcome[2]), format(outcome[3]), format(a.distance_planned / 1000),
                      format(a.distance_extra / 1000), format(a.distance_wasted / 1000), format(dist[0]),
                      format(dist[1]), format(dist[2]), format(a.time_active / 3600), format(a.time_stalled / 3600),
                      format(a.time_wasted / 3600), format(time[0]), format(time[1]), format(time[2]),
                      format(a.battery_effective), format(a.battery_wasted), format(bat[0]), format(bat[1])})
        << '\n';
    md << detail::md_row({a.approach, std::to_string(a.tasks), std::to_string(a.success), std::to_string(a.failure_D),
                          std::to_string(a.failure_L), std::to_string(a.refused), fixed(outcome[0], 1)});
  }

  md << "\n## Distance, time and battery\n\n";
  md << detail::md_row({"approach", "planned km", "extra km", "wasted km", "active h", "stalled h", "wasted h",
                        "effective cycles", "wasted cycles", "wasted battery %"});
  md << detail::md_rule(10);
  for (const auto& a : rep.approaches) {
    const auto bat = percentages<2>({a.battery_effective, a.battery_wasted});
    md << detail::md_row({a.approach, fixed(a.distance_planned / 1000, 3), fixed(a.distance_extra / 1000, 3),
                          fixed(a.distance_wasted / 1000, 3), fixed(a.time_active / 3600, 2),
                          fixed(a.time_stalled / 3600, 2), fixed(a.time_wasted / 3600, 2),
                          fixed(a.battery_effective, 2), fixed(a.battery_wasted, 2), fixed(bat[1], 1)});
  }

  md << "\n## Safety\n\n";
  md << detail::md_row({"approach", "collisions", "intimate %", "personal %", "social %", "public %", "beyond %",
                        "median m", "min m"});
  md << detail::md_rule(9);
  for (const auto& a : rep.approaches) {
    std::array<double, 5> z{};
    for (std::size_t i = 0; i < 5; ++i) z[i] = static_cast<double>(a.zones[i]);
    const auto zp = percentages<5>(z);
    const double med = quantile(a.proximity, 0.5), q1 = quantile(a.proximity, 0.25), q3 = quantile(a.proximity, 0.75);
    saf << csv::join({a.approach, std::to_string(a.collisions), std::to_string(a.proximity.size()), format(zp[0]),
                      format(zp[1]), format(zp[2]), format(zp[3]), format(zp[4]), format(med), format(q1), format(q3),
                      format(a.min_person_dist)})
        << '\n';
    md << detail::md_row({a.approach, std::to_string(a.collisions), fixed(zp[0], 1), fixed(zp[1], 1), fixed(zp[2], 1),
                          fixed(zp[3], 1), fixed(zp[4], 1), fixed(med, 2), fixed(a.min_person_dist, 2)});
  }

  md << "\n## Planning cost\n\n";
  md << detail::md_row({"approach", "mean query ms", "mean node expansions"});
  md << detail::md_rule(3);
  for (const auto& a : rep.approaches) {
    rt << a.approach << ',' << a.tasks << ',' << format(a.mean_expansions) << '\n';
    rtt << a.approach << ',' << a.tasks << ',' << format(1000 * a.mean_plan_seconds) << '\n';
    md << detail::md_row({a.approach, fixed(1000 * a.mean_plan_seconds, 3), fixed(a.mean_expansions, 2)});
  }

  if (!rep.tests.empty()) {
    md << "\n## Tests against " << rep.reference << "\n\n";
    md << detail::md_row({"approach", "metric", "test", "statistic", "p"});
    md << detail::md_rule(5);
  }
  for (const auto& c : rep.tests) {
    if (c.result) {
      const auto& r = *c.result;
      tst << csv::join({c.approach, rep.reference, c.metric, to_string(r.kind), format(r.statistic), format(r.p_value),
                        std::to_string(r.n_a), std::to_string(r.n_b), r.exact ? "1" : "0", ""})
          << '\n';
      md << detail::md_row({c.approach, c.metric, to_string(r.kind), fixed(r.statistic, 3), detail::p_text(r.p_value)});
    } else {
      tst << csv::join({c.approach, rep.reference, c.metric, "", "", "", "", "", "", "\"" + c.note + "\""}) << '\n';
      md << detail::md_row({c.approach, c.metric, "-", "-", "undefined: " + c.note});
    }
  }

  detail::write_text(dir / "efficiency.csv", eff.str());
  detail::write_text(dir / "safety.csv", saf.str());
  detail::write_text(dir / "tests.csv", tst.str());
  detail::write_text(dir / "runtime.csv", rt.str());
  detail::write_text(dir / "runtime_timing.csv", rtt.str());
  detail::write_text(dir / "report.md", md.str());
}

inline std::string weights_text(const HeuristicWeights& w) {
  return "(" + csv::format(w.lambda_delta) + ", " + csv::format(w.lambda_D) + ", " + csv::format(w.lambda_L) + ")";
}

/// sensitivity.csv (every configuration) and sensitivity.md (kept rows by rank).
inline void write_sensitivity(const std::vector<SensitivityRow>& rows, const std::filesystem::path& dir) {
  using csv::format;
  using detail::fixed;
  std::ostringstream c, md;
  c << "lambda_delta,lambda_D,lambda_L,success_pct,collisions,time_total_s,time_active_s,time_stalled_s,"
       "time_wasted_s,distance_total_m,distance_planned_m,distance_extra_m,distance_wasted_m,battery_total_pct,"
       "battery_effective_pct,battery_wasted_pct,proximity_median_m,proximity_q1_m,proximity_q3_m,proximity_min_m,"
       "kept,rank,default\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    c << csv::join({format(r.weights.lambda_delta), format(r.weights.lambda_D), format(r.weights.lambda_L),
                    format(r.success_percent()), std::to_string(m.collisions), format(m.time_total()),
                    format(m.time_active), format(m.time_stalled), format(m.time_wasted), format(m.distance_total()),
                    format(m.distance_planned), format(m.distance_extra), format(m.distance_wasted),
                    format(100 * m.battery_total()), format(100 * m.battery_effective), format(100 * m.battery_wasted),
                    format(quantile(m.proximity, 0.5)), format(quantile(m.proximity, 0.25)),
                    format(quantile(m.proximity, 0.75)), format(m.min_person_dist), r.kept ? "1" : "0",
                    std::to_string(r.rank), r.is_default ? "1" : "0"})
      << '\n';
  }
  md << "# Weight sensitivity\n\n";
  md << "Configurations with a collision or a failed task are excluded. `*` marks the default weights.\n\n";
  md << detail::md_row({"rank", "(λδ, λD, λL)", "succ. %", "collis.", "time s", "active", "stalled", "wasted",
                        "dist. m", "planned", "extra", "wasted", "battery %", "effective", "wasted", "median m", "Q1",
                        "Q3", "min"});
  md << detail::md_rule(19);
  std::vector<const SensitivityRow*> kept;
  for (const auto& r : rows)
    if (r.kept) kept.push_back(&r);
  std::sort(kept.begin(), kept.end(), [](auto* a, auto* b) { return a->rank < b->rank; });
  for (const auto* r : kept) {
    const auto& m = r->metrics;
    md << detail::md_row({std::to_string(r->rank), weights_text(r->weights) + (r->is_default ? " *" : ""),
                          fixed(r->success_percent(), 0), std::to_string(m.collisions), fixed(m.time_total(), 1),
                          fixed(m.time_active, 1), fixed(m.time_stalled, 1), fixed(m.time_wasted, 1),
                          fixed(m.distance_total(), 1), fixed(m.distance_planned, 1), fixed(m.distance_extra, 1),
                          fixed(m.distance_wasted, 1), fixed(100 * m.battery_total(), 2),
                          fixed(100 * m.battery_effective, 2), fixed(100 * m.battery_wasted, 2),
                          fixed(quantile(m.proximity, 0.5), 2), fixed(quantile(m.proximity, 0.25), 2),
                          fixed(quantile(m.proximity, 0.75), 2), fixed(m.min_person_dist, 2)});
  }
  md << "\n" << kept.size() << " of " << rows.size() << " configurations kept.\n";
  for (const auto& r : rows)
    if (r.is_default) md << "Default weights " << (r.kept ? "kept at rank " + std::to_string(r.rank) : "excluded") << ".\n";
  detail::write_text(dir / "sensitivity.csv", c.str());
  detail::write_text(dir / "sensitivity.md", md.str());
}

/// scalability_timing.csv and scalability.md.
inline void write_scalability(const ScalabilityTable& t, const std::filesystem::path& dir) {
  using csv::format;
  std::ostringstream c, md;
  c << "size,repeats,mean_ms,std_ms\n";
  md << "# Query scalability\n\n";
  md << detail::md_row({"waypoints", "repeats", "mean ms", "std ms"});
  md << detail::md_rule(4);
  for (const auto& r : t.rows) {
    c << r.size << ',' << r.repeats << ',' << format(1000 * r.mean_seconds) << ','
      << (r.std_seconds ? format(1000 * *r.std_seconds) : "") << '\n';
    md << detail::md_row({std::to_string(r.size), std::to_string(r.repeats), detail::fixed(1000 * r.mean_seconds, 3),
                          r.std_seconds ? detail::fixed(1000 * *r.std_seconds, 3) : "-"});
  }
  if (t.fit)
    md << "\nLinear fit: time = " << detail::fixed(1000 * t.fit->intercept, 4) << " ms + "
       << detail::fixed(1000 * t.fit->slope, 5) << " ms per waypoint, R² = " << detail::fixed(t.fit->r_squared, 4)
       << "\n";
  detail::write_text(dir / "scalability_timing.csv", c.str());
  detail::write_text(dir / "scalability.md", md.str());
}

}  // namespace causalnav
