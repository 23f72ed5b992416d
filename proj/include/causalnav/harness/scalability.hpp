#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <vector>

#include "causalnav/core/rng.hpp"
#include "causalnav/plan/estimates.hpp"

namespace causalnav {

struct ScalabilityRow {
  std::size_t size = 0;
  int repeats = 0;
  double mean_seconds = 0;
  std::optional<double> std_seconds;  // absent for a single repeat
};

struct LinearFit {
  double slope = 0, intercept = 0, r_squared = 0;
};

struct ScalabilityTable {
  std::vector<ScalabilityRow> rows;
  std::optional<LinearFit> fit;  // needs two or more sizes
};

/// Least squares y = intercept + slope * x.
inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("linear_fit: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw Error("linear_fit: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0 ? 1.0 : sxy * sxy / (sxx * syy);
  return f;
}

/// Times estimate_arcs on breadth-first subgraphs of `g` grown from `root`.
/// Each repeat draws a slot and a velocity inside the learned range of V.
inline ScalabilityTable scalability_bench(const WaypointGraph& g, const CausalInferenceModel& m,
                                          const std::vector<std::size_t>& sizes, int repeats, std::uint64_t seed,
                                          int root = 0) {
  if (repeats < 1) throw Error("scalability: repeats must be >= 1");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0 || sizes[i] > g.size()) throw Error("scalability: size out of range");
    if (i && sizes[i] <= sizes[i - 1]) throw Error("scalability: sizes must be ascending");
  }
  const auto& V = m.schema.at("V").bins;
  const auto slots = static_cast<std::size_t>(m.cardinality("S"));
  const double v_low = std::max(V.low, 1e-3 * V.high);
  Rng rng(derive_seed(seed, {0x5ca1e}));

  ScalabilityTable table;
  std::vector<double> xs, ys;
  for (std::size_t n : sizes) {
    const auto sub = g.breadth_first_subgraph(n, root);
    std::vector<double> t;
    for (int r = 0; r < repeats; ++r) {
      const int slot = static_cast<int>(uniform_index(rng, slots));
      const double v = uniform(rng, v_low, V.high);
      const auto t0 = std::chrono::steady_clock::now();
      const auto est = estimate_arcs(sub, m, slot, 0, v);
      t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      if (est.density.size() != n) throw Error("scalability: estimate size mismatch");
    }
    ScalabilityRow row;
    row.size = n;
    row.repeats = repeats;
    for (double x : t) row.mean_seconds += x;
    row.mean_seconds /= static_cast<double>(t.size());
    if (t.size() > 1) {
      double ss = 0;
      for (double x : t) ss += (x - row.mean_seconds) * (x - row.mean_seconds);
      row.std_seconds = std::sqrt(ss / static_cast<double>(t.size() - 1));
    }
    xs.push_back(static_cast<double>(n));
    ys.push_back(row.mean_seconds);
    table.rows.push_back(row);
  }
  if (xs.size() >= 2) table.fit = linear_fit(xs, ys);
  return table;
}

}  // namespace causalnav
