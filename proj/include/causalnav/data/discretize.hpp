#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "causalnav/core/error.hpp"
#include "causalnav/core/log.hpp"

namespace causalnav {

/// Quantile bins of one continuous variable. Bin i covers (cuts[i-1], cuts[i]];
/// the first bin is closed below at `low`, the last closed above at `high`.
/// Queries outside [low, high] clamp to the edge bins.
struct BinSpec {
  std::vector<double> cuts;  // strictly increasing interior edges
  double low = 0.0;
  double high = 0.0;
  std::vector<double> representatives;  // mean of training samples per bin
  std::vector<std::size_t> counts;

  std::size_t bins() const { return cuts.size() + 1; }
  double bin_low(std::size_t i) const { return i == 0 ? low : cuts[i - 1]; }
  double bin_high(std::size_t i) const { return i == cuts.size() ? high : cuts[i]; }

  int code(double x) const {
    // boundary values fall into the lower bin
    return static_cast<int>(std::lower_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
  }
};

struct Discretized {
  std::vector<int> codes;
  BinSpec spec;
};

namespace detail {

// Cuts for `n_bins` quantile bins of already sorted data.
inline std::vector<double> quantile_cuts(const std::vector<double>& sorted, std::size_t n_bins) {
  std::vector<double> cuts;
  const std::size_t n = sorted.size();
  for (std::size_t i = 1; i < n_bins; ++i) {
    const std::size_t pos = (i * n + n_bins - 1) / n_bins;  // ceil(i*n/n_bins)
    const double c = sorted[pos - 1];
    if (c >= sorted.back()) continue;
    if (!cuts.empty() && c <= cuts.back()) continue;
    cuts.push_back(c);
  }
  return cuts;
}

inline std::vector<double> checked_sorted(const std::vector<double>& x, const std::string& name) {
  if (x.empty()) throw PipelineError(name + ": cannot discretize an empty series");
  for (double v : x)
    if (!std::isfinite(v)) throw PipelineError(name + ": non-finite value");
  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

}  // namespace detail

/// Interior cuts at the i/n empirical quantiles (order statistic ceil(i*N/n)).
/// Repeated cuts collapse, so heavily tied data yields fewer bins.
inline Discretized quantile_discretize(const std::vector<double>& x, std::size_t n_bins,
                                       const std::string& name = "series") {
  if (n_bins < 1) throw PipelineError("n_bins must be >= 1");
  const auto sorted = detail::checked_sorted(x, name);

  Discretized out;
  out.spec.low = sorted.front();
  out.spec.high = sorted.back();
  out.spec.cuts = detail::quantile_cuts(sorted, n_bins);
  if (out.spec.bins() < n_bins)
    log().warn("{}: {} bins requested, only {} quantile bins are distinct", name, n_bins, out.spec.bins());

  const std::size_t k = out.spec.bins();
  std::vector<double> sums(k, 0.0);
  out.spec.counts.assign(k, 0);
  out.codes.reserve(x.size());
  for (double v : x) {
    const int c = out.spec.code(v);
    out.codes.push_back(c);
    sums[static_cast<std::size_t>(c)] += v;
    ++out.spec.counts[static_cast<std::size_t>(c)];
  }
  for (std::size_t i = 0; i < k; ++i) {
    const double mean = sums[i] / static_cast<double>(out.spec.counts[i]);
    // keep the mean inside its own bin despite rounding
    out.spec.representatives.push_back(std::clamp(mean, out.spec.bin_low(i), out.spec.bin_high(i)));
  }
  return out;
}

/// Within-bin variance W(k) for k = 1..max_bins: total squared deviation from
/// the bin means divided by the sample count.
inline std::vector<double> within_bin_variance_curve(const std::vector<double>& x, std::size_t max_bins) {
  const auto sorted = detail::checked_sorted(x, "series");
  std::vector<double> curve;
  for (std::size_t k = 1; k <= max_bins; ++k) {
    const auto cuts = detail::quantile_cuts(sorted, k);
    double total = 0.0;
    std::size_t begin = 0;
    for (std::size_t b = 0; b <= cuts.size(); ++b) {
      std::size_t end = b < cuts.size()
                            ? static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), cuts[b]) - sorted.begin())
                            : sorted.size();
      double mean = 0.0;
      for (std::size_t i = begin; i < end; ++i) mean += sorted[i];
      mean /= static_cast<double>(end - begin);
      for (std::size_t i = begin; i < end; ++i) total += (sorted[i] - mean) * (sorted[i] - mean);
      begin = end;
    }
    curve.push_back(total / static_cast<double>(sorted.size()));
  }
  return curve;
}

/// Knee of a curve given as y[k-1] for k = 1..K: the k farthest from the chord
/// joining the end points. Ties go to the smaller k.
inline std::size_t elbow_of(const std::vector<double>& y) {
  const std::size_t K = y.size();
  if (K <= 2) return K == 0 ? 1 : (K == 2 && y[1] < y[0] ? 2 : 1);
  const double dx = static_cast<double>(K - 1), dy = y[K - 1] - y[0];
  const double norm = std::hypot(dx, dy);
  if (norm == 0.0) return 1;
  std::size_t best = 1;
  double best_d = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    const double d = std::abs(dy * static_cast<double>(k - 1) - dx * (y[k - 1] - y[0])) / norm;
    if (d > best_d * (1 + 1e-12) + 1e-300) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

/// Number of quantile bins by the elbow of the within-bin variance curve.
inline std::size_t elbow_bins(const std::vector<double>& x, std::size_t max_bins) {
  if (max_bins < 1) throw PipelineError("max_bins must be >= 1");
  const auto curve = within_bin_variance_curve(x, max_bins);
  if (curve.front() == 0.0) return 1;
  return elbow_of(curve);
}

}  // namespace causalnav
