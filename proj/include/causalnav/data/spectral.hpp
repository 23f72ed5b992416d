#pragma once

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include <fftw3.h>

#include "causalnav/core/error.hpp"

namespace causalnav {

inline constexpr double kBandwidthEnergy = 0.95;

namespace detail {
// FFTW's planner is not re-entrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Frequency (Hz) below which `energy_fraction` of the mean-removed series'
/// spectral energy lies. Zero for a constant series.
inline double spectral_bandwidth(const std::vector<double>& x, double sample_rate,
                                 double energy_fraction = kBandwidthEnergy) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  const std::size_t bins = n / 2 + 1;
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) in[i] = x[i] - mean;
  fftw_execute(plan);

  std::vector<double> power(bins);
  double total = 0.0;
  for (std::size_t k = 1; k < bins; ++k) {
    power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    total += power[k];
  }
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);

  // relative floor: rounding noise on a constant series is not a bandwidth
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (total <= 1e-24 * static_cast<double>(n) * static_cast<double>(n) * std::max(scale * scale, 1e-300))
    return 0.0;
  double cum = 0.0;
  for (std::size_t k = 1; k < bins; ++k) {
    cum += power[k];
    if (cum >= energy_fraction * total) return static_cast<double>(k) * sample_rate / static_cast<double>(n);
  }
  return sample_rate / 2.0;
}

/// Throws unless timestamps are evenly spaced; returns the sample rate in Hz.
inline double uniform_rate(const std::vector<double>& t) {
  if (t.size() < 2) throw PipelineError("need at least two timestamps");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dt > 0)) throw PipelineError("timestamps must increase");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs((t[i] - t[i - 1]) - dt) > 1e-6 * dt + 1e-9)
      throw PipelineError("non-uniform timestamps at row " + std::to_string(i));
  return 1.0 / dt;
}

struct SubsamplePlan {
  double input_rate = 0.0;
  double bandwidth = 0.0;  // max over series, Hz
  std::vector<double> series_bandwidth;
  std::size_t factor = 1;
  double rate = 0.0;  // input_rate / factor
};

/// Chooses an integer decimation factor for `candidate_rate`. Rates below
/// twice the largest series bandwidth are rejected.
inline SubsamplePlan plan_subsample(const std::vector<std::vector<double>>& series, double input_rate,
                                    double candidate_rate) {
  if (!(input_rate > 0)) throw PipelineError("input rate must be > 0");
  if (!(candidate_rate > 0)) throw PipelineError("candidate rate must be > 0");
  if (candidate_rate > input_rate * (1 + 1e-12))
    throw PipelineError("candidate rate exceeds the input rate " + std::to_string(input_rate) + " Hz");
  SubsamplePlan plan;
  plan.input_rate = input_rate;
  for (const auto& s : series) {
    plan.series_bandwidth.push_back(spectral_bandwidth(s, input_rate));
    plan.bandwidth = std::max(plan.bandwidth, plan.series_bandwidth.back());
  }
  const double bound = 2.0 * plan.bandwidth;
  if (candidate_rate < bound)
    throw PipelineError("rate " + std::to_string(candidate_rate) + " Hz is below the Nyquist bound " +
                        std::to_string(bound) + " Hz");
  auto k = static_cast<std::size_t>(std::max(1.0, std::round(input_rate / candidate_rate)));
  while (k > 1 && input_rate / static_cast<double>(k) < bound) --k;
  plan.factor = k;
  plan.rate = input_rate / static_cast<double>(k);
  return plan;
}

template <class T>
std::vector<T> decimate(const std::vector<T>& x, std::size_t factor) {
  if (factor == 0) throw PipelineError("decimation factor must be >= 1");
  std::vector<T> out;
  out.reserve(x.size() / factor + 1);
  for (std::size_t i = 0; i < x.size(); i += factor) out.push_back(x[i]);
  return out;
}

/// Subsamples every series by the planned factor.
inline std::vector<std::vector<double>> nyquist_subsample(const std::vector<std::vector<double>>& series,
                                                          double input_rate, double candidate_rate,
                                                          SubsamplePlan* plan_out = nullptr) {
  const auto plan = plan_subsample(series, input_rate, candidate_rate);
  std::vector<std::vector<double>> out;
  for (const auto& s : series) out.push_back(decimate(s, plan.factor));
  if (plan_out) *plan_out = plan;
  return out;
}

}  // namespace causalnav
