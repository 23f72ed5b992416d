#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "causalnav/core/error.hpp"

namespace causalnav {

enum class TestKind { ChiSquare, MannWhitneyU, NegativeBinomial };

inline const char* to_string(TestKind k) {
  switch (k) {
    case TestKind::ChiSquare: return "chi_square";
    case TestKind::MannWhitneyU: return "mann_whitney_u";
    case TestKind::NegativeBinomial: return "negative_binomial";
  }
  return "?";
}

struct StatTestResult {
  TestKind kind = TestKind::ChiSquare;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_a = 0, n_b = 0;
  bool exact = false;  // Mann-Whitney by enumeration
};

namespace detail {

inline double chi2_upper(double x, double dof) {
  if (!(x > 0)) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), x));
}

inline double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace detail

/// 2x2 chi-square with Yates' continuity correction. Rows are groups,
/// columns (success, failure).
inline StatTestResult chi_square_2x2(double a_success, double a_failure, double b_success, double b_failure) {
  const double cells[2][2] = {{a_success, a_failure}, {b_success, b_failure}};
  for (const auto& row : cells)
    for (double c : row)
      if (c < 0) throw StatsError("chi-square: negative count");
  const double r[2] = {a_success + a_failure, b_success + b_failure};
  const double c[2] = {a_success + b_success, a_failure + b_failure};
  const double n = r[0] + r[1];
  if (r[0] == 0 || r[1] == 0) throw StatsError("chi-square: a group is empty");
  StatTestResult res;
  res.kind = TestKind::ChiSquare;
  res.n_a = static_cast<std::size_t>(r[0]);
  res.n_b = static_cast<std::size_t>(r[1]);
  if (c[0] == 0 || c[1] == 0) return res;  // one outcome only: no evidence of a difference
  double stat = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double e = r[i] * c[j] / n;
      const double d = std::max(0.0, std::abs(cells[i][j] - e) - 0.5);
      stat += d * d / e;
    }
  res.statistic = stat;
  res.p_value = detail::clamp_p(detail::chi2_upper(stat, 1.0));
  return res;
}

namespace detail {

// Midranks of the pooled sample; returns the tie term sum(t^3 - t).
inline double midranks(const std::vector<double>& pooled, std::vector<double>& ranks) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  ranks.assign(pooled.size(), 0.0);
  double ties = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    const double t = static_cast<double>(j - i + 1);
    ties += t * t * t - t;
    i = j + 1;
  }
  return ties;
}

}  // namespace detail

/// Two-sided Mann-Whitney U for group a against group b. U counts pairs with
/// a > b (ties count one half). Exact enumeration when both groups have at
/// most 8 members, otherwise the tie-corrected normal approximation with a
/// continuity correction.
inline StatTestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw StatsError("Mann-Whitney: empty group");
  for (double x : a)
    if (std::isnan(x)) throw StatsError("Mann-Whitney: NaN sample");
  for (double x : b)
    if (std::isnan(x)) throw StatsError("Mann-Whitney: NaN sample");
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<double> ranks;
  const double ties = detail::midranks(pooled, ranks);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
  const double u = rank_sum - na * (na + 1) / 2;
  const double mean = na * nb / 2;

  StatTestResult res;
  res.kind = TestKind::MannWhitneyU;
  res.statistic = u;
  res.n_a = a.size();
  res.n_b = b.size();

  if (a.size() <= 8 && b.size() <= 8) {
    // every way of choosing which pooled ranks belong to group a
    const std::size_t n = pooled.size(), k = a.size();
    std::vector<int> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), 1);
    std::sort(pick.begin(), pick.end());
    const double observed = std::abs(u - mean) - 1e-9;
    double total = 0, extreme = 0;
    do {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (pick[i]) s += ranks[i];
      const double uu = s - na * (na + 1) / 2;
      ++total;
      if (std::abs(uu - mean) >= observed) ++extreme;
    } while (std::next_permutation(pick.begin(), pick.end()));
    res.p_value = detail::clamp_p(extreme / total);
    res.exact = true;
    return res;
  }

  const double n = na + nb;
  const double var = na * nb / 12.0 * ((n + 1) - ties / (n * (n - 1)));
  if (!(var > 0)) {
    res.p_value = 1.0;  // every value tied
    return res;
  }
  const double z = std::max(0.0, std::abs(u - mean) - 0.5) / std::sqrt(var);
  res.p_value = detail::clamp_p(2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(), z)));
  return res;
}

namespace detail {

inline double nb_loglik(const std::vector<double>& x, double mu, double size) {
  double ll = 0.0;
  const bool poisson = !std::isfinite(size);
  for (double k : x) {
    if (mu == 0.0) {
      if (k != 0.0) return -std::numeric_limits<double>::infinity();
      continue;
    }
    if (poisson)
      ll += k * std::log(mu) - mu - std::lgamma(k + 1);
    else
      ll += std::lgamma(k + size) - std::lgamma(size) - std::lgamma(k + 1) + size * std::log(size / (size + mu)) +
            k * std::log(mu / (size + mu));
  }
  return ll;
}

inline double mean_of(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size()); }

}  // namespace detail

/// Equal-means test for overdispersed counts. The negative-binomial size is
/// fixed by the method of moments on the pooled within-group variance
/// (Poisson when there is no overdispersion); the likelihood ratio of separate
/// against common means is referred to chi-square with one degree of freedom.
inline StatTestResult negative_binomial_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw StatsError("negative binomial: empty group");
  for (const auto* g : {&a, &b})
    for (double k : *g)
      if (!(k >= 0) || k != std::floor(k)) throw StatsError("negative binomial: counts must be non-negative integers");
  const double ma = detail::mean_of(a), mb = detail::mean_of(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double m = (ma * na + mb * nb) / (na + nb);
  if (m == 0.0) throw StatsError("negative binomial: every count is zero");
  double ss = 0.0;
  for (double k : a) ss += (k - ma) * (k - ma);
  for (double k : b) ss += (k - mb) * (k - mb);
  const double dof = na + nb - 2;
  const double var = dof > 0 ? ss / dof : 0.0;
  const double size = var > m ? m * m / (var - m) : std::numeric_limits<double>::infinity();

  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const double l1 = detail::nb_loglik(a, ma, size) + detail::nb_loglik(b, mb, size);
  const double l0 = detail::nb_loglik(pooled, m, size);
  StatTestResult res;
  res.kind = TestKind::NegativeBinomial;
  res.statistic = std::max(0.0, 2.0 * (l1 - l0));
  res.p_value = detail::clamp_p(detail::chi2_upper(res.statistic, 1.0));
  res.n_a = a.size();
  res.n_b = b.size();
  return res;
}

}  // namespace causalnav
