#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace stabletilt {

/// Monte Carlo estimate: sample mean, standard error of the mean, sample
/// count and a 95% confidence half-width (1.96 * std_err).
struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  long long n = 0;
  double ci95() const { return 1.96 * std_err; }
};

/// Builds an estimate from per-sample values; requires n >= 2.
McEstimate make_estimate(std::span<const double> samples);

/// Pooled standard error of a difference of two independent estimates.
double combined_std_err(const McEstimate& a, const McEstimate& b);

struct KsResult {
  double statistic = 0.0;  // sup |F1 - F2|
  double p_value = 1.0;    // asymptotic Kolmogorov tail
};

/// Two-sample Kolmogorov-Smirnov test.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample KS test against a cdf given as a callable double -> double.
template <class Cdf>
KsResult ks_one_sample(std::vector<double> samples, Cdf&& cdf);

/// Survival function of the Kolmogorov distribution, Q(t) = 2 sum (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_q(double t);

struct RankCorrelation {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided, normal approximation
};

/// Spearman rank correlation with a large-sample normal p-value.
RankCorrelation spearman(std::span<const double> x, std::span<const double> y);

/// Standard normal cdf.
double normal_cdf(double x);

namespace detail {
double ks_p_from_stat(double d, double n_eff);
std::vector<double> ranks(std::span<const double> v);
}  // namespace detail

template <class Cdf>
KsResult ks_one_sample(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const auto n = samples.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, f - lo, hi - f});
  }
  KsResult r;
  r.statistic = d;
  r.p_value = detail::ks_p_from_stat(d, static_cast<double>(n));
  return r;
}

}  // namespace stabletilt
