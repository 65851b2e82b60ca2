#include "stabletilt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stabletilt {

McEstimate make_estimate(std::span<const double> samples) {
  const auto n = samples.size();
  if (n < 2) throw std::invalid_argument("make_estimate: need at least 2 samples");
  // Two-pass mean/variance; the pass order is fixed so reductions are
  // reproducible regardless of how samples were produced.
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0;
  for (double v : samples) m2 += (v - mean) * (v - mean);
  const double var = m2 / static_cast<double>(n - 1);
  McEstimate e;
  e.mean = mean;
  e.std_err = std::sqrt(var / static_cast<double>(n));
  e.n = static_cast<long long>(n);
  return e;
}

double combined_std_err(const McEstimate& a, const McEstimate& b) {
  return std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
}

double kolmogorov_q(double t) {
  if (t <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace detail {

double ks_p_from_stat(double d, double n_eff) {
  const double s = std::sqrt(n_eff);
  return kolmogorov_q(d * (s + 0.12 + 0.11 / s));
}

std::vector<double> ranks(std::span<const double> v) {
  const auto n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank for ties
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = mid;
    i = j + 1;
  }
  return r;
}

}  // namespace detail

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto n = x.size(), m = y.size();
  if (n == 0 || m == 0) throw std::invalid_argument("ks_two_sample: empty sample");
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    const double v = std::min(x[i], y[j]);
    while (i < n && x[i] <= v) ++i;
    while (j < m && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  KsResult r;
  r.statistic = d;
  const double n_eff = static_cast<double>(n) * m / static_cast<double>(n + m);
  r.p_value = detail::ks_p_from_stat(d, n_eff);
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

RankCorrelation spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("spearman: need equal-length samples, n >= 3");
  const auto rx = detail::ranks(x);
  const auto ry = detail::ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  RankCorrelation r;
  r.rho = sxy / std::sqrt(sxx * syy);
  const double z = r.rho * std::sqrt(n - 1.0);
  r.p_value = 2.0 * normal_cdf(-std::abs(z));
  return r;
}

}  // namespace stabletilt
