#include <cmath>
#include <vector>

#include "doctest.h"
#include "stabletilt/rng.hpp"
#include "stabletilt/stats.hpp"

using namespace stabletilt;

TEST_CASE("streams are deterministic and counter-derived") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  std::vector<double> va, vb, vc;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a.uniform01());
    vb.push_back(b.uniform01());
    vc.push_back(c.uniform01());
  }
  CHECK(va == vb);
  CHECK(va != vc);
}

TEST_CASE("uniform01 lies strictly inside (0,1)") {
  RngStream g(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = g.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("normal moments") {
  RngStream g(3, 1);
  double s = 0, s2 = 0, s4 = 0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double z = g.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s / n) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("exponential mean and ks") {
  RngStream g(5, 2);
  std::vector<double> v(50000);
  for (auto& x : v) x = g.exponential();
  auto ks = ks_one_sample(v, [](double x) { return 1.0 - std::exp(-x); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("two-sample ks accepts same law, rejects different") {
  RngStream g(9, 0);
  std::vector<double> a(4000), b(4000), c(4000);
  for (auto& x : a) x = g.normal();
  for (auto& x : b) x = g.normal();
  for (auto& x : c) x = g.normal() + 0.25;
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("kolmogorov survival reference values") {
  CHECK(kolmogorov_q(0.0) == doctest::Approx(1.0));
  // Q(1.36) ~ 0.049 (classical 5% point), Q(1.63) ~ 0.010.
  CHECK(kolmogorov_q(1.36) == doctest::Approx(0.049).epsilon(0.05));
  CHECK(kolmogorov_q(1.63) == doctest::Approx(0.010).epsilon(0.08));
}

TEST_CASE("mc estimate and pooled errors") {
  std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  auto e = make_estimate(v);
  CHECK(e.mean == doctest::Approx(2.5));
  CHECK(e.std_err == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(e.ci95() == doctest::Approx(1.96 * e.std_err));
  CHECK(combined_std_err(e, e) == doctest::Approx(std::sqrt(2.0) * e.std_err));
  std::vector<double> single = {1.0};
  CHECK_THROWS_AS(make_estimate(single), std::invalid_argument);
}

TEST_CASE("spearman detects monotone association") {
  RngStream g(11, 0);
  std::vector<double> x(500), inc(500), noise(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = g.normal();
    inc[i] = -x[i] + 0.2 * g.normal();
    noise[i] = g.normal();
  }
  auto neg = spearman(x, inc);
  CHECK(neg.rho < -0.8);
  CHECK(neg.p_value < 0.01);
  auto none = spearman(x, noise);
  CHECK(std::abs(none.rho) < 0.15);
}
