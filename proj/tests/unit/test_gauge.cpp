#include <cmath>

#include "doctest.h"
#include "stabletilt/gauge.hpp"
#include "stabletilt/parallel.hpp"
#include "stabletilt/potential.hpp"

using namespace stabletilt;

namespace {

GaugeRunConfig small_cfg() {
  GaugeRunConfig cfg;
  cfg.n_paths = 400;
  cfg.base_horizon = 4.0;
  cfg.max_doublings = 5;
  cfg.cutoff = 2e-2;
  cfg.master_seed = 21;
  return cfg;
}

}  // namespace

TEST_CASE("zero kernel: gauge is identically one and all checks are trivial") {
  auto p = StableParams::make(1, 0.5);
  auto cfg = small_cfg();
  auto g = estimate_u(p, zero_kernel(), Point::zero(1), cfg);
  CHECK(g.u_hat.mean == doctest::Approx(1.0));
  CHECK(g.u_hat.std_err == doctest::Approx(0.0));
  CHECK(g.tail_flag == 0.0);
  auto rg = RadialGauge::build(p, zero_kernel(), {0.0, 1.0, 4.0, 16.0}, cfg);
  CHECK(rg(2.7) == doctest::Approx(1.0));
  auto mc = u_martingale_check(p, zero_kernel(), rg, Point::zero(1), 1.0, cfg);
  CHECK(mc.lhs == doctest::Approx(1.0));
  CHECK(mc.rhs == doctest::Approx(1.0));
  CHECK(mc.pass);
  auto ic = u_integral_identity_check(p, zero_kernel(), rg, Point::zero(1), cfg);
  CHECK(ic.rhs == doctest::Approx(1.0));
  CHECK(ic.pass);
  auto lc = u_limit_check(p, zero_kernel(), rg, Point::zero(1), 0.05, cfg);
  CHECK(lc.fraction_near_one.front() == doctest::Approx(1.0));
}

TEST_CASE("gauge bounds, jensen lower bound, and monotonicity in the kernel") {
  auto p = StableParams::make(1, 0.5);
  auto cfg = small_cfg();
  auto F1 = fuchsian_capped_kernel(0.5, 1.5);
  auto F2 = fuchsian_capped_kernel(1.0, 1.5);  // pointwise larger
  auto g1 = estimate_u(p, F1, Point::zero(1), cfg);
  auto g2 = estimate_u(p, F2, Point::zero(1), cfg);
  CHECK(g1.u_hat.mean > 0.0);
  CHECK(g1.u_hat.mean <= 1.0 + 3.0 * g1.u_hat.std_err);
  // Common random numbers make the comparison pathwise exact.
  CHECK(g2.u_hat.mean <= g1.u_hat.mean);
  // Jensen with the exact mean E A_inf = G h0.
  QuadratureSpec q;
  auto h0 = RadialField::build(p, F2, q, PairTransform::Identity);
  auto gh = green_potential_radial(p, [&](double r) { return h0(r); }, h0.tail_exponent(),
                                   Point::zero(1), q);
  CHECK(!gh.divergent);
  CHECK(g2.u_hat.mean >= std::exp(-gh.value) - 3.0 * g2.u_hat.std_err);
}

TEST_CASE("radial symmetry of the gauge for radial kernel structure") {
  auto p = StableParams::make(3, 1.0);
  auto cfg = small_cfg();
  cfg.n_paths = 500;
  auto F = fuchsian_capped_kernel(1.0, 2.5);
  Point plus = Point::unit(3, 0), minus = Point::unit(3, 1);
  plus *= 2.0;
  minus *= -2.0;
  auto gp = estimate_u(p, F, plus, cfg);
  auto gm = estimate_u(p, F, minus, cfg);
  CHECK(std::abs(gp.u_hat.mean - gm.u_hat.mean) <=
        3.0 * std::sqrt(gp.u_hat.std_err * gp.u_hat.std_err +
                        gm.u_hat.std_err * gm.u_hat.std_err));
}

TEST_CASE("martingale and integral identities within budget (d=1)") {
  auto p = StableParams::make(1, 0.5);
  auto cfg = small_cfg();
  cfg.n_paths = 800;
  auto F = fuchsian_capped_kernel(1.0, 1.5);
  auto rg = RadialGauge::build(p, F, {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}, cfg);
  auto mc = u_martingale_check(p, F, rg, Point::zero(1), 1.0, cfg);
  CHECK(mc.pass);
  auto ic = u_integral_identity_check(p, F, rg, Point::zero(1), cfg);
  CHECK(ic.pass);
  // Upper-bound sanity: since u <= 1 the integral-identity sum is at most
  // E A_tilde <= E A = G h0.
  QuadratureSpec q;
  auto h0 = RadialField::build(p, F, q, PairTransform::Identity);
  auto gh = green_potential_radial(p, [&](double r) { return h0(r); }, h0.tail_exponent(),
                                   Point::zero(1), q);
  CHECK(1.0 - ic.rhs <= gh.value + 3.0 * ic.rhs_err);
  // Lower-bound consequence: min grid u = c > 0 bounds E A_tilde by 1/c - 1.
  double cmin = 1.0;
  for (const auto& ge : rg.grid()) cmin = std::min(cmin, ge.u_hat.mean);
  CHECK(cmin > 0.0);
  CHECK(1.0 - ic.rhs <= 1.0 / cmin - 1.0 + 3.0 * ic.rhs_err);
}

TEST_CASE("u(X_t) drifts to one when the jump sum is a.s. finite") {
  auto p = StableParams::make(1, 0.5);
  auto cfg = small_cfg();
  auto F = fuchsian_capped_kernel(1.0, 1.5);
  auto rg = RadialGauge::build(p, F, {0.0, 1.0, 4.0, 16.0, 64.0}, cfg);
  auto lc = u_limit_check(p, F, rg, Point::zero(1), 0.05, cfg);
  REQUIRE(lc.fraction_near_one.size() >= 3);
  CHECK(lc.fraction_near_one.back() > 0.9);
  CHECK(lc.fraction_near_one.back() >= lc.fraction_near_one.front());
  // transience consistency: median |X_T| grows
  CHECK(lc.median_abs_position.back() > lc.median_abs_position.front());
}

TEST_CASE("harnack ratios stay within a single constant across scales (d=1)") {
  auto p = StableParams::make(1, 0.5);
  auto cfg = small_cfg();
  cfg.n_paths = 600;
  auto F = fuchsian_capped_kernel(1.0, 1.5);
  auto rep = harnack_ratio_check(p, F, {1.0, 2.0, 4.0}, cfg);
  REQUIRE(rep.annuli.size() == 3);
  for (const auto& a : rep.annuli) {
    CHECK(a.ratio >= 1.0);
    CHECK(a.ratio < 2.0);
  }
  CHECK(rep.max_ratio < 2.0 * rep.min_ratio);
}

TEST_CASE("infinitely many dyadic annuli are visited as the horizon grows") {
  auto p = StableParams::make(1, 0.5);
  auto cfg = small_cfg();
  cfg.n_paths = 600;
  cfg.max_doublings = 4;
  auto rep = infinite_hitting_check(p, Point::zero(1), cfg);
  REQUIRE(rep.horizons.size() == 5);
  CHECK(rep.median_annuli_visited.back() > rep.median_annuli_visited.front());
  CHECK(rep.median_abs_position.back() > rep.median_abs_position.front());
  // horizon -> 0 end: at the base horizon only a few annuli are seen
  CHECK(rep.median_annuli_visited.front() <= rep.median_annuli_visited[1]);
}

TEST_CASE("estimate_u rejects signed kernels") {
  auto p = StableParams::make(1, 0.5);
  KernelSpec k = zero_kernel();
  k.lower_bound = -0.5;
  CHECK_THROWS_AS(estimate_u(p, k, Point::zero(1), small_cfg()), std::invalid_argument);
}
