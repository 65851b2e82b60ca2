#pragma once

#include <cstdint>
#include <vector>

#include "stabletilt/kernels.hpp"
#include "stabletilt/pchip.hpp"
#include "stabletilt/stable_process.hpp"

namespace stabletilt {

/// Monte Carlo estimate of the gauge u(x) = E_x[exp(-A_inf)], A = sum F over
/// jumps, truncated at an adaptively doubled horizon. The truncation makes
/// u_hat an upper bound; tail_flag is the fraction of paths whose A-increment
/// over the last doubling still exceeded the tolerance.
struct GaugeEstimate {
  Point x;
  McEstimate u_hat;
  double horizon_used = 0.0;
  double tail_flag = 0.0;
};

struct GaugeRunConfig {
  int n_paths = 1000;
  double base_horizon = 4.0;
  int max_doublings = 6;
  double cutoff = 1e-2;
  double flat_tol = 1e-3;
  std::uint64_t master_seed = 1;
};

GaugeEstimate estimate_u(const StableParams& params, const KernelSpec& F, const Point& x,
                         const GaugeRunConfig& cfg);

/// Radial interpolant of the gauge for rotation-invariant kernel structure:
/// direct estimates on a radius grid, shape-preserving interpolation in
/// log(1+r), leave-one-out residual as the error budget, and a fitted
/// power-law approach of 1 beyond the grid.
class RadialGauge {
 public:
  static RadialGauge build(const StableParams& params, const KernelSpec& F,
                           const std::vector<double>& radii, const GaugeRunConfig& cfg);
  double operator()(double r) const;
  double operator()(const Point& x) const { return (*this)(x.norm()); }
  double residual() const { return residual_; }
  const std::vector<GaugeEstimate>& grid() const { return grid_; }

 private:
  Pchip interp_;
  std::vector<GaugeEstimate> grid_;
  double residual_ = 0.0;
  double r_max_ = 0.0;
  double tail_coeff_ = 0.0, tail_exponent_ = 0.0;  // 1 - u ~ coeff * r^{-q}
};

struct IdentityCheck {
  double lhs = 0.0, rhs = 0.0;
  double lhs_err = 0.0, rhs_err = 0.0;
  double budget = 0.0;  // |lhs - rhs| must stay below this
  bool pass = false;
};

/// Martingale identity u(x) = E_x[u(X_t) e^{-A_t}], with the right side
/// evaluated through the radial interpolant.
IdentityCheck u_martingale_check(const StableParams& params, const KernelSpec& F,
                                 const RadialGauge& u, const Point& x, double t,
                                 const GaugeRunConfig& cfg);

/// Integral identity u(x) = 1 - E_x[sum_s u(X_s) (1 - e^{-F(X_{s-},X_s)})].
IdentityCheck u_integral_identity_check(const StableParams& params, const KernelSpec& F,
                                        const RadialGauge& u, const Point& x,
                                        const GaugeRunConfig& cfg);

struct LimitCheckReport {
  std::vector<double> horizons;
  std::vector<double> fraction_near_one;  // u(X_T) > 1 - delta
  std::vector<double> median_abs_position;
  double delta = 0.05;
};

/// Along each path, evaluates the interpolated gauge at doubling horizons;
/// the fraction of paths with u(X_T) > 1 - delta must grow toward 1.
LimitCheckReport u_limit_check(const StableParams& params, const KernelSpec& F,
                               const RadialGauge& u, const Point& x, double delta,
                               const GaugeRunConfig& cfg);

struct AnnulusRatio {
  double scale = 0.0;  // R: annulus 2R < |x| < 4R
  double u_min = 0.0, u_max = 0.0;
  double ratio = 0.0;
  double direction_spread = 0.0;  // max relative spread at equal radius
};

struct HarnackReport {
  std::vector<AnnulusRatio> annuli;
  double max_ratio = 0.0, min_ratio = 0.0;
};

/// Gauge ratios over point grids in the annuli 2R < |x| < 4R, R in scales;
/// common random numbers across grid points (same master seed).
HarnackReport harnack_ratio_check(const StableParams& params, const KernelSpec& F,
                                  const std::vector<double>& scales, const GaugeRunConfig& cfg);

struct HittingCountReport {
  std::vector<double> horizons;
  std::vector<double> median_annuli_visited;  // dyadic annuli 2^n <= |x| < 2^{n+1}
  std::vector<double> median_abs_position;
};

/// Counts distinct dyadic annuli visited per path up to doubling horizons;
/// transience makes both series grow.
HittingCountReport infinite_hitting_check(const StableParams& params, const Point& x,
                                          const GaugeRunConfig& cfg);

}  // namespace stabletilt
