#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "stabletilt/common.hpp"
#include "stabletilt/kernels.hpp"
#include "stabletilt/params.hpp"
#include "stabletilt/quadrature.hpp"
#include "stabletilt/stable_process.hpp"

namespace stabletilt {

/// Free-space Green function c(d,alpha) |x-y|^{alpha-d}; +inf at x = y.
double green(const StableParams& params, const Point& x, const Point& y);
double green_radial(const StableParams& params, double distance);

struct PotentialResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  bool divergent = false;  // +inf verdict: the tail fails to decay
};

/// Green potential int G(x,y) h(y) dy for a rotation-invariant density given
/// as r -> h(r). tail_exponent (h ~ r^{-q} at infinity, 0 = unknown) feeds the
/// divergence verdict: q <= alpha means the potential is infinite.
PotentialResult green_potential_radial(const StableParams& params,
                                       const std::function<double(double)>& h_radial,
                                       double tail_exponent, const Point& x,
                                       const QuadratureSpec& quad);

/// Green potential for a general nonnegative field, by radial-angular
/// quadrature around x with the |y-x|^{alpha-d} singularity declared.
PotentialResult green_potential(const StableParams& params,
                                const std::function<double(const Point&)>& h, const Point& x,
                                const QuadratureSpec& quad);

/// Green function of the process killed outside the unit ball, in the
/// classical hypergeometric-integral form
///   G_B(x,y) = kappa(d,alpha) |x-y|^{alpha-d} int_0^{w} s^{alpha/2-1} (1+s)^{-d/2} ds,
///   w = (1-|x|^2)(1-|y|^2)/|x-y|^2,
/// with kappa pinned by G_B -> G as w -> infinity. The incomplete integral is
/// tabulated once per (d, alpha).
class UnitBallGreen {
 public:
  explicit UnitBallGreen(const StableParams& params);
  double operator()(const Point& x, const Point& y) const;
  double kappa() const { return kappa_; }
  double incomplete_factor(double w) const;  // int_0^w s^{alpha/2-1}(1+s)^{-d/2} ds
  double complete_factor() const { return complete_; }
  const StableParams& params() const { return params_; }

 private:
  StableParams params_;
  double kappa_ = 0.0;
  double complete_ = 0.0;  // Beta(alpha/2, (d-alpha)/2)
  Pchip table_;            // on log w
  double w_lo_ = 0.0, w_hi_ = 0.0;
};

/// G_{B(c,r)}(x,y) via the scaling rule r^{alpha-d} G_B((x-c)/r, (y-c)/r).
double ball_green(const UnitBallGreen& gb, const Ball& ball, const Point& x, const Point& y);

/// int_S G_{B}(x,y) dy over a sub-ball S of the unit ball (occupation mass).
double ball_green_mass(const UnitBallGreen& gb, const Point& x, const Ball& sub,
                       const QuadratureSpec& quad);

/// Normalized Poisson kernel of B(0,r):
///   P_r(x,z) = poisson_constant * ((r^2-|x|^2)/(|z|^2-r^2))^{alpha/2} |x-z|^{-d},
/// with the constant fixed so the kernel integrates to 1 over |z| > r.
double poisson_constant(const StableParams& params);
double poisson_kernel(const StableParams& params, double r, const Point& x, const Point& z);

/// The constant printed in the source material; retained for the discrepancy
/// report, not used by the kernel.
double poisson_constant_printed(const StableParams& params);

/// Quadrature of the Poisson kernel over {lo < |z| < hi} (hi may be kInf).
double poisson_mass(const StableParams& params, double r, const Point& x, double lo, double hi,
                    const QuadratureSpec& quad);

/// Quadrature of int_{|z|>r} P_r(0,z) G(z, w) dz (mean-value identity check).
double poisson_green_average(const StableParams& params, double r, const Point& w,
                             const QuadratureSpec& quad);

/// Pair integral over the unit ball,
///   int_B int_B G_B(x,y) G_B(z,w) / G_B(x,w) * k(y,z) dz dy,
/// where k(y,z) ~ |y-z|^{diag_exponent} near the diagonal (diag_exponent > -d).
/// refine_level scales all node counts by 2^level.
double ball_pair_integral(const UnitBallGreen& gb, const Point& x, const Point& w,
                          const std::function<double(const Point&, const Point&)>& k,
                          double diag_exponent, int refine_level = 0);

/// The 3G integral with kernel |y-z|^{beta-alpha-d}; requires beta > alpha.
double three_g_integral(const UnitBallGreen& gb, const Point& x, const Point& w, double beta,
                        int refine_level = 0);

struct C1GridEntry {
  Point x, w;
  double value = 0.0;
};

/// Grid maximum of the 3G integral over (x,w) configurations covering
/// near-coincident, mid-range and near-boundary pairs; a lower bound of the
/// true supremum C_1(d, alpha, beta).
double c1_constant(const UnitBallGreen& gb, double beta, int refine_level = 0,
                   std::vector<C1GridEntry>* table = nullptr);

/// Radius below which the conditioned jump expectation of any F in I(C,beta)
/// stays under eps: (eps / (C * C1))^{1/beta}.
double r0_of(double C, const UnitBallGreen& gb, double beta, double eps, int refine_level = 0);

/// Expected value, under the process in B(c, r) conditioned to die at w, of
/// the jump sum of F up to the exit time:
///   levy_const * int int G_B(x,y) G_B(z,w)/G_B(x,w) F(y,z) |y-z|^{-alpha-d} dz dy.
double conditioned_expectation(const UnitBallGreen& gb, const Ball& ball, const Point& x,
                               const Point& w, const KernelSpec& F, int refine_level = 0);

}  // namespace stabletilt
