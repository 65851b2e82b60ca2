#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stabletilt/common.hpp"
#include "stabletilt/params.hpp"
#include "stabletilt/pchip.hpp"
#include "stabletilt/quadrature.hpp"

namespace stabletilt {

struct ICBetaTag {
  double C, beta;
};  // |F(x,y)| <= C |x-y|^beta
struct FuchsianTag {
  double C, beta;
};  // F(x,y) <= C |x-y|^beta / (1 + |x|^beta + |y|^beta)
struct SparseBallTag {
  double gamma, beta;
};  // supported on sparse far-apart balls, |y-z| <= 1
struct SqrtSparseBallTag {
  double gamma, beta;
};  // (1/8) sqrt of a sparse-ball kernel built with (2 gamma, 2 beta)
using ClassTag = std::variant<ICBetaTag, FuchsianTag, SparseBallTag, SqrtSparseBallTag>;

/// A symmetric jump kernel F(x, y) with the metadata the quadrature and
/// simulation layers need. eval must be symmetric and vanish on the diagonal;
/// lower_bound > -1 throughout.
struct KernelSpec {
  std::string name;
  std::function<double(const Point&, const Point&)> eval;
  double lower_bound = 0.0;  // inf F
  double upper_bound = 0.0;  // sup F
  bool vanishes_on_diagonal = true;
  std::vector<ClassTag> tags;

  /// Near-diagonal growth exponent: F ~ rho^{diagonal_exponent} as
  /// rho = |x-y| -> 0. kInf when F vanishes in a neighbourhood of the diagonal.
  double diagonal_exponent = kInf;

  /// F(x, y) = 0 whenever |x - y| > support_radius.
  double support_radius = kInf;

  /// F(x, y) = 0 whenever |x - y| < support_inner (annulus-type kernels).
  double support_inner = 0.0;

  /// Number of balls for the sparse-ball families (0 otherwise).
  int ball_count = 0;

  /// Present when F(x,y) depends only on (|x|, |y|, |x-y|); enables fast
  /// axisymmetric quadrature. Arguments: (|x|, |y|, |x-y|).
  std::function<double(double, double, double)> radial_profile;

  /// Preferred polar axis for angular quadrature at x (unit vector).
  std::function<Point(const Point&)> polar_axis;

  /// cos-theta breakpoints (relative to polar_axis) where the angular
  /// integrand at radius rho is discontinuous.
  std::function<std::vector<double>(const Point&, double)> angular_breaks;

  double operator()(const Point& x, const Point& y) const { return eval(x, y); }
  bool is_radial() const { return static_cast<bool>(radial_profile); }
};

std::optional<ICBetaTag> icbeta_tag(const KernelSpec& k);
std::optional<FuchsianTag> fuchsian_tag(const KernelSpec& k);

/// F == 0.
KernelSpec zero_kernel();

/// F(x,y) = C |x-y|^beta / (1 + |x|^beta + |y|^beta). Bounded, in I(C,beta);
/// far jumps (|x-y| >> |x|) have F near C.
KernelSpec fuchsian_kernel(double C, double beta);

/// F(x,y) = C (min(|x-y|^beta, 1)) / (1 + |x|^beta + |y|^beta). Same Fuchsian
/// bound, but the unit cap removes the far-jump plateau, so jump sums over a
/// transient path stay finite.
KernelSpec fuchsian_capped_kernel(double C, double beta);

/// F(x,y) = C min(|x-y|^beta, 1), the extremal element of I(C,beta).
KernelSpec capped_power_kernel(double C, double beta);

/// F = value on {lo < |x-y| < hi}, 0 elsewhere. Jumps in the band arrive at a
/// state-independent positive rate, so sum F^2 grows linearly.
KernelSpec annulus_band_kernel(double value = 0.5, double lo = 1.0, double hi = 2.0);

/// Centers and radii of the sparse ball family: |x_n| = 2^{n d / (alpha - gamma)}
/// on the first axis, r_n = 2^{-n} |x_n| + 1.
struct SparseBallGeometry {
  std::vector<Point> centers;
  std::vector<double> radii;
  int ball_of(const Point& p) const;  // index of the ball containing p, or -1
};
SparseBallGeometry sparse_ball_geometry(const StableParams& params, double gamma, int n_balls);

/// F(y,z) = |y-z|^beta / (|y|^gamma + |z|^gamma) when y, z lie in a common
/// ball B(x_n, r_n) and |y-z| <= 1, else 0. Requires 0 < gamma < alpha < beta,
/// alpha - gamma < 1/2 and alpha < d.
KernelSpec sparse_ball_kernel(const StableParams& params, double gamma, double beta,
                              int n_balls = 4);

/// F = (1/8) sqrt(Phi) where Phi is the sparse-ball kernel with (2 gamma,
/// 2 beta). Requires 2 gamma < alpha < 2 beta and alpha - 2 gamma < 1/2.
KernelSpec sparse_ball_sqrt_kernel(const StableParams& params, double gamma, double beta,
                                   int n_balls = 4);

/// Same kernel rescaled by factor > 0 (tags and bounds rescale with it).
KernelSpec scale_kernel(const KernelSpec& k, double factor);

/// Scalar transforms applied to kernel values inside Levy-kernel integrals.
enum class PairTransform {
  Identity,       // f
  EntropyDirect,  // f - log(1+f)
  EntropyReverse  // (1+f) log(1+f) - f
};
double apply_transform(PairTransform t, double f);

/// Integral of the transformed kernel against the Levy measure,
///   int_{|z-x| > min_radius} g(F(x,z)) levy_const |x-z|^{-d-alpha} dz,
/// by radial-angular quadrature. Identity requires diagonal_exponent > alpha,
/// the entropy transforms 2 * diagonal_exponent > alpha.
QuadResult kernel_levy_field(const StableParams& params, const KernelSpec& kernel, const Point& x,
                             const QuadratureSpec& quad, PairTransform transform,
                             double min_radius = 0.0);

/// Named wrappers; each throws NumericFailure (carrying the partial value)
/// when the quadrature fails to converge.
double h_field(const StableParams& params, const KernelSpec& kernel, const Point& x,
               const QuadratureSpec& quad, double min_radius = 0.0);
double entropy_h_field(const StableParams& params, const KernelSpec& kernel, const Point& x,
                       const QuadratureSpec& quad, double min_radius = 0.0);
double entropy_h1_field(const StableParams& params, const KernelSpec& kernel, const Point& x,
                        const QuadratureSpec& quad, double min_radius = 0.0);

/// Interpolated radial field r -> value for kernels with radial structure.
/// Grid values come from kernel_levy_field; beyond the grid a fitted power
/// law takes over. Used as the O(1) field accessor along simulated paths.
class RadialField {
 public:
  RadialField() = default;
  double operator()(double r) const;
  double operator()(const Point& x) const { return (*this)(x.norm()); }
  double tail_exponent() const { return tail_exponent_; }
  double grid_max() const { return r_max_; }

  static RadialField build(const StableParams& params, const KernelSpec& kernel,
                           const QuadratureSpec& quad, PairTransform transform,
                           double min_radius = 0.0, double r_max = 1e5,
                           int points_per_decade = 12);

 private:
  Pchip interp_;  // on u = log(1 + r)
  double r_max_ = 0.0;
  double tail_coeff_ = 0.0;
  double tail_exponent_ = 0.0;
};

}  // namespace stabletilt
