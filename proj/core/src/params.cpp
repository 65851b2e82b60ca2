#include "stabletilt/params.hpp"

#include <cmath>
#include <stdexcept>

namespace stabletilt {

StableParams StableParams::make(int d, double alpha) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("StableParams: d must be in [1, 8]");
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::invalid_argument("StableParams: alpha must lie in (0, 2)");

  StableParams p;
  p.d = d;
  p.alpha = alpha;
  // Levy-Khintchine prefactor of |xi|^alpha for the isotropic stable law.
  const double lg = std::lgamma(0.5 * (alpha + d)) - std::lgamma(1.0 - 0.5 * alpha);
  p.levy_const = alpha * std::pow(2.0, alpha - 1.0) * std::exp(lg) / std::pow(M_PI, 0.5 * d);
  if (alpha < static_cast<double>(d)) {
    const double lgg = std::lgamma(0.5 * (d - alpha)) - std::lgamma(0.5 * alpha);
    p.green_const = std::pow(2.0, -alpha) * std::pow(M_PI, -0.5 * d) * std::exp(lgg);
  }
  return p;
}

double StableParams::green_constant() const {
  if (!green_const)
    throw std::invalid_argument("StableParams: Green function requires alpha < d");
  return *green_const;
}

double StableParams::jump_rate(double cutoff) const {
  if (!(cutoff > 0.0)) throw std::invalid_argument("jump_rate: cutoff must be positive");
  return levy_const * sphere_surface(d) * std::pow(cutoff, -alpha) / alpha;
}

double StableParams::small_jump_variance_rate(double cutoff) const {
  if (!(cutoff > 0.0))
    throw std::invalid_argument("small_jump_variance_rate: cutoff must be positive");
  return levy_const * sphere_surface(d) * std::pow(cutoff, 2.0 - alpha) / (d * (2.0 - alpha));
}

}  // namespace stabletilt
