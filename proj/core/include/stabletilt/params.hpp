#pragma once

#include <optional>

#include "stabletilt/common.hpp"

namespace stabletilt {

/// Parameters of an isotropic alpha-stable process in R^d with characteristic
/// function exp(-t |xi|^alpha). The jump intensity is
///   j(x,y) = levy_const * |x-y|^{-d-alpha},
/// and for alpha < d the process is transient with Green function
///   G(x,y) = green_const * |x-y|^{alpha-d}.
struct StableParams {
  int d = 1;
  double alpha = 0.5;
  double levy_const = 0.0;                 // c~(d, alpha), always present
  std::optional<double> green_const;       // c(d, alpha), present iff alpha < d

  static StableParams make(int d, double alpha);

  bool transient() const { return alpha < static_cast<double>(d); }

  /// Requires alpha < d; throws invalid_argument otherwise.
  double green_constant() const;

  /// Total jump rate above magnitude cutoff eps:
  ///   Lambda(eps) = levy_const * sigma_{d-1} * eps^{-alpha} / alpha.
  double jump_rate(double cutoff) const;

  /// Per-coordinate variance rate of the sub-cutoff jump compensation:
  ///   levy_const * sigma_{d-1} * eps^{2-alpha} / (d (2-alpha)).
  double small_jump_variance_rate(double cutoff) const;
};

}  // namespace stabletilt
