#pragma once

#include <functional>
#include <vector>

#include "stabletilt/kernels.hpp"
#include "stabletilt/stable_process.hpp"

namespace stabletilt {

/// Cumulative jump functionals along one path, sampled at event times, plus
/// terminal values at the horizon. With h_eval the field accessor for the
/// compensator (truncated at the path cutoff so the discretized model is
/// internally consistent):
///   A      = sum F(X_{s-}, X_s)
///   A_tilde= sum (1 - e^{-F})
///   QV     = sum F^2                      ([M^F])
///   comp   = int h(X_s) ds                (<M^F>)
///   M      = A - comp                     (M^F)
///   logL   = M + sum (log(1+F) - F)       (log of the Doleans exponential)
struct FunctionalSeries {
  std::vector<double> times;
  std::vector<double> A, A_tilde, QV, compensator, M, logL;
  double horizon = 0.0;
  double A_T = 0.0, A_tilde_T = 0.0, QV_T = 0.0, compensator_T = 0.0, M_T = 0.0, logL_T = 0.0;
};

using FieldAccessor = std::function<double(const Point&)>;

FunctionalSeries accumulate(const JumpPath& path, const KernelSpec& F, const FieldAccessor& h_eval);

struct DoleansPairReport {
  double log_em = 0.0;      // log E(M)
  double log_emm = 0.0;     // log E(-M)
  double log_emqv = 0.0;    // log E(-[M])
  double identity_error = 0.0;  // |log E(M) + log E(-M) - log E(-[M])| (relative)
};

/// Checks E(M) E(-M) = E(-[M]) pathwise from the closed jump-product forms.
/// Requires |F| < 1 along the path.
DoleansPairReport doleans_exponential_pair_check(const JumpPath& path, const KernelSpec& F,
                                                 const FieldAccessor& h_eval);

struct InverseDensityReport {
  double log_l = 0.0;        // log L^F
  double log_l_inverse = 0.0;  // log of the reciprocal density, computed for F1 = -F/(1+F)
  double identity_error = 0.0;  // |log_l + log_l_inverse|
};

/// Computes log L^F along the path and the log-density of F1 = -F/(1+F) with
/// the compensator taken against the tilted kernel (1+F) N; since
/// F1 (1+F) = -F the tilted compensator is the negative of the base one.
InverseDensityReport inverse_density_check(const JumpPath& path, const KernelSpec& F,
                                           const FieldAccessor& h_eval);

struct SequenceEquivalence {
  double sumsq = 0.0;        // sum a_n^2
  double sumsq_ratio = 0.0;  // sum (a_n / (1+a_n))^2
  double log_product = 0.0;  // log prod (1+a_n)/(1+a_n/2)^2
  double product = 0.0;
};

/// Partial sums/products of the three equivalent convergence quantities for a
/// finite sequence with a_n > -1.
SequenceEquivalence sequence_equivalence_check(const std::vector<double>& a);

}  // namespace stabletilt
