#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stabletilt/common.hpp"

namespace stabletilt {

/// Controls adaptive quadrature. singularity_exponents documents the power
/// exponents declared at known singular points (each must exceed -d for
/// integrability); the integration routines receive the relevant exponent
/// explicitly.
struct QuadratureSpec {
  double tol = 1e-6;       // relative tolerance
  int max_refine = 12;     // refinement cap (panel depth / doubling count)
  std::vector<double> singularity_exponents = {};
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  bool divergent = false;  // set when a tail shows no decay within the panel cap
};

/// Gauss-Legendre nodes/weights on [-1, 1]; cached per order.
std::span<const double> gl_nodes(int n);
std::span<const double> gl_weights(int n);

/// Fixed-order Gauss-Legendre on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n);

/// Adaptive Simpson with absolute/relative tolerance.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double tol, int max_depth = 18);

/// Integral of rho^p * g(rho) over (0, b] for p > -1 with g smooth; the
/// substitution t = rho^{p+1} removes the endpoint singularity.
QuadResult integrate_power_endpoint(const std::function<double(double)>& g, double p, double b,
                                    double tol, int max_depth = 18);

/// Integral of f over [a, infinity) using geometric panels [a 2^k, a 2^{k+1}].
/// Stops when the running tail estimate drops below tol * |total| / 2; flags
/// divergence when panel contributions fail to decay for non_decreasing_limit
/// consecutive panels (set it large for integrands with a ridge that are
/// known to converge).
QuadResult integrate_tail_geometric(const std::function<double(double)>& f, double a, double tol,
                                    int max_panels = 80, int gl_order = 16,
                                    int non_decreasing_limit = 8);

}  // namespace stabletilt
