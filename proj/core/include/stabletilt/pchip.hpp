#pragma once

#include <vector>

namespace stabletilt {

/// Shape-preserving cubic interpolant (Fritsch-Carlson). Monotone data gives
/// a monotone interpolant; evaluation outside the grid clamps to the end
/// values unless linear extrapolation is requested.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;

  /// Linear extension using the end slope instead of clamping.
  double eval_extrapolate(double x) const;

  bool empty() const { return xs_.empty(); }
  double x_front() const { return xs_.front(); }
  double x_back() const { return xs_.back(); }

 private:
  double eval_core(double x) const;
  std::vector<double> xs_, ys_, d_;  // d_: node derivatives
};

}  // namespace stabletilt
