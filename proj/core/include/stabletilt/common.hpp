#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace stabletilt {

inline constexpr int kMaxDim = 8;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown when a quadrature fails to converge; carries the partial value
/// and the error estimate at the point of failure.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(what), partial_value(partial), error(error_estimate) {}
  double partial_value;
  double error;
};

/// Thrown when a structural invariant is violated at runtime (e.g. a kernel
/// evaluating to <= -1 along a path). Distinct from invalid_argument: it
/// signals a broken input object, not a bad parameter.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

/// Point in R^d with inline storage, d <= kMaxDim. Cheap to copy; paths hold
/// millions of these in hot loops.
class Point {
 public:
  Point() = default;
  explicit Point(int dim) : dim_(static_cast<std::uint8_t>(check_dim(dim))) {}

  static Point zero(int dim) { return Point(dim); }
  static Point unit(int dim, int axis) {
    Point p(dim);
    p.v_[static_cast<std::size_t>(axis)] = 1.0;
    return p;
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }

  Point& operator+=(const Point& o) {
    for (int i = 0; i < dim_; ++i) v_[static_cast<std::size_t>(i)] += o[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    for (int i = 0; i < dim_; ++i) v_[static_cast<std::size_t>(i)] -= o[i];
    return *this;
  }
  Point& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) v_[static_cast<std::size_t>(i)] *= s;
    return *this;
  }
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(double s, Point a) { return a *= s; }

  double dot(const Point& o) const {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += v_[static_cast<std::size_t>(i)] * o[i];
    return s;
  }
  double norm_sq() const { return dot(*this); }
  double norm() const { return std::sqrt(norm_sq()); }

  friend double dist(const Point& a, const Point& b) { return (a - b).norm(); }

  bool operator==(const Point& o) const {
    if (dim_ != o.dim_) return false;
    for (int i = 0; i < dim_; ++i)
      if (v_[static_cast<std::size_t>(i)] != o[i]) return false;
    return true;
  }

 private:
  static int check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Point: dim must be in [1, 8]");
    return dim;
  }
  std::array<double, kMaxDim> v_{};
  std::uint8_t dim_ = 0;
};

/// Surface area of the unit sphere S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
inline double sphere_surface(int d) {
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

/// Volume of the unit ball in R^d.
inline double ball_volume(int d) { return sphere_surface(d) / d; }

}  // namespace stabletilt
