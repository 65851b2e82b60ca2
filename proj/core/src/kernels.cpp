#include "stabletilt/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace stabletilt {

namespace {

Point unit_axis_or_e1(const Point& v, int d) {
  const double n = v.norm();
  if (n < 1e-14) return Point::unit(d, 0);
  Point u = v;
  u *= 1.0 / n;
  return u;
}

// Orthonormal completion of a unit axis in R^3.
void frame3(const Point& a, Point& b, Point& c) {
  b = Point(3);
  if (std::abs(a[0]) <= std::abs(a[1]) && std::abs(a[0]) <= std::abs(a[2])) {
    b[0] = 0.0;
    b[1] = -a[2];
    b[2] = a[1];
  } else if (std::abs(a[1]) <= std::abs(a[2])) {
    b[0] = -a[2];
    b[1] = 0.0;
    b[2] = a[0];
  } else {
    b[0] = -a[1];
    b[1] = a[0];
    b[2] = 0.0;
  }
  b *= 1.0 / b.norm();
  c = Point(3);
  c[0] = a[1] * b[2] - a[2] * b[1];
  c[1] = a[2] * b[0] - a[0] * b[2];
  c[2] = a[0] * b[1] - a[1] * b[0];
}

double sin_power_norm(int d) {
  // int_0^pi sin^{d-2} theta dtheta
  return std::sqrt(M_PI) * std::tgamma(0.5 * (d - 1)) / std::tgamma(0.5 * d);
}

}  // namespace

std::optional<ICBetaTag> icbeta_tag(const KernelSpec& k) {
  for (const auto& t : k.tags)
    if (const auto* p = std::get_if<ICBetaTag>(&t)) return *p;
  return std::nullopt;
}

std::optional<FuchsianTag> fuchsian_tag(const KernelSpec& k) {
  for (const auto& t : k.tags)
    if (const auto* p = std::get_if<FuchsianTag>(&t)) return *p;
  return std::nullopt;
}

KernelSpec zero_kernel() {
  KernelSpec k;
  k.name = "zero";
  k.radial_profile = [](double, double, double) { return 0.0; };
  k.eval = [](const Point&, const Point&) { return 0.0; };
  k.support_radius = 0.0;
  return k;
}

namespace {

KernelSpec from_radial_profile(std::string name, std::function<double(double, double, double)> f) {
  KernelSpec k;
  k.name = std::move(name);
  k.radial_profile = std::move(f);
  k.eval = [profile = k.radial_profile](const Point& x, const Point& y) {
    return profile(x.norm(), y.norm(), dist(x, y));
  };
  return k;
}

}  // namespace

KernelSpec fuchsian_kernel(double C, double beta) {
  if (!(C > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("fuchsian_kernel: need C > 0, beta > 0");
  auto k = from_radial_profile("fuchsian", [C, beta](double r, double s, double rho) {
    return C * std::pow(rho, beta) / (1.0 + std::pow(r, beta) + std::pow(s, beta));
  });
  k.lower_bound = 0.0;
  k.upper_bound = C * std::max(1.0, std::pow(2.0, beta - 1.0));
  k.diagonal_exponent = beta;
  k.tags = {FuchsianTag{C, beta}, ICBetaTag{C, beta}};
  return k;
}

KernelSpec fuchsian_capped_kernel(double C, double beta) {
  if (!(C > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("fuchsian_capped_kernel: need C > 0, beta > 0");
  auto k = from_radial_profile("fuchsian_capped", [C, beta](double r, double s, double rho) {
    return C * std::min(std::pow(rho, beta), 1.0) /
           (1.0 + std::pow(r, beta) + std::pow(s, beta));
  });
  k.lower_bound = 0.0;
  k.upper_bound = C / (1.0 + std::min(1.0, std::pow(2.0, 1.0 - beta)));
  k.diagonal_exponent = beta;
  k.tags = {FuchsianTag{C, beta}, ICBetaTag{C, beta}};
  return k;
}

KernelSpec capped_power_kernel(double C, double beta) {
  if (!(C > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("capped_power_kernel: need C > 0, beta > 0");
  auto k = from_radial_profile("capped_power", [C, beta](double, double, double rho) {
    return C * std::min(std::pow(rho, beta), 1.0);
  });
  k.lower_bound = 0.0;
  k.upper_bound = C;
  k.diagonal_exponent = beta;
  k.tags = {ICBetaTag{C, beta}};
  return k;
}

KernelSpec annulus_band_kernel(double value, double lo, double hi) {
  if (!(value > 0.0) || !(lo > 0.0) || !(hi > lo))
    throw std::invalid_argument("annulus_band_kernel: need value > 0, 0 < lo < hi");
  auto k = from_radial_profile("annulus_band", [value, lo, hi](double, double, double rho) {
    return (rho >= lo && rho <= hi) ? value : 0.0;
  });
  k.lower_bound = 0.0;
  k.upper_bound = value;
  k.diagonal_exponent = kInf;  // vanishes near the diagonal
  k.support_radius = hi;
  k.support_inner = lo;
  return k;
}

int SparseBallGeometry::ball_of(const Point& p) const {
  for (std::size_t n = 0; n < centers.size(); ++n)
    if (dist(p, centers[n]) < radii[n]) return static_cast<int>(n);
  return -1;
}

SparseBallGeometry sparse_ball_geometry(const StableParams& params, double gamma, int n_balls) {
  if (!(gamma > 0.0) || !(gamma < params.alpha))
    throw std::invalid_argument("sparse_ball_geometry: need 0 < gamma < alpha");
  if (!(params.alpha - gamma < 0.5))
    throw std::invalid_argument("sparse_ball_geometry: need alpha - gamma < 1/2");
  if (n_balls < 0 || n_balls > 8)
    throw std::invalid_argument("sparse_ball_geometry: n_balls must be in [0, 8]");
  SparseBallGeometry g;
  for (int n = 1; n <= n_balls; ++n) {
    const double xn = std::pow(2.0, n * params.d / (params.alpha - gamma));
    const double rn = std::pow(2.0, -n) * xn + 1.0;
    Point c = Point::unit(params.d, 0);
    c *= xn;
    g.centers.push_back(c);
    g.radii.push_back(rn);
  }
  return g;
}

KernelSpec sparse_ball_kernel(const StableParams& params, double gamma, double beta,
                              int n_balls) {
  if (!(params.alpha < params.d))
    throw std::invalid_argument("sparse_ball_kernel: requires alpha < d");
  if (!(gamma > 0.0) || !(gamma < params.alpha) || !(params.alpha < beta))
    throw std::invalid_argument("sparse_ball_kernel: need 0 < gamma < alpha < beta");
  if (!(params.alpha - gamma < 0.5))
    throw std::invalid_argument("sparse_ball_kernel: need alpha - gamma < 1/2");
  auto geo = sparse_ball_geometry(params, gamma, n_balls);

  KernelSpec k;
  k.name = "sparse_ball";
  k.eval = [geo, gamma, beta](const Point& y, const Point& z) {
    const int n = geo.ball_of(y);
    if (n < 0 || dist(z, geo.centers[static_cast<std::size_t>(n)]) >=
                     geo.radii[static_cast<std::size_t>(n)])
      return 0.0;
    const double rho = dist(y, z);
    if (rho > 1.0 || rho == 0.0) return 0.0;
    return std::pow(rho, beta) / (std::pow(y.norm(), gamma) + std::pow(z.norm(), gamma));
  };
  k.lower_bound = 0.0;
  if (n_balls > 0) {
    const double inner = geo.centers[0].norm() - geo.radii[0];
    k.upper_bound = std::min(1.0, 1.0 / (2.0 * std::pow(std::max(inner, 1.0), gamma)));
  }
  k.diagonal_exponent = beta;
  k.support_radius = n_balls > 0 ? 1.0 : 0.0;
  k.ball_count = n_balls;
  k.tags = {SparseBallTag{gamma, beta}, ICBetaTag{1.0, beta}};
  k.polar_axis = [geo](const Point& x) {
    const int n = geo.ball_of(x);
    const Point c = n >= 0 ? geo.centers[static_cast<std::size_t>(n)] : Point::unit(x.dim(), 0);
    return unit_axis_or_e1(c - x, x.dim());
  };
  k.angular_breaks = [geo](const Point& x, double rho) -> std::vector<double> {
    const int n = geo.ball_of(x);
    if (n < 0) return {};
    const double D = dist(x, geo.centers[static_cast<std::size_t>(n)]);
    if (D < 1e-12) return {};
    const double rn = geo.radii[static_cast<std::size_t>(n)];
    const double t0 = (rho * rho + D * D - rn * rn) / (2.0 * rho * D);
    if (t0 > -1.0 && t0 < 1.0) return {t0};
    return {};
  };
  return k;
}

KernelSpec sparse_ball_sqrt_kernel(const StableParams& params, double gamma, double beta,
                                   int n_balls) {
  if (!(2.0 * gamma < params.alpha) || !(params.alpha < 2.0 * beta))
    throw std::invalid_argument("sparse_ball_sqrt_kernel: need 2 gamma < alpha < 2 beta");
  KernelSpec base = sparse_ball_kernel(params, 2.0 * gamma, 2.0 * beta, n_balls);
  KernelSpec k = base;
  k.name = "sparse_ball_sqrt";
  k.eval = [inner = base.eval](const Point& y, const Point& z) {
    return 0.125 * std::sqrt(inner(y, z));
  };
  k.upper_bound = 0.125 * std::sqrt(base.upper_bound);
  k.diagonal_exponent = beta;
  k.tags = {SqrtSparseBallTag{gamma, beta}};
  return k;
}

KernelSpec scale_kernel(const KernelSpec& k, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale_kernel: factor must be positive");
  KernelSpec out = k;
  out.name = k.name + "_scaled";
  out.eval = [inner = k.eval, factor](const Point& x, const Point& y) {
    return factor * inner(x, y);
  };
  if (k.radial_profile)
    out.radial_profile = [inner = k.radial_profile, factor](double r, double s, double rho) {
      return factor * inner(r, s, rho);
    };
  out.lower_bound = factor * k.lower_bound;
  out.upper_bound = factor * k.upper_bound;
  out.tags.clear();
  for (const auto& t : k.tags) {
    if (const auto* p = std::get_if<ICBetaTag>(&t))
      out.tags.push_back(ICBetaTag{factor * p->C, p->beta});
    else if (const auto* p2 = std::get_if<FuchsianTag>(&t))
      out.tags.push_back(FuchsianTag{factor * p2->C, p2->beta});
    // sparse-ball tags describe an exact functional form; a rescaled kernel
    // no longer matches it, so they are dropped.
  }
  return out;
}

double apply_transform(PairTransform t, double f) {
  switch (t) {
    case PairTransform::Identity:
      return f;
    case PairTransform::EntropyDirect:
      return f - std::log1p(f);
    case PairTransform::EntropyReverse:
      return (1.0 + f) * std::log1p(f) - f;
  }
  return 0.0;
}

namespace {

// Mean of g(F(x, x + rho * omega)) over omega in S^{d-1}.
class AngularAverage {
 public:
  AngularAverage(const StableParams& params, const KernelSpec& kernel, const Point& x,
                 PairTransform transform)
      : params_(params), kernel_(kernel), x_(x), transform_(transform), r_(x.norm()) {
    if (!kernel.is_radial()) {
      axis_ = kernel.polar_axis ? kernel.polar_axis(x) : Point::unit(params.d, 0);
      if (params.d == 3) frame3(axis_, b_, c_);
    }
  }

  double operator()(double rho) const {
    if (kernel_.is_radial()) return radial(rho);
    return general(rho);
  }

 private:
  double g(double f) const { return apply_transform(transform_, f); }

  double radial(double rho) const {
    const auto& f = kernel_.radial_profile;
    if (params_.d == 1)
      return 0.5 * (g(f(r_, std::abs(r_ + rho), rho)) + g(f(r_, std::abs(r_ - rho), rho)));
    if (r_ == 0.0) return g(f(0.0, rho, rho));
    auto integrand = [&](double theta) {
      const double s = std::sqrt(r_ * r_ + rho * rho + 2.0 * r_ * rho * std::cos(theta));
      const double w = params_.d == 3 ? std::sin(theta) : std::pow(std::sin(theta), params_.d - 2);
      return w * g(f(r_, s, rho));
    };
    return gauss_legendre(integrand, 0.0, M_PI, 32) / sin_power_norm(params_.d);
  }

  double general(double rho) const {
    const int d = params_.d;
    if (d == 1) {
      Point zp = x_, zm = x_;
      zp[0] += rho;
      zm[0] -= rho;
      return 0.5 * (g(kernel_.eval(x_, zp)) + g(kernel_.eval(x_, zm)));
    }
    if (d == 2) {
      const int n = 64;
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * M_PI * i / n;
        Point z = x_;
        z[0] += rho * std::cos(phi);
        z[1] += rho * std::sin(phi);
        s += g(kernel_.eval(x_, z));
      }
      return s / n;
    }
    if (d != 3)
      throw std::invalid_argument("kernel_levy_field: non-radial kernels support d in {1,2,3}");
    std::vector<double> breaks = {-1.0, 1.0};
    if (kernel_.angular_breaks) {
      for (double t : kernel_.angular_breaks(x_, rho)) breaks.push_back(t);
      std::sort(breaks.begin(), breaks.end());
    }
    const int n_psi = 8;
    auto ring_mean = [&](double t) {
      const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
      double s = 0.0;
      for (int i = 0; i < n_psi; ++i) {
        const double psi = 2.0 * M_PI * i / n_psi;
        Point omega = t * axis_ + (st * std::cos(psi)) * b_ + (st * std::sin(psi)) * c_;
        const Point z = x_ + rho * omega;
        s += g(kernel_.eval(x_, z));
      }
      return s / n_psi;
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      total += gauss_legendre(ring_mean, breaks[i], breaks[i + 1], 16);
    return 0.5 * total;  // uniform measure in t = cos(theta) on [-1, 1]
  }

  const StableParams& params_;
  const KernelSpec& kernel_;
  Point x_;
  PairTransform transform_;
  double r_;
  Point axis_, b_, c_;
};

}  // namespace

QuadResult kernel_levy_field(const StableParams& params, const KernelSpec& kernel, const Point& x,
                             const QuadratureSpec& quad, PairTransform transform,
                             double min_radius) {
  if (!(kernel.lower_bound > -1.0))
    throw std::invalid_argument("kernel_levy_field: requires inf F > -1");
  const double q_exp = transform == PairTransform::Identity ? 1.0 : 2.0;
  const bool diagonal_reached = min_radius <= 0.0 && kernel.support_radius > 0.0 &&
                                std::isfinite(kernel.diagonal_exponent);
  if (diagonal_reached && !(q_exp * kernel.diagonal_exponent > params.alpha))
    throw std::invalid_argument(
        "kernel_levy_field: integrability near the diagonal needs exponent > alpha");
  if (kernel.support_radius <= min_radius || kernel.support_radius == 0.0) return {};
  min_radius = std::max(min_radius, kernel.support_inner);

  AngularAverage avg(params, kernel, x, transform);
  const double sigma = sphere_surface(params.d);
  const double near_end = std::min(1.0, kernel.support_radius);

  QuadResult total;
  // Near part (min_radius, near_end].
  if (min_radius < near_end) {
    if (std::isfinite(kernel.diagonal_exponent)) {
      const double p = q_exp * kernel.diagonal_exponent - 1.0 - params.alpha;
      auto phi = [&](double rho) {
        const double r = std::max(rho, 1e-12);
        return avg(r) * std::pow(r, -q_exp * kernel.diagonal_exponent);
      };
      QuadResult full = integrate_power_endpoint(phi, p, near_end, quad.tol, quad.max_refine + 6);
      total.value += full.value;
      total.error += full.error;
      total.converged = total.converged && full.converged;
      if (min_radius > 0.0) {
        QuadResult cut =
            integrate_power_endpoint(phi, p, min_radius, quad.tol, quad.max_refine + 6);
        total.value -= cut.value;
        total.error += cut.error;
        total.converged = total.converged && cut.converged;
      }
    } else {
      auto integrand = [&](double rho) {
        const double a = avg(rho);
        return a == 0.0 ? 0.0 : a * std::pow(rho, -1.0 - params.alpha);
      };
      QuadResult near =
          integrate_adaptive(integrand, std::max(min_radius, 0.0), near_end, quad.tol,
                             quad.max_refine + 6);
      total.value += near.value;
      total.error += near.error;
      total.converged = total.converged && near.converged;
    }
  }
  // Far part [max(min_radius, near_end), support or infinity).
  const double far_start = std::max(min_radius, near_end);
  auto far_integrand = [&](double rho) {
    const double a = avg(rho);
    return a == 0.0 ? 0.0 : a * std::pow(rho, -1.0 - params.alpha);
  };
  if (std::isfinite(kernel.support_radius)) {
    if (kernel.support_radius > far_start) {
      QuadResult far = integrate_adaptive(far_integrand, far_start, kernel.support_radius,
                                          quad.tol, quad.max_refine + 6);
      total.value += far.value;
      total.error += far.error;
      total.converged = total.converged && far.converged;
    }
  } else {
    // Bounded numerator makes this tail absolutely convergent, but the
    // integrand can ridge near rho ~ |x| before decaying; allow a long rise.
    QuadResult far = integrate_tail_geometric(far_integrand, far_start, quad.tol, 240, 16, 200);
    total.value += far.value;
    total.error += far.error;
    total.converged = total.converged && far.converged;
    total.divergent = total.divergent || far.divergent;
  }
  total.value *= params.levy_const * sigma;
  total.error *= params.levy_const * sigma;
  return total;
}

namespace {

double field_or_throw(const char* what, const StableParams& params, const KernelSpec& kernel,
                      const Point& x, const QuadratureSpec& quad, PairTransform t,
                      double min_radius) {
  QuadResult r = kernel_levy_field(params, kernel, x, quad, t, min_radius);
  if (!r.converged)
    throw NumericFailure(std::string(what) + ": quadrature did not converge", r.value, r.error);
  return r.value;
}

}  // namespace

double h_field(const StableParams& params, const KernelSpec& kernel, const Point& x,
               const QuadratureSpec& quad, double min_radius) {
  return field_or_throw("h_field", params, kernel, x, quad, PairTransform::Identity, min_radius);
}

double entropy_h_field(const StableParams& params, const KernelSpec& kernel, const Point& x,
                       const QuadratureSpec& quad, double min_radius) {
  return field_or_throw("entropy_h_field", params, kernel, x, quad, PairTransform::EntropyDirect,
                        min_radius);
}

double entropy_h1_field(const StableParams& params, const KernelSpec& kernel, const Point& x,
                        const QuadratureSpec& quad, double min_radius) {
  return field_or_throw("entropy_h1_field", params, kernel, x, quad,
                        PairTransform::EntropyReverse, min_radius);
}

double RadialField::operator()(double r) const {
  if (r <= r_max_) return interp_(std::log1p(r));
  if (tail_coeff_ == 0.0) return 0.0;
  return tail_coeff_ * std::pow(r, -tail_exponent_);
}

RadialField RadialField::build(const StableParams& params, const KernelSpec& kernel,
                               const QuadratureSpec& quad, PairTransform transform,
                               double min_radius, double r_max, int points_per_decade) {
  if (!kernel.is_radial())
    throw std::invalid_argument("RadialField: kernel has no radial structure");
  const double r_lo = 1e-3;
  std::vector<double> rs = {0.0};
  const int decades = static_cast<int>(std::ceil(std::log10(r_max / r_lo)));
  for (int i = 0; i <= decades * points_per_decade; ++i)
    rs.push_back(r_lo * std::pow(10.0, static_cast<double>(i) / points_per_decade));
  std::vector<double> us, hs;
  us.reserve(rs.size());
  hs.reserve(rs.size());
  for (double r : rs) {
    Point x = Point::unit(params.d, 0);
    x *= r;
    const QuadResult q = kernel_levy_field(params, kernel, x, quad, transform, min_radius);
    if (!q.converged)
      throw NumericFailure("RadialField: grid value did not converge at r=" + std::to_string(r),
                           q.value, q.error);
    us.push_back(std::log1p(r));
    hs.push_back(q.value);
  }
  RadialField f;
  f.r_max_ = rs.back();
  f.interp_ = Pchip(std::move(us), hs);
  // Fit a power tail from the last decade of grid values.
  const std::size_t n = rs.size();
  const std::size_t j = n - 1 - static_cast<std::size_t>(points_per_decade);
  if (hs[n - 1] > 0.0 && hs[j] > 0.0 && rs[j] > 0.0) {
    f.tail_exponent_ = -(std::log(hs[n - 1]) - std::log(hs[j])) /
                       (std::log(rs[n - 1]) - std::log(rs[j]));
    f.tail_coeff_ = hs[n - 1] * std::pow(rs[n - 1], f.tail_exponent_);
  }
  return f;
}

}  // namespace stabletilt
