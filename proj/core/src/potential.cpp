#include "stabletilt/potential.hpp"

#include <algorithm>
#include <cmath>

namespace stabletilt {

double green_radial(const StableParams& params, double distance) {
  if (distance == 0.0) return kInf;
  return params.green_constant() * std::pow(distance, params.alpha - params.d);
}

double green(const StableParams& params, const Point& x, const Point& y) {
  return green_radial(params, dist(x, y));
}

namespace {

// Weighted mean over the polar angle for a function of s = |x + rho w|,
// |x| = r fixed. Exact two-point mean in d = 1.
double radial_sphere_mean(int d, double r, double rho, const std::function<double(double)>& g) {
  if (d == 1) return 0.5 * (g(std::abs(r + rho)) + g(std::abs(r - rho)));
  if (r == 0.0) return g(rho);
  auto integrand = [&](double theta) {
    const double s = std::sqrt(r * r + rho * rho + 2.0 * r * rho * std::cos(theta));
    return std::pow(std::sin(theta), d - 2) * g(s);
  };
  const double norm = std::sqrt(M_PI) * std::tgamma(0.5 * (d - 1)) / std::tgamma(0.5 * d);
  return gauss_legendre(integrand, 0.0, M_PI, 32) / norm;
}

}  // namespace

PotentialResult green_potential_radial(const StableParams& params,
                                       const std::function<double(double)>& h_radial,
                                       double tail_exponent, const Point& x,
                                       const QuadratureSpec& quad) {
  PotentialResult out;
  if (tail_exponent > 0.0 && tail_exponent <= params.alpha + 1e-9) {
    out.value = kInf;
    out.divergent = true;
    out.converged = false;
    return out;
  }
  const double c = params.green_constant();
  const double sigma = sphere_surface(params.d);
  const double r = x.norm();
  auto mean_h = [&](double rho) { return radial_sphere_mean(params.d, r, rho, h_radial); };
  auto phi = [&](double rho) { return mean_h(std::max(rho, 1e-14)); };
  QuadResult near = integrate_power_endpoint(phi, params.alpha - 1.0, 1.0, quad.tol,
                                             quad.max_refine + 6);
  auto far = integrate_tail_geometric(
      [&](double rho) { return std::pow(rho, params.alpha - 1.0) * mean_h(rho); }, 1.0, quad.tol);
  out.value = c * sigma * (near.value + far.value);
  out.error = c * sigma * (near.error + far.error);
  out.converged = near.converged && far.converged;
  if (far.divergent) {
    out.divergent = true;
    out.value = kInf;
  }
  return out;
}

PotentialResult green_potential(const StableParams& params,
                                const std::function<double(const Point&)>& h, const Point& x,
                                const QuadratureSpec& quad) {
  const int d = params.d;
  auto mean_h = [&](double rho) -> double {
    if (d == 1) {
      Point a = x, b = x;
      a[0] += rho;
      b[0] -= rho;
      return 0.5 * (h(a) + h(b));
    }
    if (d == 2) {
      const int n = 48;
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * M_PI * i / n;
        Point z = x;
        z[0] += rho * std::cos(phi);
        z[1] += rho * std::sin(phi);
        s += h(z);
      }
      return s / n;
    }
    // d = 3: product rule in (t, psi).
    const auto tn = gl_nodes(24);
    const auto tw = gl_weights(24);
    const int n_psi = 12;
    double s = 0.0;
    for (std::size_t i = 0; i < tn.size(); ++i) {
      const double t = tn[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
      double ring = 0.0;
      for (int j = 0; j < n_psi; ++j) {
        const double psi = 2.0 * M_PI * j / n_psi;
        Point z = x;
        z[0] += rho * t;
        z[1] += rho * st * std::cos(psi);
        z[2] += rho * st * std::sin(psi);
        ring += h(z);
      }
      s += tw[i] * ring / n_psi;
    }
    return 0.5 * s;
  };
  PotentialResult out;
  const double c = params.green_constant();
  const double sigma = sphere_surface(d);
  QuadResult near = integrate_power_endpoint(
      [&](double rho) { return mean_h(std::max(rho, 1e-14)); }, params.alpha - 1.0, 1.0,
      quad.tol, quad.max_refine + 6);
  auto far = integrate_tail_geometric(
      [&](double rho) { return std::pow(rho, params.alpha - 1.0) * mean_h(rho); }, 1.0, quad.tol);
  out.value = c * sigma * (near.value + far.value);
  out.error = c * sigma * (near.error + far.error);
  out.converged = near.converged && far.converged;
  if (far.divergent) {
    out.divergent = true;
    out.value = kInf;
  }
  return out;
}

UnitBallGreen::UnitBallGreen(const StableParams& params) : params_(params) {
  if (!(params.alpha < params.d)) throw std::invalid_argument("UnitBallGreen: requires alpha < d");
  const double a = 0.5 * params.alpha;
  const double b = 0.5 * (params.d - params.alpha);
  complete_ = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  // kappa pinned by G_B -> G when the killing becomes immaterial (w -> inf).
  kappa_ = params.green_constant() / complete_;

  w_lo_ = 1e-14;
  w_hi_ = 1e14;
  const int per_decade = 48;
  const int decades = 28;
  std::vector<double> logw, val;
  logw.reserve(static_cast<std::size_t>(per_decade * decades) + 1);
  val.reserve(logw.capacity());
  double w_prev = w_lo_;
  // Exact small-w limit: (2/alpha) w^{alpha/2}.
  double acc = (2.0 / params.alpha) * std::pow(w_lo_, a);
  logw.push_back(std::log(w_lo_));
  val.push_back(acc);
  auto f = [&](double s) { return std::pow(s, a - 1.0) * std::pow(1.0 + s, -0.5 * params.d); };
  for (int i = 1; i <= per_decade * decades; ++i) {
    const double w = w_lo_ * std::pow(10.0, static_cast<double>(i) / per_decade);
    acc += gauss_legendre(f, w_prev, w, 20);
    logw.push_back(std::log(w));
    val.push_back(acc);
    w_prev = w;
  }
  table_ = Pchip(std::move(logw), std::move(val));
}

double UnitBallGreen::incomplete_factor(double w) const {
  if (w <= 0.0) return 0.0;
  const double a = 0.5 * params_.alpha;
  if (w < w_lo_) return (2.0 / params_.alpha) * std::pow(w, a);
  if (w > w_hi_) {
    const double tail = (2.0 / (params_.d - params_.alpha)) * std::pow(w, -0.5 * (params_.d - params_.alpha));
    return complete_ - tail;
  }
  return table_(std::log(w));
}

double UnitBallGreen::operator()(const Point& x, const Point& y) const {
  const double rx = x.norm(), ry = y.norm();
  if (rx >= 1.0 || ry >= 1.0)
    throw std::invalid_argument("UnitBallGreen: arguments must lie in the open unit ball");
  const double rho = dist(x, y);
  if (rho == 0.0) return kInf;
  const double w = (1.0 - rx * rx) * (1.0 - ry * ry) / (rho * rho);
  return kappa_ * std::pow(rho, params_.alpha - params_.d) * incomplete_factor(w);
}

double ball_green(const UnitBallGreen& gb, const Ball& ball, const Point& x, const Point& y) {
  const auto& p = gb.params();
  const double inv_r = 1.0 / ball.radius;
  const Point xu = inv_r * (x - ball.center);
  const Point yu = inv_r * (y - ball.center);
  return std::pow(ball.radius, p.alpha - p.d) * gb(xu, yu);
}

namespace {

struct DirNode {
  Point dir;
  double weight;  // surface-measure weight on S^{d-1}
};

void orthonormal_frame(const Point& a, Point& b, Point& c) {
  b = Point(3);
  if (std::abs(a[0]) <= std::abs(a[1]) && std::abs(a[0]) <= std::abs(a[2])) {
    b[1] = -a[2];
    b[2] = a[1];
  } else if (std::abs(a[1]) <= std::abs(a[2])) {
    b[0] = -a[2];
    b[2] = a[0];
  } else {
    b[0] = -a[1];
    b[1] = a[0];
  }
  b *= 1.0 / b.norm();
  c = Point(3);
  c[0] = a[1] * b[2] - a[2] * b[1];
  c[1] = a[2] * b[0] - a[0] * b[2];
  c[2] = a[0] * b[1] - a[1] * b[0];
}

// Direction grid on S^{d-1} with polar panels refined toward the axis
// (t = +1), where the companion singular point sits.
std::vector<DirNode> direction_grid(int d, const Point& axis, int n_t, int n_psi,
                                    bool axisymmetric) {
  std::vector<DirNode> out;
  if (d == 1) {
    Point plus(1), minus(1);
    plus[0] = 1.0;
    minus[0] = -1.0;
    out.push_back({plus, 1.0});
    out.push_back({minus, 1.0});
    return out;
  }
  if (d != 3)
    throw std::invalid_argument("ball pair integrals support d in {1, 3}");
  Point b, c;
  orthonormal_frame(axis, b, c);
  const double t_panels[] = {-1.0, 0.0, 0.6, 0.9, 0.99, 1.0};
  const int psi_count = axisymmetric ? 1 : n_psi;
  const double psi_weight = 2.0 * M_PI / psi_count;
  for (int pnl = 0; pnl < 5; ++pnl) {
    const auto nodes = gl_nodes(n_t);
    const auto weights = gl_weights(n_t);
    const double lo = t_panels[pnl], hi = t_panels[pnl + 1];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes[i];
      const double wt = 0.5 * (hi - lo) * weights[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
      for (int j = 0; j < psi_count; ++j) {
        const double psi = 2.0 * M_PI * j / psi_count;
        Point dir = t * axis + (st * std::cos(psi)) * b + (st * std::sin(psi)) * c;
        out.push_back({dir, wt * psi_weight});
      }
    }
  }
  return out;
}

// Distance from p (inside the unit ball) to the sphere along unit dir.
double ray_exit(const Point& p, const Point& dir) {
  const double pd = p.dot(dir);
  return -pd + std::sqrt(std::max(0.0, pd * pd + 1.0 - p.norm_sq()));
}

struct RadialNode {
  double rho;
  double weight;  // includes the d rho quadrature weight only
};

// Nodes for int_0^{rho_max} f(rho) drho where f ~ rho^{p_left} at 0 and
// f ~ (rho_max - rho)^{p_right} at the outer end; interior breaks keep panels
// aligned with known kinks.
std::vector<RadialNode> radial_nodes(double rho_max, double p_left, double p_right,
                                     std::vector<double> breaks, int n_per_panel) {
  std::vector<RadialNode> out;
  if (!(rho_max > 0.0)) return out;
  breaks.push_back(0.5 * rho_max);
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> edges = {0.0};
  for (double br : breaks)
    if (br > 1e-12 * rho_max && br < rho_max * (1.0 - 1e-12) && br > edges.back() * (1.0 + 1e-9))
      edges.push_back(br);
  edges.push_back(rho_max);

  const auto nodes = gl_nodes(n_per_panel);
  const auto weights = gl_weights(n_per_panel);
  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const double lo = edges[seg], hi = edges[seg + 1];
    const bool first = seg == 0, last = seg + 2 == edges.size();
    if (first && p_left != 0.0) {
      // rho = t^{1/q}, q = p_left + 1: weights carry the Jacobian.
      const double q = p_left + 1.0;
      const double T = std::pow(hi - lo, q);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double t = 0.5 * T * (1.0 + nodes[i]);
        if (t <= 0.0) continue;
        const double u = std::pow(t, 1.0 / q);
        out.push_back({lo + u, 0.5 * T * weights[i] * std::pow(t, 1.0 / q - 1.0) / q});
      }
    } else if (last && p_right != 0.0) {
      const double q = p_right + 1.0;
      const double T = std::pow(hi - lo, q);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double t = 0.5 * T * (1.0 + nodes[i]);
        if (t <= 0.0) continue;
        const double u = std::pow(t, 1.0 / q);
        out.push_back({hi - u, 0.5 * T * weights[i] * std::pow(t, 1.0 / q - 1.0) / q});
      }
    } else {
      for (std::size_t i = 0; i < nodes.size(); ++i)
        out.push_back({0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes[i],
                       0.5 * (hi - lo) * weights[i]});
    }
  }
  return out;
}

struct WeightedPoint {
  Point p;
  double factor;  // G_B factor times full volume-element weight
};

// Volume nodes around a singular pole: the stored factor is G_B(pole, node)
// times the full volume-element weight (direction * radial * rho^{d-1}).
std::vector<WeightedPoint> pole_nodes(const UnitBallGreen& gb, const Point& pole,
                                      const Point& other, int n_t, int n_psi, int n_rho,
                                      bool axisymmetric) {
  const auto& params = gb.params();
  const int d = params.d;
  const double D = dist(pole, other);
  Point axis = Point::unit(d, 0);
  if (D > 1e-12) axis = (1.0 / D) * (other - pole);
  std::vector<WeightedPoint> out;
  for (const auto& dir : direction_grid(d, axis, n_t, n_psi, axisymmetric)) {
    const double rho_max = ray_exit(pole, dir.dir);
    std::vector<double> breaks;
    if (D > 1e-12 && D < rho_max) breaks = {0.8 * D, D, std::min(1.25 * D, rho_max * 0.999)};
    for (const auto& rn :
         radial_nodes(rho_max, params.alpha - 1.0, 0.5 * params.alpha, breaks, n_rho)) {
      const Point y = pole + rn.rho * dir.dir;
      const double gbv = gb(pole, y);
      const double vol = dir.weight * rn.weight * std::pow(rn.rho, d - 1);
      out.push_back({y, gbv * vol});
    }
  }
  return out;
}

double smoothstep_far(double s, double delta) {
  if (s >= delta) return 1.0;
  if (s <= 0.5 * delta) return 0.0;
  const double u = (s - 0.5 * delta) / (0.5 * delta);
  return u * u * (3.0 - 2.0 * u);
}

}  // namespace

double ball_pair_integral(const UnitBallGreen& gb, const Point& x, const Point& w,
                          const std::function<double(const Point&, const Point&)>& k,
                          double diag_exponent, int refine_level) {
  const auto& params = gb.params();
  const int d = params.d;
  if (x.norm() >= 1.0 || w.norm() >= 1.0)
    throw std::invalid_argument("ball_pair_integral: x, w must lie in the unit ball");
  if (!(diag_exponent > -static_cast<double>(d)))
    throw std::invalid_argument("ball_pair_integral: kernel not integrable at the diagonal");
  const int lvl = 1 << refine_level;

  // Axisymmetric about the line through the origin when x and w are radial.
  bool axisym = (d == 1);
  if (d == 3) {
    Point cx(3);
    cx[0] = x[1] * w[2] - x[2] * w[1];
    cx[1] = x[2] * w[0] - x[0] * w[2];
    cx[2] = x[0] * w[1] - x[1] * w[0];
    axisym = cx.norm() < 1e-12 * (1.0 + x.norm() * w.norm());
  }

  const int n_t = 4 * lvl, n_psi = 8 * lvl, n_rho = 6 * lvl;
  auto y_nodes = pole_nodes(gb, x, w, n_t, n_psi, n_rho, axisym);
  auto z_nodes = pole_nodes(gb, w, x, n_t, n_psi, n_rho, false);

  const double delta0 = (d == 3) ? 0.5 : 0.25;

  double bulk = 0.0;
  for (const auto& yn : y_nodes) {
    const double delta = std::min(delta0, 0.5 * dist(yn.p, w));
    double inner = 0.0;
    for (const auto& zn : z_nodes) {
      const double s = dist(yn.p, zn.p);
      const double chi = smoothstep_far(s, delta);
      if (chi <= 0.0) continue;
      inner += zn.factor * chi * k(yn.p, zn.p);
    }
    bulk += yn.factor * inner;
  }

  // Near-diagonal tube, integrated exactly in polar coordinates around each
  // outer node. delta <= |y - w| / 2 keeps G_B(., w) smooth on the tube.
  double tube = 0.0;
  const int m_t = 3 * lvl, m_psi = (d == 3) ? 6 * lvl : 1, m_rho = 6 * lvl;
  for (const auto& yn : y_nodes) {
    const double delta = std::min(delta0, 0.5 * dist(yn.p, w));
    if (delta <= 0.0) continue;
    const double Dw = dist(yn.p, w);
    Point axis = Point::unit(d, 0);
    if (Dw > 1e-12) axis = (1.0 / Dw) * (w - yn.p);
    double tube_y = 0.0;
    for (const auto& dir : direction_grid(d, axis, m_t, m_psi, false)) {
      const double rmax = std::min(delta, ray_exit(yn.p, dir.dir));
      if (rmax <= 0.0) continue;
      for (const auto& rn : radial_nodes(rmax, diag_exponent + d - 1, 0.0, {}, m_rho)) {
        const Point z = yn.p + rn.rho * dir.dir;
        const double chi = 1.0 - smoothstep_far(rn.rho, delta);
        if (chi <= 0.0) continue;
        tube_y += dir.weight * rn.weight * std::pow(rn.rho, d - 1) * chi * k(yn.p, z) * gb(z, w);
      }
    }
    tube += yn.factor * tube_y;
  }

  const double denom = gb(x, w);
  const double value = (bulk + tube) / denom;
  if (!std::isfinite(value))
    throw NumericFailure("ball_pair_integral: non-finite result", bulk + tube, kInf);
  return value;
}

double three_g_integral(const UnitBallGreen& gb, const Point& x, const Point& w, double beta,
                        int refine_level) {
  const auto& params = gb.params();
  if (!(beta > params.alpha)) throw std::invalid_argument("three_g_integral: requires beta > alpha");
  const double p = beta - params.alpha - params.d;
  auto k = [p](const Point& y, const Point& z) { return std::pow(dist(y, z), p); };
  return ball_pair_integral(gb, x, w, k, p, refine_level);
}

double c1_constant(const UnitBallGreen& gb, double beta, int refine_level,
                   std::vector<C1GridEntry>* table) {
  const int d = gb.params().d;
  // On-axis pairs covering near-coincident, mid-range and near-boundary
  // configurations (both regimes of the ratio bound).
  const double xs[] = {0.99, 0.7, 0.5, 0.2, 0.0};
  const double ws[] = {0.98, 0.7, 0.2, -0.5, -0.8};
  double best = 0.0;
  for (double xv : xs) {
    for (double wv : ws) {
      Point x = Point::zero(d), w = Point::zero(d);
      x[0] = xv;
      w[0] = wv;
      if (dist(x, w) < 1e-6) continue;
      const double v = three_g_integral(gb, x, w, beta, refine_level);
      if (table) table->push_back({x, w, v});
      best = std::max(best, v);
    }
  }
  return best;
}

double r0_of(double C, const UnitBallGreen& gb, double beta, double eps, int refine_level) {
  if (!(C > 0.0) || !(eps > 0.0)) throw std::invalid_argument("r0_of: need C > 0, eps > 0");
  const double c1 = c1_constant(gb, beta, refine_level);
  return std::pow(eps / (C * c1), 1.0 / beta);
}

double conditioned_expectation(const UnitBallGreen& gb, const Ball& ball, const Point& x,
                               const Point& w, const KernelSpec& F, int refine_level) {
  const auto& params = gb.params();
  if (!ball.contains(x) || !ball.contains(w))
    throw std::invalid_argument("conditioned_expectation: x, w must lie in the ball");
  const double r = ball.radius;
  const double inv_r = 1.0 / r;
  const Point xu = inv_r * (x - ball.center);
  const Point wu = inv_r * (w - ball.center);
  // Scaling to the unit ball leaves no net power of r: the kernel sees the
  // original points, the Levy weight scales as r^{-alpha-d}, the volume as
  // r^{2d} and the G_B-ratio as r^{alpha-d}.
  auto k = [&](const Point& yu, const Point& zu) {
    const Point y = ball.center + r * yu;
    const Point z = ball.center + r * zu;
    const double f = F(y, z);
    if (f == 0.0) return 0.0;
    return params.levy_const * f * std::pow(dist(yu, zu), -params.alpha - params.d);
  };
  const double p = std::min(F.diagonal_exponent, 1e3) - params.alpha - params.d;
  return ball_pair_integral(gb, xu, wu, k, p, refine_level);
}

double ball_green_mass(const UnitBallGreen& gb, const Point& x, const Ball& sub,
                       const QuadratureSpec& quad) {
  (void)quad;
  const auto& params = gb.params();
  const int d = params.d;
  const double D = dist(x, sub.center);
  const bool inside = D < sub.radius;
  Point axis = Point::unit(d, 0);
  if (D > 1e-12) axis = (1.0 / D) * (sub.center - x);
  double total = 0.0;
  for (const auto& dir : direction_grid(d, axis, 8, 12, false)) {
    // Intersection of the ray x + rho dir with the sub-ball.
    const Point q = x - sub.center;
    const double bq = q.dot(dir.dir);
    const double disc = bq * bq - (q.norm_sq() - sub.radius * sub.radius);
    if (disc <= 0.0) continue;
    const double lo = std::max(0.0, -bq - std::sqrt(disc));
    const double hi = -bq + std::sqrt(disc);
    if (hi <= lo) continue;
    if (inside && lo == 0.0) {
      for (const auto& rn : radial_nodes(hi, params.alpha - 1.0, 0.0, {}, 16)) {
        const Point y = x + rn.rho * dir.dir;
        total += dir.weight * rn.weight * std::pow(rn.rho, d - 1) * gb(x, y);
      }
    } else {
      const auto nodes = gl_nodes(24);
      const auto weights = gl_weights(24);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes[i];
        const Point y = x + rho * dir.dir;
        total += dir.weight * 0.5 * (hi - lo) * weights[i] * std::pow(rho, d - 1) * gb(x, y);
      }
    }
  }
  return total;
}

double poisson_constant(const StableParams& params) {
  return std::tgamma(0.5 * params.d) * std::pow(M_PI, -0.5 * params.d - 1.0) *
         std::sin(0.5 * M_PI * params.alpha);
}

double poisson_constant_printed(const StableParams& params) {
  return std::pow(M_PI, 1.0 + 0.5 * params.d) * std::tgamma(0.5 * params.d) *
         std::sin(0.5 * M_PI * params.alpha);
}

double poisson_kernel(const StableParams& params, double r, const Point& x, const Point& z) {
  if (!(x.norm() < r) || !(z.norm() > r))
    throw std::invalid_argument("poisson_kernel: requires |x| < r < |z|");
  const double num = r * r - x.norm_sq();
  const double den = z.norm_sq() - r * r;
  return poisson_constant(params) * std::pow(num / den, 0.5 * params.alpha) *
         std::pow(dist(x, z), -static_cast<double>(params.d));
}

double poisson_mass(const StableParams& params, double r, const Point& x, double lo, double hi,
                    const QuadratureSpec& quad) {
  if (!(x.norm() < r)) throw std::invalid_argument("poisson_mass: requires |x| < r");
  lo = std::max(lo, r);
  const int d = params.d;
  const double rx = x.norm();
  auto mean_kernel = [&](double rho) {
    // Mean over directions of |x - rho w|^{-d}.
    auto g = [&](double s) { return std::pow(s, -static_cast<double>(d)); };
    return radial_sphere_mean(d, rx, rho, g);
  };
  auto shell = [&](double rho) {
    return std::pow(rho, d - 1) * std::pow(rho * rho - r * r, -0.5 * params.alpha) *
           mean_kernel(rho);
  };
  const double c0 = poisson_constant(params) * sphere_surface(d) *
                    std::pow(r * r - rx * rx, 0.5 * params.alpha);
  double total = 0.0, err = 0.0;
  double tail_start = std::max(2.0 * r, lo);
  if (lo < tail_start) {
    if (lo == r) {
      // shell * (rho - r)^{alpha/2} with the singular factor cancelled
      // algebraically: (rho^2-r^2)^{-a/2} (rho-r)^{a/2} = (rho+r)^{-a/2}.
      auto phi = [&](double u) {
        const double rho = r + u;
        return std::pow(rho, d - 1) * std::pow(rho + r, -0.5 * params.alpha) *
               mean_kernel(rho);
      };
      auto q = integrate_power_endpoint(phi, -0.5 * params.alpha, tail_start - r, quad.tol,
                                        quad.max_refine + 6);
      total += q.value;
      err += q.error;
    } else {
      auto q = integrate_adaptive(shell, lo, tail_start, quad.tol, quad.max_refine + 6);
      total += q.value;
      err += q.error;
    }
  }
  if (std::isfinite(hi)) {
    if (hi > tail_start) {
      auto q = integrate_adaptive(shell, tail_start, hi, quad.tol, quad.max_refine + 6);
      total += q.value;
      err += q.error;
    }
    if (hi < tail_start) {
      // Entire range below tail_start was integrated; subtract the overshoot.
      auto q = integrate_adaptive(shell, hi, tail_start, quad.tol, quad.max_refine + 6);
      total -= q.value;
      err += q.error;
    }
  } else {
    auto q = integrate_tail_geometric(shell, tail_start, quad.tol);
    total += q.value;
    err += q.error;
  }
  return c0 * total;
}

double poisson_green_average(const StableParams& params, double r, const Point& w,
                             const QuadratureSpec& quad) {
  const int d = params.d;
  const double W = w.norm();
  const double c = params.green_constant();
  auto mean_green = [&](double rho) {
    auto g = [&](double s) { return c * std::pow(std::max(s, 1e-300), params.alpha - d); };
    return radial_sphere_mean(d, W, rho, g);
  };
  auto shell = [&](double rho) {
    return std::pow(rho, d - 1) * std::pow(rho * rho - r * r, -0.5 * params.alpha) *
           std::pow(rho, -static_cast<double>(d)) * mean_green(rho);
  };
  const double c0 = poisson_constant(params) * sphere_surface(d) * std::pow(r, params.alpha);
  // Panels shrink toward the spherical-mean singularity at rho = |w|.
  std::vector<double> edges = {r, 2.0 * r};
  for (double f : {0.7, 0.95, 0.995, 1.005, 1.05, 1.3})
    if (W * f > 2.0 * r) edges.push_back(W * f);
  std::sort(edges.begin(), edges.end());
  double total = 0.0;
  // Near-sphere panel: the (rho-r)^{-alpha/2} singularity cancelled
  // algebraically against the substitution weight.
  auto phi = [&](double u) {
    const double rho = r + u;
    return std::pow(rho, d - 1) * std::pow(rho + r, -0.5 * params.alpha) *
           std::pow(rho, -static_cast<double>(d)) * mean_green(rho);
  };
  total += integrate_power_endpoint(phi, -0.5 * params.alpha, edges[1] - r, quad.tol,
                                    quad.max_refine + 4)
               .value;
  for (std::size_t i = 1; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    if (d == 1 && lo < W && W < hi) {
      // In d=1 the two-point mean carries a |rho - W|^{alpha-1} factor;
      // integrate both sides of W with the matching substitution.
      const double pw = params.alpha - 1.0;
      auto left = [&](double u) { return shell(W - u) * std::pow(u, -pw); };
      auto right = [&](double u) { return shell(W + u) * std::pow(u, -pw); };
      total += integrate_power_endpoint(left, pw, W - lo, quad.tol, quad.max_refine + 4).value;
      total += integrate_power_endpoint(right, pw, hi - W, quad.tol, quad.max_refine + 4).value;
    } else {
      total += integrate_adaptive(shell, lo, hi, quad.tol, quad.max_refine).value;
    }
  }
  total += integrate_tail_geometric(shell, edges.back(), quad.tol).value;
  return c0 * total;
}

}  // namespace stabletilt
