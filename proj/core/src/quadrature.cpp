#include "stabletilt/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace stabletilt {

namespace {

struct GlTable {
  std::vector<double> nodes, weights;
};

// Legendre roots by Newton iteration on the recurrence; standard construction.
GlTable build_gl(int n) {
  GlTable t;
  t.nodes.resize(static_cast<std::size_t>(n));
  t.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    t.nodes[static_cast<std::size_t>(i)] = x;
    t.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return t;
}

const GlTable& gl_table(int n) {
  static std::map<int, GlTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gl(n)).first;
  return it->second;
}

}  // namespace

std::span<const double> gl_nodes(int n) { return gl_table(n).nodes; }
std::span<const double> gl_weights(int n) { return gl_table(n).weights; }

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n) {
  const auto& t = gl_table(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    s += t.weights[static_cast<std::size_t>(i)] * f(mid + half * t.nodes[static_cast<std::size_t>(i)]);
  return s * half;
}

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth,
                            bool& converged) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    converged = false;
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, converged) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, converged);
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double tol, int max_depth) {
  QuadResult r;
  if (a == b) return r;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double abs_tol = tol * std::max(1.0, std::abs(whole));
  bool converged = true;
  r.value = adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, converged);
  r.error = abs_tol;
  r.converged = converged;
  return r;
}

QuadResult integrate_power_endpoint(const std::function<double(double)>& g, double p, double b,
                                    double tol, int max_depth) {
  if (!(p > -1.0)) throw std::invalid_argument("integrate_power_endpoint: need p > -1");
  if (!(b > 0.0)) return {};
  const double q = p + 1.0;
  // t = rho^q  =>  int_0^b rho^p g(rho) drho = (1/q) int_0^{b^q} g(t^{1/q}) dt
  auto h = [&](double t) { return g(std::pow(t, 1.0 / q)); };
  QuadResult r = integrate_adaptive(h, 0.0, std::pow(b, q), tol, max_depth);
  r.value /= q;
  r.error /= q;
  return r;
}

QuadResult integrate_tail_geometric(const std::function<double(double)>& f, double a, double tol,
                                    int max_panels, int gl_order, int non_decreasing_limit) {
  QuadResult r;
  double lo = a;
  double prev_panel = kInf;
  int non_decreasing = 0;
  for (int k = 0; k < max_panels; ++k) {
    const double hi = 2.0 * lo;
    const double panel = gauss_legendre(f, lo, hi, gl_order);
    r.value += panel;
    const double scale = std::max(1e-300, std::abs(r.value));
    if (std::abs(panel) <= 0.5 * tol * scale) {
      // Bound the remaining tail by a geometric extrapolation of the last ratio.
      const double ratio = (std::abs(prev_panel) > 0) ? std::abs(panel / prev_panel) : 0.5;
      r.error = std::abs(panel) * std::min(ratio, 0.9) / (1.0 - std::min(ratio, 0.9));
      return r;
    }
    if (std::abs(panel) >= std::abs(prev_panel) * 0.999) {
      if (++non_decreasing >= non_decreasing_limit) {
        r.divergent = true;
        r.converged = false;
        r.error = std::abs(panel);
        return r;
      }
    } else {
      non_decreasing = 0;
    }
    prev_panel = panel;
    lo = hi;
  }
  r.converged = false;
  r.error = std::abs(prev_panel);
  return r;
}

}  // namespace stabletilt
