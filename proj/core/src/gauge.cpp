#include "stabletilt/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "stabletilt/parallel.hpp"

namespace stabletilt {

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Lockstep doubling driver: all paths advance checkpoint by checkpoint and a
// visitor inspects per-path state after each checkpoint.
struct DoublingDriver {
  const StableParams& params;
  const KernelSpec& F;
  Point start;
  GaugeRunConfig cfg;

  // visit(k, horizon, A_values, positions) after checkpoint k.
  template <class Visit>
  void run(Visit&& visit) {
    const std::size_t n = static_cast<std::size_t>(cfg.n_paths);
    std::vector<PathSim> sims;
    sims.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      sims.emplace_back(params, start, cfg.cutoff, SmallJumpPolicy::Drop,
                        RngStream(cfg.master_seed, i));
    std::vector<double> A(n, 0.0);
    std::vector<Point> pos(n, start);
    for (int k = 0; k <= cfg.max_doublings; ++k) {
      const double T = cfg.base_horizon * std::pow(2.0, k);
      parallel_for(n, [&](std::size_t i) {
        sims[i].advance_to(T, [&](double, const Point& pre, const Point& post) {
          const double f = F(pre, post);
          if (f <= -1.0) throw InvariantViolation("gauge: kernel value <= -1 along path");
          A[i] += f;
        });
        pos[i] = sims[i].position();
      });
      if (!visit(k, T, A, pos)) break;
    }
  }
};

}  // namespace

GaugeEstimate estimate_u(const StableParams& params, const KernelSpec& F, const Point& x,
                         const GaugeRunConfig& cfg) {
  if (F.lower_bound < 0.0) throw std::invalid_argument("estimate_u: requires F >= 0");
  GaugeEstimate out;
  out.x = x;
  const std::size_t n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<double> prev_a(n, 0.0), final_a(n, 0.0);
  double tail_flag = 1.0, horizon_used = cfg.base_horizon;
  DoublingDriver driver{params, F, x, cfg};
  driver.run([&](int k, double T, const std::vector<double>& A, const std::vector<Point>&) {
    if (k > 0) {
      int unflat = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (A[i] - prev_a[i] >= cfg.flat_tol * std::max(1.0, A[i])) ++unflat;
      tail_flag = static_cast<double>(unflat) / static_cast<double>(n);
      horizon_used = T;
      final_a = A;
      if (tail_flag <= 0.05) return false;  // flat on 95% of paths
    } else {
      final_a = A;
    }
    prev_a = A;
    return true;
  });
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = std::exp(-final_a[i]);
  out.u_hat = make_estimate(m);
  out.horizon_used = horizon_used;
  out.tail_flag = tail_flag;
  return out;
}

RadialGauge RadialGauge::build(const StableParams& params, const KernelSpec& F,
                               const std::vector<double>& radii, const GaugeRunConfig& cfg) {
  RadialGauge g;
  std::vector<double> us, vs;
  for (double r : radii) {
    Point x = Point::unit(params.d, 0);
    x *= r;
    g.grid_.push_back(estimate_u(params, F, x, cfg));
    us.push_back(std::log1p(r));
    vs.push_back(g.grid_.back().u_hat.mean);
  }
  g.interp_ = Pchip(us, vs);
  g.r_max_ = radii.back();
  // Tail: 1 - u ~ coeff r^{-q} from the last two grid points.
  const std::size_t n = vs.size();
  const double d1 = 1.0 - vs[n - 2], d2 = 1.0 - vs[n - 1];
  if (d1 > 1e-12 && d2 > 1e-12 && d2 < d1) {
    g.tail_exponent_ = (std::log(d1) - std::log(d2)) /
                       (std::log(radii[n - 1]) - std::log(radii[n - 2]));
    g.tail_coeff_ = d2 * std::pow(radii[n - 1], g.tail_exponent_);
  }
  // Leave-one-out residual over interior grid points.
  for (std::size_t j = 1; j + 1 < n; ++j) {
    std::vector<double> u2, v2;
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) {
        u2.push_back(us[i]);
        v2.push_back(vs[i]);
      }
    const double fit = Pchip(u2, v2)(us[j]);
    g.residual_ = std::max(g.residual_, std::abs(fit - vs[j]));
  }
  return g;
}

double RadialGauge::operator()(double r) const {
  if (r <= r_max_) return std::clamp(interp_(std::log1p(r)), 0.0, 1.0);
  if (tail_coeff_ > 0.0)
    return std::clamp(1.0 - tail_coeff_ * std::pow(r, -tail_exponent_), 0.0, 1.0);
  return interp_(std::log1p(r));
}

IdentityCheck u_martingale_check(const StableParams& params, const KernelSpec& F,
                                 const RadialGauge& u, const Point& x, double t,
                                 const GaugeRunConfig& cfg) {
  IdentityCheck out;
  const GaugeEstimate direct = estimate_u(params, F, x, cfg);
  const std::size_t n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<double> vals(n);
  parallel_for(n, [&](std::size_t i) {
    // Offset stream index so the outer run is independent of the direct one.
    PathSim sim(params, x, cfg.cutoff, SmallJumpPolicy::Drop,
                RngStream(cfg.master_seed ^ 0x9e3779b97f4a7c15ULL, i));
    double a = 0.0;
    sim.advance_to(t, [&](double, const Point& pre, const Point& post) { a += F(pre, post); });
    vals[i] = u(sim.position()) * std::exp(-a);
  });
  const McEstimate nested = make_estimate(vals);
  out.lhs = direct.u_hat.mean;
  out.lhs_err = direct.u_hat.std_err;
  out.rhs = nested.mean;
  out.rhs_err = nested.std_err;
  out.budget = 3.0 * std::sqrt(out.lhs_err * out.lhs_err + out.rhs_err * out.rhs_err) +
               u.residual() + direct.tail_flag * 0.05;
  out.pass = std::abs(out.lhs - out.rhs) <= out.budget;
  return out;
}

IdentityCheck u_integral_identity_check(const StableParams& params, const KernelSpec& F,
                                        const RadialGauge& u, const Point& x,
                                        const GaugeRunConfig& cfg) {
  IdentityCheck out;
  const GaugeEstimate direct = estimate_u(params, F, x, cfg);
  const std::size_t n = static_cast<std::size_t>(cfg.n_paths);
  const double T = direct.horizon_used;
  std::vector<double> vals(n);
  parallel_for(n, [&](std::size_t i) {
    PathSim sim(params, x, cfg.cutoff, SmallJumpPolicy::Drop,
                RngStream(cfg.master_seed ^ 0x517cc1b727220a95ULL, i));
    double s = 0.0;
    sim.advance_to(T, [&](double, const Point& pre, const Point& post) {
      s += u(post) * -std::expm1(-F(pre, post));
    });
    vals[i] = s;
  });
  const McEstimate sum = make_estimate(vals);
  out.lhs = direct.u_hat.mean;
  out.lhs_err = direct.u_hat.std_err;
  out.rhs = 1.0 - sum.mean;
  out.rhs_err = sum.std_err;
  out.budget = 3.0 * std::sqrt(out.lhs_err * out.lhs_err + out.rhs_err * out.rhs_err) +
               u.residual() + direct.tail_flag * 0.05;
  out.pass = std::abs(out.lhs - out.rhs) <= out.budget;
  return out;
}

LimitCheckReport u_limit_check(const StableParams& params, const KernelSpec& F,
                               const RadialGauge& u, const Point& x, double delta,
                               const GaugeRunConfig& cfg) {
  LimitCheckReport rep;
  rep.delta = delta;
  const std::size_t n = static_cast<std::size_t>(cfg.n_paths);
  DoublingDriver driver{params, F, x, cfg};
  driver.run([&](int, double T, const std::vector<double>&, const std::vector<Point>& pos) {
    int near_one = 0;
    std::vector<double> abs_pos(n);
    for (std::size_t i = 0; i < n; ++i) {
      abs_pos[i] = pos[i].norm();
      if (u(pos[i]) > 1.0 - delta) ++near_one;
    }
    rep.horizons.push_back(T);
    rep.fraction_near_one.push_back(static_cast<double>(near_one) / static_cast<double>(n));
    rep.median_abs_position.push_back(median_of(abs_pos));
    return true;
  });
  return rep;
}

HarnackReport harnack_ratio_check(const StableParams& params, const KernelSpec& F,
                                  const std::vector<double>& scales, const GaugeRunConfig& cfg) {
  HarnackReport rep;
  rep.min_ratio = kInf;
  for (double R : scales) {
    const double radii[] = {2.0 * R, 2.83 * R, 4.0 * R};
    AnnulusRatio ar;
    ar.scale = R;
    ar.u_min = kInf;
    double spread = 0.0;
    for (double r : radii) {
      double ref = -1.0;
      for (int axis = 0; axis < std::min(params.d, 3); ++axis) {
        Point x = Point::unit(params.d, axis);
        x *= (axis % 2 == 0 ? r : -r);
        // Common random numbers: every grid point reuses the same seed.
        const GaugeEstimate e = estimate_u(params, F, x, cfg);
        ar.u_min = std::min(ar.u_min, e.u_hat.mean);
        ar.u_max = std::max(ar.u_max, e.u_hat.mean);
        if (ref < 0.0)
          ref = e.u_hat.mean;
        else if (ref > 0.0)
          spread = std::max(spread, std::abs(e.u_hat.mean - ref) / ref);
      }
    }
    ar.ratio = ar.u_max / std::max(ar.u_min, 1e-300);
    ar.direction_spread = spread;
    rep.annuli.push_back(ar);
    rep.max_ratio = std::max(rep.max_ratio, ar.ratio);
    rep.min_ratio = std::min(rep.min_ratio, ar.ratio);
  }
  return rep;
}

HittingCountReport infinite_hitting_check(const StableParams& params, const Point& x,
                                          const GaugeRunConfig& cfg) {
  HittingCountReport rep;
  const std::size_t n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<PathSim> sims;
  sims.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    sims.emplace_back(params, x, cfg.cutoff, SmallJumpPolicy::Drop,
                      RngStream(cfg.master_seed, i));
  std::vector<std::uint64_t> visited(n, 0);  // bit n: annulus [2^n, 2^{n+1})
  auto mark = [](std::uint64_t& bits, const Point& p) {
    const double r = p.norm();
    if (r < 1.0) return;
    const int idx = std::min(62, static_cast<int>(std::floor(std::log2(r))));
    bits |= (1ULL << idx);
  };
  for (int k = 0; k <= cfg.max_doublings; ++k) {
    const double T = cfg.base_horizon * std::pow(2.0, k);
    parallel_for(n, [&](std::size_t i) {
      sims[i].advance_to(T, [&](double, const Point&, const Point& post) {
        mark(visited[i], post);
      });
    });
    std::vector<double> counts(n), abs_pos(n);
    for (std::size_t i = 0; i < n; ++i) {
      counts[i] = static_cast<double>(__builtin_popcountll(visited[i]));
      abs_pos[i] = sims[i].position().norm();
    }
    rep.horizons.push_back(T);
    rep.median_annuli_visited.push_back(median_of(counts));
    rep.median_abs_position.push_back(median_of(abs_pos));
  }
  return rep;
}

}  // namespace stabletilt
