#include "stabletilt/girsanov.hpp"

#include <cmath>

#include "stabletilt/parallel.hpp"

namespace stabletilt {

TiltedPathConfig TiltedPathConfig::make(const StableParams& base, KernelSpec F, double cutoff,
                                        double horizon, SmallJumpPolicy policy) {
  TiltedPathConfig cfg;
  cfg.base = base;
  cfg.dominating_bound = 1.0 + F.upper_bound;
  cfg.F = std::move(F);
  cfg.cutoff = cutoff;
  cfg.horizon = horizon;
  cfg.policy = policy;
  if (!(cfg.dominating_bound >= 1.0 + cfg.F.upper_bound))
    throw std::invalid_argument("TiltedPathConfig: dominating_bound < 1 + sup F");
  return cfg;
}

TiltedPathSim::TiltedPathSim(const TiltedPathConfig& cfg, Point start, RngStream rng)
    : cfg_(cfg),
      rng_(rng),
      pos_(start),
      proposal_rate_(cfg.dominating_bound * cfg.base.jump_rate(cfg.cutoff)),
      var_rate_(cfg.base.small_jump_variance_rate(cfg.cutoff)) {
  if (!(cfg.dominating_bound >= 1.0 + cfg.F.upper_bound))
    throw std::invalid_argument("TiltedPathSim: dominating_bound < 1 + sup F");
  next_proposal_ = rng_.exponential() / proposal_rate_;
}

void TiltedPathSim::add_gaussian(Point& p, double dt) {
  const double s = std::sqrt(var_rate_ * dt);
  for (int i = 0; i < cfg_.base.d; ++i) p[i] += s * rng_.normal();
}

JumpPath sample_tilted_path(const TiltedPathConfig& cfg, const Point& start,
                            std::uint64_t master_seed, std::uint64_t path_index) {
  JumpPath path;
  path.start = start;
  path.horizon = cfg.horizon;
  path.cutoff = cfg.cutoff;
  path.policy = cfg.policy;
  path.seed = master_seed;
  TiltedPathSim sim(cfg, start, RngStream(master_seed, path_index));
  sim.advance_to(cfg.horizon, [&](double t, const Point& pre, const Point& post) {
    path.events.push_back({t, pre, post});
  });
  path.end = sim.position();
  return path;
}

const char* to_string(DichotomyVerdict v) {
  switch (v) {
    case DichotomyVerdict::ConvergentAll:
      return "ConvergentAll";
    case DichotomyVerdict::DivergentAll:
      return "DivergentAll";
    case DichotomyVerdict::Mixed:
      return "Mixed";
  }
  return "Mixed";
}

namespace {

// Runs n_paths trajectories (base or tilted) through the doubling horizons,
// accumulating sum g(F) at each checkpoint. out[h][i] = value of path i at
// horizon h.
std::vector<std::vector<double>> jump_sums_at_horizons(
    const StableParams& params, const KernelSpec& F, const Point& x,
    const std::function<double(double)>& g, const std::vector<double>& horizons, int n_paths,
    double cutoff, std::uint64_t master_seed, bool under_tilted) {
  std::vector<std::vector<double>> out(horizons.size(),
                                       std::vector<double>(static_cast<std::size_t>(n_paths)));
  TiltedPathConfig tilt_cfg;
  if (under_tilted)
    tilt_cfg = TiltedPathConfig::make(params, F, cutoff, horizons.back(), SmallJumpPolicy::Drop);
  parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t i) {
    double acc = 0.0;
    auto on_event = [&](double, const Point& pre, const Point& post) { acc += g(F(pre, post)); };
    if (under_tilted) {
      TiltedPathSim sim(tilt_cfg, x, RngStream(master_seed, i));
      for (std::size_t h = 0; h < horizons.size(); ++h) {
        sim.advance_to(horizons[h], on_event);
        out[h][i] = acc;
      }
    } else {
      PathSim sim(params, x, cutoff, SmallJumpPolicy::Drop, RngStream(master_seed, i));
      for (std::size_t h = 0; h < horizons.size(); ++h) {
        sim.advance_to(horizons[h], on_event);
        out[h][i] = acc;
      }
    }
  });
  return out;
}

std::vector<double> doubling_horizons(double base, int doublings) {
  std::vector<double> horizons;
  for (int k = 0; k <= doublings; ++k) horizons.push_back(base * std::pow(2.0, k));
  return horizons;
}

}  // namespace

DichotomyReport dichotomy_diagnostic(const StableParams& params, const KernelSpec& F,
                                     const Point& x, double base_horizon, int n_paths,
                                     int doublings, double cutoff, std::uint64_t master_seed,
                                     double flat_tol, bool under_tilted) {
  if (!(F.lower_bound > -1.0))
    throw std::invalid_argument("dichotomy_diagnostic: requires inf F > -1");
  if (doublings < 1) throw std::invalid_argument("dichotomy_diagnostic: need doublings >= 1");
  DichotomyReport rep;
  rep.kernel = F.name;
  rep.under_tilted = under_tilted;
  rep.flat_tol = flat_tol;
  rep.horizons = doubling_horizons(base_horizon, doublings);
  rep.qv = jump_sums_at_horizons(
      params, F, x, [](double f) { return f * f; }, rep.horizons, n_paths, cutoff, master_seed,
      under_tilted);
  const auto& last = rep.qv.back();
  const auto& prev = rep.qv[rep.qv.size() - 2];
  int flat = 0;
  rep.last_increment.resize(last.size());
  for (std::size_t i = 0; i < last.size(); ++i) {
    rep.last_increment[i] = last[i] - prev[i];
    if (rep.last_increment[i] < flat_tol * std::max(1.0, last[i])) ++flat;
  }
  rep.fraction_flat = static_cast<double>(flat) / static_cast<double>(last.size());
  if (rep.fraction_flat >= 0.95)
    rep.verdict = DichotomyVerdict::ConvergentAll;
  else if (rep.fraction_flat <= 0.05)
    rep.verdict = DichotomyVerdict::DivergentAll;
  else
    rep.verdict = DichotomyVerdict::Mixed;
  return rep;
}

JumpSumEstimate jump_sum_estimate(const StableParams& params, const KernelSpec& F, const Point& x,
                                  PairTransform transform, double base_horizon, int n_paths,
                                  int doublings, double cutoff, std::uint64_t master_seed,
                                  bool under_tilted) {
  JumpSumEstimate est;
  est.horizons = doubling_horizons(base_horizon, doublings);
  const auto sums = jump_sums_at_horizons(
      params, F, x, [&](double f) { return apply_transform(transform, f); }, est.horizons,
      n_paths, cutoff, master_seed, under_tilted);
  for (const auto& row : sums) est.by_horizon.push_back(make_estimate(row));
  est.final = est.by_horizon.back();
  const auto& last = sums.back();
  const auto& prev = sums[sums.size() - 2];
  double inc = 0.0;
  for (std::size_t i = 0; i < last.size(); ++i) inc += last[i] - prev[i];
  est.last_increment_mean = inc / static_cast<double>(last.size());
  return est;
}

EntropyEstimate entropy_base_vs_tilted(const StableParams& params, const KernelSpec& F,
                                       const Point& x, double base_horizon, int n_paths,
                                       int doublings, double cutoff, std::uint64_t master_seed,
                                       const QuadratureSpec& quad) {
  if (!(F.lower_bound > -1.0))
    throw std::invalid_argument("entropy_base_vs_tilted: requires inf F > -1");
  EntropyEstimate out;
  out.pathwise = jump_sum_estimate(params, F, x, PairTransform::EntropyDirect, base_horizon,
                                   n_paths, doublings, cutoff, master_seed, false);
  if (F.ball_count > 0) {
    double gamma_eff = 0.0;
    for (const auto& t : F.tags) {
      if (const auto* p = std::get_if<SparseBallTag>(&t)) gamma_eff = p->gamma;
      if (const auto* p = std::get_if<SqrtSparseBallTag>(&t)) gamma_eff = 2.0 * p->gamma;
    }
    auto balls = sparse_ball_divergence(params, F, gamma_eff, F.ball_count, quad,
                                        PairTransform::EntropyDirect);
    double mx = 0.0, mn = kInf, sum = 0.0;
    for (const auto& b : balls) {
      out.green_ball_contributions.push_back(b.green_contribution);
      mx = std::max(mx, b.green_contribution);
      mn = std::min(mn, b.green_contribution);
      sum += b.green_contribution;
    }
    if (!balls.empty() && mn > 0.25 * mx) {
      // No decay across balls: the full series diverges linearly.
      out.green = kInf;
      out.green_divergent = true;
    } else {
      out.green = sum;
    }
    return out;
  }
  if (!F.is_radial())
    throw std::invalid_argument(
        "entropy_base_vs_tilted: Green route needs radial structure or a sparse-ball kernel");
  RadialField h = RadialField::build(params, F, quad, PairTransform::EntropyDirect);
  auto res = green_potential_radial(
      params, [&](double r) { return h(r); }, h.tail_exponent(), x, quad);
  out.green = res.value;
  out.green_error = res.error;
  out.green_divergent = res.divergent;
  return out;
}

ReverseEntropyEstimate entropy_tilted_vs_base(const StableParams& params, const KernelSpec& F,
                                              const Point& x, double horizon, int n_paths,
                                              double cutoff, std::uint64_t master_seed) {
  if (!(F.lower_bound > -1.0))
    throw std::invalid_argument("entropy_tilted_vs_base: requires inf F > -1");
  const TiltedPathConfig cfg = TiltedPathConfig::make(params, F, cutoff, horizon);
  std::vector<double> vals(static_cast<std::size_t>(n_paths));
  std::vector<double> qvs(static_cast<std::size_t>(n_paths));
  parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t i) {
    TiltedPathSim sim(cfg, x, RngStream(master_seed, i));
    double v = 0.0, q = 0.0;
    sim.advance_to(horizon, [&](double, const Point& pre, const Point& post) {
      const double f = cfg.F(pre, post);
      v += std::log1p(f) - f / (1.0 + f);
      q += f * f;
    });
    vals[i] = v;
    qvs[i] = q;
  });
  ReverseEntropyEstimate out;
  out.value = make_estimate(vals);
  out.qv = make_estimate(qvs);
  // Scalar sandwich of log(1+f) - f/(1+f) against f^2 on [inf F, sup F].
  double lo = kInf, hi = 0.0;
  const double a = F.lower_bound, b = std::max(F.upper_bound, 1e-12);
  for (int i = 0; i <= 1000; ++i) {
    const double f = a + (b - a) * i / 1000.0;
    if (std::abs(f) < 1e-9) continue;
    const double ratio = (std::log1p(f) - f / (1.0 + f)) / (f * f);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  out.sandwich_lo = std::min(lo, 0.5);
  out.sandwich_hi = std::max(hi, 0.5);
  return out;
}

std::vector<BallContribution> sparse_ball_divergence(const StableParams& params,
                                                     const KernelSpec& kernel, double gamma_eff,
                                                     int n_balls, const QuadratureSpec& quad,
                                                     PairTransform transform) {
  if (n_balls == 0) return {};
  const auto geo = sparse_ball_geometry(params, gamma_eff, n_balls);
  const double d_minus_a = params.d - params.alpha;
  std::vector<BallContribution> out(static_cast<std::size_t>(n_balls));

  for (int n = 0; n < n_balls; ++n) {
    const Point c = geo.centers[static_cast<std::size_t>(n)];
    const double rn = geo.radii[static_cast<std::size_t>(n)];
    BallContribution b;
    b.index = n + 1;
    b.center_norm = c.norm();
    b.radius = rn;
    b.hitting_bound = std::pow(rn / c.norm(), d_minus_a);

    auto h_at = [&](const Point& y) {
      return kernel_levy_field(params, kernel, y, quad, transform, 0.0).value;
    };
    if (params.d == 1) {
      auto f = [&](double u) {
        Point y = c;
        y[0] += u;
        return green(params, Point::zero(1), y) * h_at(y);
      };
      b.green_contribution =
          integrate_adaptive(f, -rn, rn, std::max(quad.tol, 1e-4), 10).value;
    } else if (params.d == 3) {
      // Ball-centred cylindrical coordinates (axisymmetric about e1).
      const int np = 20, nq = 14;
      const auto pn = gl_nodes(np);
      const auto pw = gl_weights(np);
      const auto qn = gl_nodes(nq);
      const auto qw = gl_weights(nq);
      std::vector<double> partial(static_cast<std::size_t>(np), 0.0);
      parallel_for(static_cast<std::size_t>(np), [&](std::size_t i) {
        const double p = rn * pn[i];
        const double qmax = std::sqrt(std::max(0.0, rn * rn - p * p));
        double acc = 0.0;
        for (int j = 0; j < nq; ++j) {
          const double q = 0.5 * qmax * (1.0 + qn[j]);
          Point y = c;
          y[0] += p;
          y[1] += q;
          acc += 0.5 * qmax * qw[static_cast<std::size_t>(j)] * 2.0 * M_PI * q *
                 green(params, Point::zero(3), y) * h_at(y);
        }
        partial[i] = rn * pw[i] * acc;
      });
      double total = 0.0;
      for (double v : partial) total += v;
      b.green_contribution = total;
    } else {
      throw std::invalid_argument("sparse_ball_divergence: d must be 1 or 3");
    }
    out[static_cast<std::size_t>(n)] = b;
  }
  return out;
}

}  // namespace stabletilt
