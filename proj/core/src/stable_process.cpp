#include "stabletilt/stable_process.hpp"

#include <cmath>

#include "stabletilt/parallel.hpp"

namespace stabletilt {

Point JumpPath::position_at(double t) const {
  if (policy != SmallJumpPolicy::Drop)
    throw std::invalid_argument("position_at: only Drop paths are piecewise constant");
  Point p = start;
  for (const auto& e : events) {
    if (e.time > t) break;
    p = e.post;
  }
  return p;
}

double sample_subordinator(double rho, double t, RngStream& rng) {
  if (!(rho > 0.0) || !(rho < 1.0))
    throw std::invalid_argument("sample_subordinator: rho must lie in (0, 1)");
  if (!(t > 0.0)) throw std::invalid_argument("sample_subordinator: t must be positive");
  const double u = M_PI * rng.uniform01();
  const double w = rng.exponential();
  // Kanter: A(u) = sin(rho u)^{rho/(1-rho)} sin((1-rho) u) / sin(u)^{1/(1-rho)}
  const double a = std::pow(std::sin(rho * u), rho / (1.0 - rho)) * std::sin((1.0 - rho) * u) /
                   std::pow(std::sin(u), 1.0 / (1.0 - rho));
  return std::pow(a / w, (1.0 - rho) / rho) * std::pow(t, 1.0 / rho);
}

Point sample_sphere(int d, RngStream& rng) {
  Point p(d);
  if (d == 1) {
    p[0] = rng.sign();
    return p;
  }
  double n2 = 0.0;
  do {
    for (int i = 0; i < d; ++i) p[i] = rng.normal();
    n2 = p.norm_sq();
  } while (n2 < 1e-300);
  p *= 1.0 / std::sqrt(n2);
  return p;
}

Point sample_increment(const StableParams& params, double t, RngStream& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("sample_increment: t must be positive");
  const double s = sample_subordinator(0.5 * params.alpha, t, rng);
  const double scale = std::sqrt(2.0 * s);
  Point p(params.d);
  for (int i = 0; i < params.d; ++i) p[i] = scale * rng.normal();
  return p;
}

PathSim::PathSim(const StableParams& params, Point start, double cutoff, SmallJumpPolicy policy,
                 RngStream rng)
    : params_(params),
      cutoff_(cutoff),
      policy_(policy),
      rng_(rng),
      pos_(start),
      rate_(params.jump_rate(cutoff)),
      var_rate_(params.small_jump_variance_rate(cutoff)) {
  if (start.dim() != params.d) throw std::invalid_argument("PathSim: start dimension mismatch");
  next_jump_ = rng_.exponential() / rate_;
}

void PathSim::add_gaussian(Point& p, double dt) {
  const double s = std::sqrt(var_rate_ * dt);
  for (int i = 0; i < params_.d; ++i) p[i] += s * rng_.normal();
}

JumpPath sample_jump_path(const StableParams& params, const Point& start, double horizon,
                          double cutoff, SmallJumpPolicy policy, std::uint64_t master_seed,
                          std::uint64_t path_index) {
  if (!(horizon > 0.0)) throw std::invalid_argument("sample_jump_path: horizon must be positive");
  if (!(cutoff > 0.0)) throw std::invalid_argument("sample_jump_path: cutoff must be positive");
  JumpPath path;
  path.start = start;
  path.horizon = horizon;
  path.cutoff = cutoff;
  path.policy = policy;
  path.seed = master_seed;
  PathSim sim(params, start, cutoff, policy, RngStream(master_seed, path_index));
  sim.advance_to(horizon, [&](double t, const Point& pre, const Point& post) {
    path.events.push_back({t, pre, post});
  });
  path.end = sim.position();
  return path;
}

bool region_contains(const Region& region, const Point& p) {
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, AllSpace>)
          return true;
        else
          return r.contains(p);
      },
      region);
}

ExitData exit_data(const JumpPath& path, const Region& region) {
  if (!region_contains(region, path.start))
    throw std::invalid_argument("exit_data: path start outside region");
  ExitData out;
  out.location_pre = path.start;
  out.location_post = path.start;
  if (std::holds_alternative<AllSpace>(region)) return out;

  Point prev = path.start;
  for (const auto& e : path.events) {
    // Under BrownianMatch a continuous segment can drift out; the segment is
    // only observed at its endpoint, where X_{tau-} = X_tau.
    if (!region_contains(region, e.pre)) {
      out.tau = e.time;
      out.location_pre = e.pre;
      out.location_post = e.pre;
      return out;
    }
    if (!region_contains(region, e.post)) {
      out.tau = e.time;
      out.location_pre = e.pre;
      out.location_post = e.post;
      return out;
    }
    prev = e.post;
  }
  if (!region_contains(region, path.end)) {
    out.tau = path.horizon;
    out.location_pre = path.end;
    out.location_post = path.end;
    return out;
  }
  return out;  // no exit before horizon
}

McEstimate hitting_prob_estimate(const StableParams& params, const Point& x, const Ball& target,
                                 double horizon, int n_paths, double cutoff,
                                 std::uint64_t master_seed) {
  if (target.contains(x))
    throw std::invalid_argument("hitting_prob_estimate: start inside target ball");
  if (!(params.alpha < params.d))
    throw std::invalid_argument("hitting_prob_estimate: requires alpha < d");
  std::vector<double> hits(static_cast<std::size_t>(n_paths), 0.0);
  parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t i) {
    PathSim sim(params, x, cutoff, SmallJumpPolicy::Drop, RngStream(master_seed, i));
    bool hit = false;
    sim.advance_to(horizon, [&](double, const Point&, const Point& post) {
      if (!hit && target.contains(post)) hit = true;
    });
    hits[i] = hit ? 1.0 : 0.0;
  });
  return make_estimate(hits);
}

}  // namespace stabletilt
