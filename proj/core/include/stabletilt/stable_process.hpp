#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "stabletilt/common.hpp"
#include "stabletilt/params.hpp"
#include "stabletilt/rng.hpp"
#include "stabletilt/stats.hpp"

namespace stabletilt {

/// How sub-cutoff jumps are treated: dropped entirely, or replaced by
/// Brownian motion matching their variance.
enum class SmallJumpPolicy { Drop, BrownianMatch };

struct JumpEvent {
  double time = 0.0;
  Point pre;   // X_{t-}
  Point post;  // X_t
};

/// A resolved trajectory: initial point, ordered jump events with magnitude
/// above the cutoff, and the terminal position at the horizon. Under Drop the
/// path is constant between jumps; under BrownianMatch the recorded pre/post
/// points include the accumulated Gaussian motion and intermediate positions
/// are not reconstructible from the record.
struct JumpPath {
  Point start;
  double horizon = 0.0;
  double cutoff = 0.0;
  SmallJumpPolicy policy = SmallJumpPolicy::Drop;
  std::uint64_t seed = 0;
  std::vector<JumpEvent> events;
  Point end;

  /// Position at time t for Drop-policy paths (piecewise constant).
  Point position_at(double t) const;
};

/// One-sided stable variate with Laplace transform exp(-t * lambda^rho),
/// 0 < rho < 1, via the Kanter representation.
double sample_subordinator(double rho, double t, RngStream& rng);

/// Uniform direction on S^{d-1}.
Point sample_sphere(int d, RngStream& rng);

/// Exact draw of X_t - X_0 by Gaussian subordination: sqrt(2 S) Z with S the
/// (alpha/2)-subordinator at time t.
Point sample_increment(const StableParams& params, double t, RngStream& rng);

/// Incremental jump-path simulator. Events above the cutoff arrive at rate
/// Lambda(cutoff); magnitudes are Pareto(alpha) above the cutoff and
/// directions uniform. advance_to generates events up to T and leaves the
/// state at T, so a single trajectory can be inspected at a doubling sequence
/// of horizons.
class PathSim {
 public:
  PathSim(const StableParams& params, Point start, double cutoff, SmallJumpPolicy policy,
          RngStream rng);

  template <class OnEvent>
  void advance_to(double T, OnEvent&& on_event) {
    while (next_jump_ <= T) {
      Point pre = pos_;
      if (policy_ == SmallJumpPolicy::BrownianMatch)
        add_gaussian(pre, next_jump_ - time_);
      const double r = cutoff_ * std::pow(rng_.uniform01(), -1.0 / params_.alpha);
      Point post = pre + r * sample_sphere(params_.d, rng_);
      on_event(next_jump_, pre, post);
      pos_ = post;
      time_ = next_jump_;
      next_jump_ += rng_.exponential() / rate_;
    }
    if (policy_ == SmallJumpPolicy::BrownianMatch && T > time_) add_gaussian(pos_, T - time_);
    time_ = T;
  }

  void advance_to(double T) {
    advance_to(T, [](double, const Point&, const Point&) {});
  }

  const Point& position() const { return pos_; }
  double time() const { return time_; }
  const StableParams& params() const { return params_; }

 private:
  void add_gaussian(Point& p, double dt);

  StableParams params_;
  double cutoff_;
  SmallJumpPolicy policy_;
  RngStream rng_;
  Point pos_;
  double time_ = 0.0;
  double rate_;
  double var_rate_;
  double next_jump_;
};

/// Samples a full path on [0, horizon] with the stream derived from
/// (master_seed, path_index).
JumpPath sample_jump_path(const StableParams& params, const Point& start, double horizon,
                          double cutoff, SmallJumpPolicy policy, std::uint64_t master_seed,
                          std::uint64_t path_index);

struct AllSpace {};
struct Ball {
  Point center;
  double radius;
  bool contains(const Point& p) const { return dist(p, center) < radius; }
};
struct Annulus {
  Point center;
  double inner, outer;
  bool contains(const Point& p) const {
    const double r = dist(p, center);
    return r > inner && r < outer;
  }
};
using Region = std::variant<AllSpace, Ball, Annulus>;

bool region_contains(const Region& region, const Point& p);

struct ExitData {
  std::optional<double> tau;  // empty: no exit before the horizon
  Point location_pre;         // X_{tau-}
  Point location_post;        // X_tau
};

/// First exit of a recorded path from a region containing its start.
ExitData exit_data(const JumpPath& path, const Region& region);

/// Monte Carlo estimate of P_x(T_B < horizon) for a target ball not
/// containing x. Monotone in the horizon; a lower bound of P_x(T_B < inf).
McEstimate hitting_prob_estimate(const StableParams& params, const Point& x, const Ball& target,
                                 double horizon, int n_paths, double cutoff,
                                 std::uint64_t master_seed);

}  // namespace stabletilt
