#include "stabletilt/functionals.hpp"

#include <cmath>

namespace stabletilt {

namespace {

// Integral of h along a path segment [t0, t1] from p0 to p1. Drop segments
// are constant at p0; BrownianMatch segments are sampled on a uniform
// sub-grid along the chord with the trapezoid rule.
double segment_compensator(const JumpPath& path, const FieldAccessor& h, const Point& p0,
                           const Point& p1, double t0, double t1, double mesh) {
  const double dt = t1 - t0;
  if (dt <= 0.0) return 0.0;
  if (path.policy == SmallJumpPolicy::Drop) return h(p0) * dt;
  const int n = std::max(1, static_cast<int>(std::ceil(dt / mesh)));
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    const double lam = static_cast<double>(i) / n;
    sum += w * h(p0 + lam * (p1 - p0));
  }
  return sum * dt / n;
}

double compensator_mesh(const JumpPath& path) {
  if (path.events.empty()) return 0.01;
  const double mean_gap = path.horizon / static_cast<double>(path.events.size());
  return std::min(0.01, mean_gap / 10.0);
}

}  // namespace

FunctionalSeries accumulate(const JumpPath& path, const KernelSpec& F,
                            const FieldAccessor& h_eval) {
  FunctionalSeries s;
  s.horizon = path.horizon;
  const double mesh = compensator_mesh(path);
  double a = 0.0, at = 0.0, qv = 0.0, comp = 0.0, corr = 0.0;  // corr: sum(log(1+F) - F)
  Point pos = path.start;
  double t = 0.0;
  s.times.reserve(path.events.size());
  for (const auto& e : path.events) {
    const double f = F(e.pre, e.post);
    if (f <= -1.0)
      throw InvariantViolation("accumulate: kernel value <= -1 along path (broken KernelSpec)");
    comp += segment_compensator(path, h_eval, pos, e.pre, t, e.time, mesh);
    a += f;
    at += -std::expm1(-f);  // 1 - e^{-f}
    qv += f * f;
    corr += std::log1p(f) - f;
    s.times.push_back(e.time);
    s.A.push_back(a);
    s.A_tilde.push_back(at);
    s.QV.push_back(qv);
    s.compensator.push_back(comp);
    s.M.push_back(a - comp);
    s.logL.push_back(a - comp + corr);
    pos = e.post;
    t = e.time;
  }
  comp += segment_compensator(path, h_eval, pos, path.end, t, path.horizon, mesh);
  s.A_T = a;
  s.A_tilde_T = at;
  s.QV_T = qv;
  s.compensator_T = comp;
  s.M_T = a - comp;
  s.logL_T = a - comp + corr;
  return s;
}

DoleansPairReport doleans_exponential_pair_check(const JumpPath& path, const KernelSpec& F,
                                                 const FieldAccessor& h_eval) {
  // Terminal compensator, shared by M and -M.
  const FunctionalSeries s = accumulate(path, F, h_eval);
  double log_em = s.A_T - s.compensator_T;
  double log_emm = -(s.A_T - s.compensator_T);
  double log_emqv = 0.0;
  for (const auto& e : path.events) {
    const double f = F(e.pre, e.post);
    if (std::abs(f) >= 1.0)
      throw std::invalid_argument("doleans_exponential_pair_check: requires |F| < 1");
    log_em += std::log1p(f) - f;
    log_emm += std::log1p(-f) + f;
    log_emqv += std::log1p(-f * f);
  }
  DoleansPairReport r;
  r.log_em = log_em;
  r.log_emm = log_emm;
  r.log_emqv = log_emqv;
  r.identity_error =
      std::abs(log_em + log_emm - log_emqv) / std::max(1.0, std::abs(log_emqv));
  return r;
}

InverseDensityReport inverse_density_check(const JumpPath& path, const KernelSpec& F,
                                           const FieldAccessor& h_eval) {
  const FunctionalSeries s = accumulate(path, F, h_eval);
  double jump_part = 0.0, jump_part_inv = 0.0;
  for (const auto& e : path.events) {
    const double f = F(e.pre, e.post);
    if (f <= -1.0) throw InvariantViolation("inverse_density_check: kernel value <= -1");
    const double f1 = -f / (1.0 + f);
    jump_part += std::log1p(f);
    jump_part_inv += std::log1p(f1);
  }
  InverseDensityReport r;
  // log L^F = sum log(1+F) - comp; the tilted compensator of F1 against
  // (1+F) N equals -comp because F1 (1+F) = -F.
  r.log_l = jump_part - s.compensator_T;
  r.log_l_inverse = jump_part_inv + s.compensator_T;
  r.identity_error = std::abs(r.log_l + r.log_l_inverse);
  return r;
}

SequenceEquivalence sequence_equivalence_check(const std::vector<double>& a) {
  SequenceEquivalence out;
  for (double v : a) {
    if (v <= -1.0)
      throw std::invalid_argument("sequence_equivalence_check: requires a_n > -1");
    out.sumsq += v * v;
    const double r = v / (1.0 + v);
    out.sumsq_ratio += r * r;
    out.log_product += std::log1p(v) - 2.0 * std::log1p(0.5 * v);
  }
  out.product = std::exp(out.log_product);
  return out;
}

}  // namespace stabletilt
