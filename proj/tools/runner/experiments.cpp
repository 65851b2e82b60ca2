#include "runner/experiments.hpp"

#include <chrono>
#include <cmath>

#include "stabletilt/functionals.hpp"
#include "stabletilt/gauge.hpp"
#include "stabletilt/girsanov.hpp"
#include "stabletilt/parallel.hpp"
#include "stabletilt/potential.hpp"
#include "stabletilt/serialize.hpp"

namespace stabletilt::runner {

namespace {

using Clock = std::chrono::steady_clock;

Json base_report(const ExperimentConfig& cfg) {
  Json j;
  j["schema"] = 1;
  j["experiment"] = cfg.experiment;
  j["config"] = to_json(cfg);
  j["master_seed"] = cfg.mc.master_seed;
  return j;
}

void finalize(Json& report, std::vector<CheckItem>& checks, Clock::time_point t0, bool* pass) {
  report["checks"] = checks_json(checks, pass);
  report["pass"] = *pass;
  report["runtime_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
}

McEstimate cf_estimate(const StableParams& p, double t, double xi, int n, std::uint64_t seed) {
  std::vector<double> v(static_cast<std::size_t>(n));
  parallel_for(v.size(), [&](std::size_t i) {
    RngStream g(seed, i);
    Point x = sample_increment(p, t, g);
    v[i] = std::cos(xi * x[0]);
  });
  return make_estimate(v);
}

McEstimate cf_estimate_jump(const StableParams& p, double t, double xi, double cutoff, int n,
                            std::uint64_t seed) {
  std::vector<double> v(static_cast<std::size_t>(n));
  parallel_for(v.size(), [&](std::size_t i) {
    auto path = sample_jump_path(p, Point::zero(p.d), t, cutoff, SmallJumpPolicy::Drop, seed, i);
    v[i] = std::cos(xi * path.end[0]);
  });
  return make_estimate(v);
}

Json dichotomy_json(const DichotomyReport& rep) {
  Json j;
  j["kernel"] = rep.kernel;
  j["under_tilted"] = rep.under_tilted;
  j["horizons"] = rep.horizons;
  j["flat_tol"] = rep.flat_tol;
  j["fraction_flat"] = rep.fraction_flat;
  j["verdict"] = to_string(rep.verdict);
  j["qv_by_horizon"] = rep.qv;  // raw per-path data: verdicts can be re-derived
  j["last_increment"] = rep.last_increment;
  return j;
}

ExperimentResult run_dichotomy(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const auto p = cfg.params();
  const auto F = cfg.make_kernel();
  Json report = base_report(cfg);
  auto base = dichotomy_diagnostic(p, F, Point::zero(p.d), cfg.mc.horizon, cfg.mc.n_paths,
                                   cfg.mc.doublings, cfg.mc.cutoff, cfg.mc.master_seed);
  auto tilted = dichotomy_diagnostic(p, F, Point::zero(p.d), cfg.mc.horizon, cfg.mc.n_paths,
                                     cfg.mc.doublings, cfg.mc.cutoff, cfg.mc.master_seed, 1e-3,
                                     true);
  report["base"] = dichotomy_json(base);
  report["tilted"] = dichotomy_json(tilted);

  std::vector<CheckItem> checks;
  const bool both_definite = base.verdict != DichotomyVerdict::Mixed &&
                             tilted.verdict != DichotomyVerdict::Mixed;
  checks.push_back({"zero_two_law_consistency",
                    !both_definite || base.verdict == tilted.verdict,
                    Json{{"base", to_string(base.verdict)}, {"tilted", to_string(tilted.verdict)}}});
  if (!cfg.expect_verdict.empty())
    checks.push_back({"expected_verdict", cfg.expect_verdict == to_string(base.verdict),
                      Json{{"expected", cfg.expect_verdict}, {"got", to_string(base.verdict)}}});
  if (cfg.dump_paths) {
    std::string lines;
    const int keep = std::min(cfg.mc.n_paths, 50);
    for (int i = 0; i < keep; ++i)
      lines += path_to_jsonl(sample_jump_path(p, Point::zero(p.d), cfg.mc.horizon, cfg.mc.cutoff,
                                              cfg.mc.policy, cfg.mc.master_seed,
                                              static_cast<std::uint64_t>(i))) +
               "\n";
    write_file(cfg.output_dir, "paths.jsonl", lines);
  }
  ExperimentResult res;
  finalize(report, checks, t0, &res.pass);
  res.report = std::move(report);
  return res;
}

ExperimentResult run_entropy(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const auto p = cfg.params();
  const auto F = cfg.make_kernel();
  Json report = base_report(cfg);

  auto direct = entropy_base_vs_tilted(p, F, Point::zero(p.d), cfg.mc.horizon, cfg.mc.n_paths,
                                       cfg.mc.doublings, cfg.mc.cutoff, cfg.mc.master_seed,
                                       cfg.quad);
  Json jd;
  jd["pathwise"] = estimate_json(direct.pathwise.final);
  jd["pathwise_by_horizon"] = Json::array();
  for (std::size_t i = 0; i < direct.pathwise.horizons.size(); ++i)
    jd["pathwise_by_horizon"].push_back(Json{{"horizon", direct.pathwise.horizons[i]},
                                             {"mean", direct.pathwise.by_horizon[i].mean}});
  jd["pathwise_last_increment"] = direct.pathwise.last_increment_mean;
  jd["green"] = direct.green_divergent ? Json("inf") : Json(direct.green);
  jd["green_divergent"] = direct.green_divergent;
  if (!direct.green_ball_contributions.empty())
    jd["green_ball_contributions"] = direct.green_ball_contributions;
  report["entropy_base_vs_tilted"] = jd;

  auto reverse = entropy_tilted_vs_base(p, F, Point::zero(p.d), cfg.mc.horizon, cfg.mc.n_paths,
                                        cfg.mc.cutoff, cfg.mc.master_seed + 1);
  report["entropy_tilted_vs_base"] =
      Json{{"value", estimate_json(reverse.value)},
           {"qv", estimate_json(reverse.qv)},
           {"sandwich", Json{{"lo", reverse.sandwich_lo}, {"hi", reverse.sandwich_hi}}}};

  std::vector<CheckItem> checks;
  checks.push_back({"entropy_nonnegative",
                    direct.pathwise.final.mean >= -3.0 * direct.pathwise.final.std_err &&
                        reverse.value.mean >= -3.0 * reverse.value.std_err,
                    Json{{"pathwise", direct.pathwise.final.mean},
                         {"reverse", reverse.value.mean}}});
  if (direct.green_divergent) {
    // Divergence is a verdict: the pathwise route must keep growing too.
    const bool growing = direct.pathwise.last_increment_mean >
                         3.0 * direct.pathwise.final.std_err / cfg.mc.doublings;
    checks.push_back({"divergent_routes_consistent", growing,
                      Json{{"last_increment", direct.pathwise.last_increment_mean}}});
  } else {
    const double tol = 3.0 * direct.pathwise.final.std_err +
                       2.0 * std::abs(direct.pathwise.last_increment_mean) +
                       std::max(direct.green_error, cfg.quad.tol);
    checks.push_back({"pathwise_matches_green",
                      std::abs(direct.pathwise.final.mean - direct.green) <= tol,
                      Json{{"pathwise", direct.pathwise.final.mean},
                           {"green", direct.green},
                           {"tolerance", tol}}});
  }
  const double cse = combined_std_err(reverse.value, reverse.qv);
  checks.push_back(
      {"reverse_entropy_sandwich",
       reverse.value.mean >= reverse.sandwich_lo * reverse.qv.mean - 3.0 * cse &&
           reverse.value.mean <= reverse.sandwich_hi * reverse.qv.mean + 3.0 * cse,
       Json{{"value", reverse.value.mean},
            {"lo", reverse.sandwich_lo * reverse.qv.mean},
            {"hi", reverse.sandwich_hi * reverse.qv.mean}}});

  ExperimentResult res;
  finalize(report, checks, t0, &res.pass);
  res.report = std::move(report);
  return res;
}

ExperimentResult run_counterexample(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const auto p = cfg.params();
  const auto F = cfg.make_kernel();
  if (F.ball_count == 0)
    throw std::invalid_argument("Counterexample experiment needs a sparse-ball kernel");
  Json report = base_report(cfg);

  const bool sqrt_family = F.name == "sparse_ball_sqrt";
  const double gamma_eff = sqrt_family ? 2.0 * cfg.kernel.gamma : cfg.kernel.gamma;
  const auto transform = sqrt_family ? PairTransform::EntropyDirect : PairTransform::Identity;
  auto balls = sparse_ball_divergence(p, F, gamma_eff, F.ball_count, cfg.quad, transform);

  Json jballs = Json::array();
  double bc_sum = 0.0, c_min = kInf, c_max = 0.0;
  for (const auto& b : balls) {
    bc_sum += b.hitting_bound;
    c_min = std::min(c_min, b.green_contribution);
    c_max = std::max(c_max, b.green_contribution);
    jballs.push_back(Json{{"n", b.index},
                          {"center_norm", b.center_norm},
                          {"radius", b.radius},
                          {"hitting_bound", b.hitting_bound},
                          {"green_contribution", b.green_contribution}});
  }
  report["balls"] = jballs;
  report["borel_cantelli_sum"] = bc_sum;
  report["transform"] = sqrt_family ? "entropy" : "identity";

  // Monte Carlo hitting probabilities for the reachable balls.
  const auto geo = sparse_ball_geometry(p, gamma_eff, F.ball_count);
  Json jhits = Json::array();
  bool hits_ok = true;
  for (int n = 0; n < std::min(F.ball_count, 3); ++n) {
    Ball target{geo.centers[static_cast<std::size_t>(n)], geo.radii[static_cast<std::size_t>(n)]};
    auto est = hitting_prob_estimate(p, Point::zero(p.d), target, cfg.mc.horizon, cfg.mc.n_paths,
                                     cfg.mc.cutoff, cfg.mc.master_seed + static_cast<unsigned>(n));
    const double bound = balls[static_cast<std::size_t>(n)].hitting_bound;
    hits_ok = hits_ok && est.mean <= bound + 3.0 * est.std_err;
    jhits.push_back(Json{{"n", n + 1}, {"estimate", estimate_json(est)}, {"bound", bound}});
  }
  report["hitting_mc"] = jhits;

  std::vector<CheckItem> checks;
  checks.push_back({"contributions_bounded_below", !balls.empty() && c_min > 0.25 * c_max,
                    Json{{"min", c_min}, {"max", c_max}}});
  checks.push_back({"hitting_respects_bounds", hits_ok, Json{}});
  ExperimentResult res;
  finalize(report, checks, t0, &res.pass);
  res.report = std::move(report);
  return res;
}

ExperimentResult run_harnack(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const auto p = cfg.params();
  const auto F = cfg.make_kernel();
  Json report = base_report(cfg);
  GaugeRunConfig gcfg;
  gcfg.n_paths = cfg.mc.n_paths;
  gcfg.base_horizon = cfg.mc.horizon;
  gcfg.max_doublings = cfg.mc.doublings;
  gcfg.cutoff = cfg.mc.cutoff;
  gcfg.master_seed = cfg.mc.master_seed;
  auto rep = harnack_ratio_check(p, F, {1.0, 2.0, 4.0, 8.0}, gcfg);
  Json annuli = Json::array();
  for (const auto& a : rep.annuli)
    annuli.push_back(Json{{"scale", a.scale},
                          {"u_min", a.u_min},
                          {"u_max", a.u_max},
                          {"ratio", a.ratio},
                          {"direction_spread", a.direction_spread}});
  report["annuli"] = annuli;
  report["max_ratio"] = rep.max_ratio;
  report["min_ratio"] = rep.min_ratio;
  std::vector<CheckItem> checks;
  checks.push_back({"single_constant_across_scales", rep.max_ratio < 2.0 * rep.min_ratio,
                    Json{{"max", rep.max_ratio}, {"min", rep.min_ratio}}});
  ExperimentResult res;
  finalize(report, checks, t0, &res.pass);
  res.report = std::move(report);
  return res;
}

ExperimentResult run_gauge(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const auto p = cfg.params();
  const auto F = cfg.make_kernel();
  Json report = base_report(cfg);
  GaugeRunConfig gcfg;
  gcfg.n_paths = cfg.mc.n_paths;
  gcfg.base_horizon = cfg.mc.horizon;
  gcfg.max_doublings = cfg.mc.doublings;
  gcfg.cutoff = cfg.mc.cutoff;
  gcfg.master_seed = cfg.mc.master_seed;

  const std::vector<double> radii = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  auto rg = RadialGauge::build(p, F, radii, gcfg);
  CsvTable table;
  table.header = {"radius", "u_hat", "std_err", "tail_flag"};
  Json jgrid = Json::array();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const auto& e = rg.grid()[i];
    table.rows.push_back({radii[i], e.u_hat.mean, e.u_hat.std_err, e.tail_flag});
    jgrid.push_back(Json{{"radius", radii[i]},
                         {"u_hat", estimate_json(e.u_hat)},
                         {"horizon_used", e.horizon_used},
                         {"tail_flag", e.tail_flag}});
  }
  write_file(cfg.output_dir, "gauge_table.csv", table.to_string());
  report["grid"] = jgrid;
  report["interpolant_residual"] = rg.residual();

  auto mc = u_martingale_check(p, F, rg, Point::zero(p.d), 1.0, gcfg);
  auto ic = u_integral_identity_check(p, F, rg, Point::zero(p.d), gcfg);
  auto lc = u_limit_check(p, F, rg, Point::zero(p.d), 0.05, gcfg);
  report["martingale_identity"] =
      Json{{"lhs", mc.lhs}, {"rhs", mc.rhs}, {"budget", mc.budget}, {"pass", mc.pass}};
  report["integral_identity"] =
      Json{{"lhs", ic.lhs}, {"rhs", ic.rhs}, {"budget", ic.budget}, {"pass", ic.pass}};
  report["limit_check"] = Json{{"horizons", lc.horizons},
                               {"fraction_near_one", lc.fraction_near_one},
                               {"median_abs_position", lc.median_abs_position}};

  QuadratureSpec q = cfg.quad;
  auto h0 = RadialField::build(p, F, q, PairTransform::Identity);
  auto gh = green_potential_radial(p, [&](double r) { return h0(r); }, h0.tail_exponent(),
                                   Point::zero(p.d), q);
  const auto& u0 = rg.grid()[0];
  report["jensen"] = Json{{"green_mean", gh.divergent ? Json("inf") : Json(gh.value)},
                          {"lower_bound", gh.divergent ? 0.0 : std::exp(-gh.value)},
                          {"u0", u0.u_hat.mean}};

  std::vector<CheckItem> checks;
  checks.push_back({"martingale_identity", mc.pass, Json{}});
  checks.push_back({"integral_identity", ic.pass, Json{}});
  checks.push_back({"limit_fraction_grows",
                    lc.fraction_near_one.back() > 0.9 &&
                        lc.fraction_near_one.back() >= lc.fraction_near_one.front(),
                    Json{{"final", lc.fraction_near_one.back()}}});
  checks.push_back({"jensen_lower_bound",
                    gh.divergent || u0.u_hat.mean >=
                                        std::exp(-gh.value) - 3.0 * u0.u_hat.std_err,
                    Json{{"u0", u0.u_hat.mean},
                         {"bound", gh.divergent ? 0.0 : std::exp(-gh.value)}}});
  ExperimentResult res;
  finalize(report, checks, t0, &res.pass);
  res.report = std::move(report);
  return res;
}

ExperimentResult run_tables(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const auto p = cfg.params();
  Json report = base_report(cfg);
  UnitBallGreen gb(p);
  std::vector<CheckItem> checks;
  if (cfg.tables_what == "c1") {
    std::vector<C1GridEntry> grid;
    const double c1 = c1_constant(gb, cfg.kernel.beta, cfg.refine, &grid);
    CsvTable table;
    table.header = {"x1", "w1", "value"};
    for (const auto& e : grid) table.rows.push_back({e.x[0], e.w[0], e.value});
    write_file(cfg.output_dir, "c1_grid.csv", table.to_string());
    report["c1"] = c1;
    bool finite = std::isfinite(c1) && c1 > 0.0;
    for (const auto& e : grid) finite = finite && std::isfinite(e.value);
    checks.push_back({"grid_finite", finite, Json{{"c1", c1}}});
  } else if (cfg.tables_what == "r0") {
    const double r0 = r0_of(cfg.tables_C, gb, cfg.kernel.beta, cfg.tables_eps, cfg.refine);
    CsvTable table;
    table.header = {"d", "alpha", "beta", "C", "eps", "r0"};
    table.rows.push_back({static_cast<double>(p.d), p.alpha, cfg.kernel.beta, cfg.tables_C,
                          cfg.tables_eps, r0});
    write_file(cfg.output_dir, "r0_table.csv", table.to_string());
    report["r0"] = r0;
    checks.push_back({"r0_positive", r0 > 0.0, Json{{"r0", r0}}});
  } else {
    throw std::invalid_argument("tables: unknown what=" + cfg.tables_what);
  }
  ExperimentResult res;
  finalize(report, checks, t0, &res.pass);
  res.report = std::move(report);
  return res;
}

void validate_point(const ExperimentConfig& cfg, int d, double alpha,
                    std::vector<CheckItem>& checks, Json& detail) {
  const auto p = StableParams::make(d, alpha);
  QuadratureSpec q = cfg.quad;
  const std::string tag = "d" + std::to_string(d);
  const std::uint64_t seed = cfg.mc.master_seed + static_cast<std::uint64_t>(100 * d);

  // Characteristic-function law check, exact and jump-resolved samplers.
  {
    Json jcf = Json::array();
    bool ok = true;
    int k = 0;
    for (double xi : {0.5, 1.0, 2.0}) {
      const double want = std::exp(-std::pow(xi, alpha));
      auto exact = cf_estimate(p, 1.0, xi, 30000, seed + 11 + static_cast<unsigned>(k));
      auto jump = cf_estimate_jump(p, 1.0, xi, 1e-3, 15000, seed + 17 + static_cast<unsigned>(k));
      ok = ok && std::abs(exact.mean - want) <= 4.0 * exact.std_err;
      ok = ok && std::abs(jump.mean - want) <= 6.0 * jump.std_err;
      jcf.push_back(Json{{"xi", xi},
                         {"target", want},
                         {"exact", estimate_json(exact)},
                         {"jump", estimate_json(jump)}});
      ++k;
    }
    checks.push_back({"characteristic_function_" + tag, ok, Json{}});
    detail["cf_" + tag] = jcf;
  }

  // Levy-system identity E A_T = E int h(X_s) ds for a Fuchsian kernel.
  {
    const auto F = d == 1 ? fuchsian_kernel(1.0, 1.0) : fuchsian_kernel(1.0, 1.5);
    auto h = RadialField::build(p, F, q, PairTransform::Identity, 1e-3);
    const double T = 10.0;
    const int n = 6000;
    std::vector<double> a(static_cast<std::size_t>(n)), comp(a.size());
    parallel_for(a.size(), [&](std::size_t i) {
      auto path = sample_jump_path(p, Point::zero(d), T, 1e-3, SmallJumpPolicy::Drop, seed + 23, i);
      auto s = accumulate(path, F, [&](const Point& x) { return h(x); });
      a[i] = s.A_T;
      comp[i] = s.compensator_T;
    });
    // Independent second run for the compensator side.
    std::vector<double> comp2(a.size());
    parallel_for(a.size(), [&](std::size_t i) {
      auto path =
          sample_jump_path(p, Point::zero(d), T, 1e-3, SmallJumpPolicy::Drop, seed + 29, i);
      auto s = accumulate(path, F, [&](const Point& x) { return h(x); });
      comp2[i] = s.compensator_T;
    });
    auto ea = make_estimate(a);
    auto ec = make_estimate(comp2);
    const bool ok = std::abs(ea.mean - ec.mean) <= 3.0 * combined_std_err(ea, ec);
    checks.push_back({"levy_system_identity_" + tag, ok,
                      Json{{"jump_sum", estimate_json(ea)}, {"compensator", estimate_json(ec)}}});
    (void)comp;
  }

  // Doleans pair + inverse-density identities.
  {
    auto base = d == 1 ? fuchsian_kernel(1.0, 1.0) : fuchsian_kernel(1.0, 1.5);
    auto F = scale_kernel(base, 0.9 / base.upper_bound);
    auto h = RadialField::build(p, F, q, PairTransform::Identity, 1e-3);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      auto path =
          sample_jump_path(p, Point::zero(d), 5.0, 1e-3, SmallJumpPolicy::Drop, seed + 31, i);
      auto rep = doleans_exponential_pair_check(path, F, [&](const Point& x) { return h(x); });
      auto inv = inverse_density_check(path, F, [&](const Point& x) { return h(x); });
      worst = std::max({worst, rep.identity_error, inv.identity_error});
    }
    checks.push_back({"doleans_identities_" + tag, worst < 1e-10, Json{{"max_error", worst}}});
  }

  // Importance-sampling equality between tilted and weighted estimators.
  {
    auto F = d == 1 ? fuchsian_capped_kernel(1.0, 1.0) : fuchsian_capped_kernel(1.0, 1.5);
    auto h = RadialField::build(p, F, q, PairTransform::Identity, 1e-3);
    const double T = 2.0;
    auto tcfg = TiltedPathConfig::make(p, F, 1e-3, T);
    const int n = 8000;
    std::vector<double> tilted(static_cast<std::size_t>(n)), weighted(tilted.size());
    parallel_for(tilted.size(), [&](std::size_t i) {
      tilted[i] = sample_tilted_path(tcfg, Point::zero(d), seed + 37, i).end[0] > 0.5 ? 1.0 : 0.0;
      auto bp = sample_jump_path(p, Point::zero(d), T, 1e-3, SmallJumpPolicy::Drop, seed + 41, i);
      auto s = accumulate(bp, F, [&](const Point& x) { return h(x); });
      weighted[i] = (bp.end[0] > 0.5 ? 1.0 : 0.0) * std::exp(s.logL_T);
    });
    auto et = make_estimate(tilted);
    auto ew = make_estimate(weighted);
    const bool ok = std::abs(et.mean - ew.mean) <= 3.0 * combined_std_err(et, ew);
    checks.push_back({"importance_sampling_" + tag, ok,
                      Json{{"tilted", estimate_json(et)}, {"weighted", estimate_json(ew)}}});
  }

  // Poisson-kernel normalization, plus the printed-constant discrepancy.
  {
    const double mass = poisson_mass(p, 1.0, Point::zero(d), 1.0, kInf, q);
    const double ratio = poisson_constant_printed(p) / poisson_constant(p);
    checks.push_back({"poisson_normalization_" + tag, std::abs(mass - 1.0) < 1e-3,
                      Json{{"mass", mass},
                           {"printed_constant_ratio", ratio},
                           {"note", "printed constant exceeds the normalizing one by pi^{d+2}; "
                                    "kernel uses the normalized constant"}}});
  }

  // Ball-Green occupation oracle.
  if (alpha < d) {
    UnitBallGreen gb(p);
    Ball S{0.4 * Point::unit(d, 0), 0.25};
    const double mass = ball_green_mass(gb, Point::zero(d), S, q);
    const int n = 8000;
    std::vector<double> occ(static_cast<std::size_t>(n));
    Ball B{Point::zero(d), 1.0};
    parallel_for(occ.size(), [&](std::size_t i) {
      PathSim sim(p, Point::zero(d), 5e-3, SmallJumpPolicy::Drop, RngStream(seed + 43, i));
      double acc = 0.0, t_mark = 0.0, t_prev = 0.0;
      Point pos = Point::zero(d);
      bool out = false;
      while (!out && t_prev < 64.0) {
        sim.advance_to(t_prev + 1.0, [&](double t, const Point&, const Point& post) {
          if (out) return;
          if (S.contains(pos)) acc += t - t_mark;
          t_mark = t;
          pos = post;
          if (!B.contains(post)) out = true;
        });
        if (!out) {
          if (S.contains(pos)) acc += (t_prev + 1.0) - t_mark;
          t_mark = t_prev + 1.0;
        }
        t_prev += 1.0;
      }
      occ[i] = acc;
    });
    auto e = make_estimate(occ);
    checks.push_back({"ball_green_occupation_" + tag, std::abs(e.mean - mass) <= 3.0 * e.std_err,
                      Json{{"mc", estimate_json(e)}, {"quadrature", mass}}});
  }
}

}  // namespace

ExperimentResult run_validate(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  Json report = base_report(cfg);
  std::vector<CheckItem> checks;
  Json detail;
  validate_point(cfg, 1, 0.5, checks, detail);
  if (cfg.matrix != "minimal") validate_point(cfg, 3, 1.0, checks, detail);
  report["detail"] = detail;
  ExperimentResult res;
  finalize(report, checks, t0, &res.pass);
  res.report = std::move(report);
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  if (cfg.experiment == "Validate")
    res = run_validate(cfg);
  else if (cfg.experiment == "Dichotomy")
    res = run_dichotomy(cfg);
  else if (cfg.experiment == "Entropy")
    res = run_entropy(cfg);
  else if (cfg.experiment == "Counterexample")
    res = run_counterexample(cfg);
  else if (cfg.experiment == "Harnack")
    res = run_harnack(cfg);
  else if (cfg.experiment == "Gauge")
    res = run_gauge(cfg);
  else if (cfg.experiment == "PotentialTables")
    res = run_tables(cfg);
  else
    throw std::invalid_argument("unknown experiment: " + cfg.experiment);

  write_file(cfg.output_dir, "report.json", dump_report(res.report));
  Json manifest;
  manifest["config"] = to_json(cfg);
  manifest["master_seed"] = cfg.mc.master_seed;
  manifest["version"] = "stabletilt 0.1.0";
  manifest["runtime_seconds"] = res.report["runtime_seconds"];
  write_file(cfg.output_dir, "manifest.json", dump_report(manifest));
  return res;
}

}  // namespace stabletilt::runner
