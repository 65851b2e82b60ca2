#include "runner/config.hpp"

#include <fstream>
#include <stdexcept>

namespace stabletilt::runner {

KernelSpec ExperimentConfig::make_kernel() const {
  const auto& k = kernel;
  KernelSpec spec;
  if (k.name == "zero")
    spec = zero_kernel();
  else if (k.name == "fuchsian")
    spec = fuchsian_kernel(k.C, k.beta);
  else if (k.name == "fuchsian_capped")
    spec = fuchsian_capped_kernel(k.C, k.beta);
  else if (k.name == "capped_power")
    spec = capped_power_kernel(k.C, k.beta);
  else if (k.name == "annulus_band")
    spec = annulus_band_kernel(k.value, k.lo, k.hi);
  else if (k.name == "sparse_ball")
    spec = sparse_ball_kernel(params(), k.gamma, k.beta, k.n_balls);
  else if (k.name == "sparse_ball_sqrt")
    spec = sparse_ball_sqrt_kernel(params(), k.gamma, k.beta, k.n_balls);
  else
    throw std::invalid_argument("unknown kernel name: " + k.name);
  if (k.scale != 1.0) spec = scale_kernel(spec, k.scale);
  return spec;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["schema"] = c.schema;
  j["experiment"] = c.experiment;
  j["params"] = Json{{"d", c.d}, {"alpha", c.alpha}};
  j["kernel"] = Json{{"name", c.kernel.name}, {"C", c.kernel.C},       {"beta", c.kernel.beta},
                     {"gamma", c.kernel.gamma}, {"n_balls", c.kernel.n_balls},
                     {"value", c.kernel.value}, {"lo", c.kernel.lo},   {"hi", c.kernel.hi},
                     {"scale", c.kernel.scale}};
  j["mc"] = Json{{"n_paths", c.mc.n_paths},
                 {"horizon", c.mc.horizon},
                 {"cutoff", c.mc.cutoff},
                 {"policy", c.mc.policy == SmallJumpPolicy::Drop ? "drop" : "brownian_match"},
                 {"doublings", c.mc.doublings},
                 {"master_seed", c.mc.master_seed}};
  j["quad"] = Json{{"tol", c.quad.tol}, {"max_refine", c.quad.max_refine}};
  j["expect_verdict"] = c.expect_verdict;
  j["matrix"] = c.matrix;
  j["tables"] = Json{{"what", c.tables_what}, {"eps", c.tables_eps}, {"C", c.tables_C}};
  j["refine"] = c.refine;
  j["dump_paths"] = c.dump_paths;
  j["output_dir"] = c.output_dir;
  return j;
}

namespace {

template <class T>
void read_if(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  read_if(j, "schema", c.schema);
  if (c.schema != 1) throw std::invalid_argument("unsupported config schema");
  read_if(j, "experiment", c.experiment);
  if (j.contains("params")) {
    read_if(j["params"], "d", c.d);
    read_if(j["params"], "alpha", c.alpha);
  }
  if (j.contains("kernel")) {
    const auto& k = j["kernel"];
    read_if(k, "name", c.kernel.name);
    read_if(k, "C", c.kernel.C);
    read_if(k, "beta", c.kernel.beta);
    read_if(k, "gamma", c.kernel.gamma);
    read_if(k, "n_balls", c.kernel.n_balls);
    read_if(k, "value", c.kernel.value);
    read_if(k, "lo", c.kernel.lo);
    read_if(k, "hi", c.kernel.hi);
    read_if(k, "scale", c.kernel.scale);
  }
  if (j.contains("mc")) {
    const auto& m = j["mc"];
    read_if(m, "n_paths", c.mc.n_paths);
    read_if(m, "horizon", c.mc.horizon);
    read_if(m, "cutoff", c.mc.cutoff);
    std::string policy = "drop";
    read_if(m, "policy", policy);
    if (policy == "drop")
      c.mc.policy = SmallJumpPolicy::Drop;
    else if (policy == "brownian_match")
      c.mc.policy = SmallJumpPolicy::BrownianMatch;
    else
      throw std::invalid_argument("unknown policy: " + policy);
    read_if(m, "doublings", c.mc.doublings);
    read_if(m, "master_seed", c.mc.master_seed);
  }
  if (j.contains("quad")) {
    read_if(j["quad"], "tol", c.quad.tol);
    read_if(j["quad"], "max_refine", c.quad.max_refine);
  }
  read_if(j, "expect_verdict", c.expect_verdict);
  read_if(j, "matrix", c.matrix);
  if (j.contains("tables")) {
    read_if(j["tables"], "what", c.tables_what);
    read_if(j["tables"], "eps", c.tables_eps);
    read_if(j["tables"], "C", c.tables_C);
  }
  read_if(j, "refine", c.refine);
  read_if(j, "dump_paths", c.dump_paths);
  read_if(j, "output_dir", c.output_dir);

  if (c.mc.n_paths < 2 || !(c.mc.horizon > 0.0) || !(c.mc.cutoff > 0.0) || c.mc.doublings < 0 ||
      !(c.quad.tol > 0.0))
    throw std::invalid_argument("config values out of range");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  Json j = Json::parse(in);
  return config_from_json(j);
}

void apply_override(Json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must look like key.path=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  Json* node = &j;
  std::size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot - pos);
    if (dot == std::string::npos) {
      // Parse the value as JSON when possible, else keep it as a string.
      Json parsed = Json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? Json(value) : parsed;
      return;
    }
    node = &(*node)[key];
    pos = dot + 1;
  }
}

}  // namespace stabletilt::runner
