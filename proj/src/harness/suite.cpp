#include "seqmeas/harness/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "seqmeas/error.hpp"
#include "seqmeas/kernels.hpp"

namespace seqmeas::harness {

using io::json;

void ExperimentConfig::validate() const {
  auto check_dims_range = [](const std::vector<Eigen::Index>& ds) {
    if (ds.empty()) throw InputError("config: dims must not be empty");
    for (auto d : ds) {
      if (d < 1 || d > 64) throw InputError("config: dims must lie in [1, 64]");
    }
  };
  check_dims_range(dims);
  for (const auto& [c, ds] : check_dims) check_dims_range(ds);
  if (trials < 1) throw InputError("config: trials must be >= 1");
  for (const auto& [c, t] : check_trials) {
    if (t < 1) throw InputError("config: per-check trials must be >= 1");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InputError("config: tol must be positive");
  if (beta_values.empty()) throw InputError("config: beta_values must not be empty");
  for (double b : beta_values) {
    if (!(b > 0.0) || !std::isfinite(b)) throw InputError("config: beta values must be positive");
  }
  if (checks.empty()) throw InputError("config: no checks selected");
  // Dilation squares the factor dimension.
  for (auto d : dims_for(Check::Dilation)) {
    if (d * d > 64) throw InputError("config: dilation factor dimension too large");
  }
}

const std::vector<Eigen::Index>& ExperimentConfig::dims_for(Check c) const {
  const auto it = check_dims.find(c);
  return it == check_dims.end() ? dims : it->second;
}

int ExperimentConfig::trials_for(Check c) const {
  const auto it = check_trials.find(c);
  return it == check_trials.end() ? trials : it->second;
}

Tolerances ExperimentConfig::tolerances() const {
  Tolerances t;
  t.identity_tol = tol;
  return t;
}

double CheckReport::max_residual() const {
  double m = 0.0;
  for (const auto& [name, s] : metrics) {
    if (s.evaluated > 0) m = std::max(m, s.max);
  }
  return m;
}

bool ExperimentReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckReport& c) { return c.pass(); });
}

const CheckReport* ExperimentReport::find(Check c) const {
  for (const auto& r : checks) {
    if (r.check == c) return &r;
  }
  return nullptr;
}

namespace {

json metrics_to_json(const TrialResult& r) {
  json out = json::object();
  for (const auto& [name, m] : r.metrics) out[name] = {{"value", m.value}, {"limit", m.limit}};
  return out;
}

void record(CheckReport& report, const TrialResult& result) {
  for (const auto& [name, m] : result.metrics) {
    auto& s = report.metrics[name];
    s.max = std::max(s.max, m.value);
    s.limit = m.limit;
    ++s.evaluated;
    if (!m.pass()) ++s.violations;
  }
  for (const auto& [name, v] : result.counters) report.counters[name] += v;
}

void add_failure(CheckReport& report, const ExperimentConfig& config, json bundle) {
  ++report.failure_count;
  if (report.failures.size() < config.max_failure_bundles) {
    report.failures.push_back(std::move(bundle));
  }
}

void run_one(CheckReport& report, const ExperimentConfig& config, const Tolerances& tol,
             json base, json instance) {
  base["check"] = std::string(check_name(report.check));
  try {
    const TrialResult result = evaluate_instance(report.check, instance, tol);
    record(report, result);
    if (!result.pass()) {
      base["metrics"] = metrics_to_json(result);
      base["failed"] = result.failed_metrics();
      base["instance"] = std::move(instance);
      add_failure(report, config, std::move(base));
    }
  } catch (const std::exception& e) {
    base["error"] = e.what();
    base["instance"] = std::move(instance);
    add_failure(report, config, std::move(base));
  }
}

}  // namespace

CheckReport run_check(const ExperimentConfig& config, Check check) {
  const Tolerances tol = config.tolerances();
  CheckReport report;
  report.check = check;

  const auto fixed = fixed_instances(check);
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    run_one(report, config, tol, {{"fixed", k}}, fixed[k]);
    ++report.fixed;
  }
  if (check == Check::Counterexample) return report;

  const auto& dims = config.dims_for(check);
  const int trials = config.trials_for(check);
  for (int t = 0; t < trials; ++t) {
    const auto trial = static_cast<std::uint64_t>(t);
    TrialSpec spec{check, config.seed, trial, dims[trial % dims.size()], 1.0};
    if (check == Check::Jarzynski) {
      spec.beta = config.beta_values[(trial / dims.size()) % config.beta_values.size()];
    }
    json base = {{"seed", config.seed}, {"trial", trial}, {"dim", spec.dim}};
    if (check == Check::Jarzynski) base["beta"] = spec.beta;
    json instance;
    try {
      instance = generate_instance(spec);
    } catch (const std::exception& e) {
      base["check"] = std::string(check_name(check));
      base["error"] = std::string("generation failed: ") + e.what();
      add_failure(report, config, std::move(base));
      ++report.trials;
      continue;
    }
    run_one(report, config, tol, std::move(base), std::move(instance));
    ++report.trials;
  }
  return report;
}

ExperimentReport run_suite(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;
  report.kernel_backend = std::string(kernels::backend_name(kernels::active().backend));
  for (Check c : config.checks) report.checks.push_back(run_check(config, c));
  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json config_to_json(const ExperimentConfig& c) {
  json checks = json::array();
  for (Check k : c.checks) checks.push_back(std::string(check_name(k)));
  json check_dims = json::object();
  for (const auto& [k, ds] : c.check_dims) check_dims[std::string(check_name(k))] = ds;
  json check_trials = json::object();
  for (const auto& [k, t] : c.check_trials) check_trials[std::string(check_name(k))] = t;
  return {{"seed", c.seed},       {"dims", c.dims},
          {"trials", c.trials},   {"tol", c.tol},
          {"beta_values", c.beta_values},
          {"check_set", checks},  {"check_dims", check_dims},
          {"check_trials", check_trials}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  ExperimentConfig c;
  try {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<Eigen::Index>>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("beta_values")) c.beta_values = j.at("beta_values").get<std::vector<double>>();
    auto parse = [](const std::string& name) {
      const auto k = parse_check(name);
      if (!k) throw InputError("config: unknown check '" + name + "'");
      return *k;
    };
    if (j.contains("check_set")) {
      c.checks.clear();
      for (const auto& name : j.at("check_set")) c.checks.push_back(parse(name.get<std::string>()));
    }
    if (j.contains("check_dims")) {
      for (const auto& [name, ds] : j.at("check_dims").items()) {
        c.check_dims[parse(name)] = ds.get<std::vector<Eigen::Index>>();
      }
    }
    if (j.contains("check_trials")) {
      for (const auto& [name, t] : j.at("check_trials").items()) {
        c.check_trials[parse(name)] = t.get<int>();
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

json report_to_json(const ExperimentReport& r, bool include_duration) {
  json checks = json::object();
  for (const auto& c : r.checks) {
    json metrics = json::object();
    for (const auto& [name, s] : c.metrics) {
      metrics[name] = {{"max", s.evaluated > 0 ? json(s.max) : json(nullptr)},
                       {"limit", s.limit},
                       {"evaluated", s.evaluated},
                       {"violations", s.violations}};
    }
    checks[std::string(check_name(c.check))] = {
        {"trials", c.trials},
        {"fixed_instances", c.fixed},
        {"max_residual", c.max_residual()},
        {"metrics", std::move(metrics)},
        {"counters", c.counters},
        {"failure_count", c.failure_count},
        {"failures", c.failures},
        {"pass", c.pass()}};
  }
  json out = {{"config", config_to_json(r.config)},
              {"kernel_backend", r.kernel_backend},
              {"checks", std::move(checks)},
              {"pass", r.pass()}};
  if (include_duration) out["duration_seconds"] = r.duration_seconds;
  return out;
}

}  // namespace seqmeas::harness
