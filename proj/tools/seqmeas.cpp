// seqmeas: command-line front end for the sequential-measurement checks.
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 input/config error.

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "seqmeas/entropy.hpp"
#include "seqmeas/error.hpp"
#include "seqmeas/harness/suite.hpp"
#include "seqmeas/io.hpp"
#include "seqmeas/stat_model.hpp"

namespace {

using namespace seqmeas;
using harness::Check;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct CommonOptions {
  std::vector<long> dims;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::vector<double> betas;
  std::string out;
  bool json = false;
};

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("SEQMEAS_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InputError("SEQMEAS_SEED is not an unsigned integer");
  }
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_beta) {
  cmd->add_option("--dims", o.dims, "Dimensions, comma separated")->delimiter(',');
  cmd->add_option("--trials", o.trials, "Trials per check");
  cmd->add_option("--seed", o.seed, "Base seed (default: SEQMEAS_SEED or built-in)");
  cmd->add_option("--tol", o.tol, "Tolerance for summed identities");
  cmd->add_option("--out", o.out, "Write the JSON report to this file");
  cmd->add_flag("--json", o.json, "Print the full JSON report");
  if (with_beta) {
    cmd->add_option("--beta", o.betas, "Inverse temperatures, comma separated")->delimiter(',');
  }
}

harness::ExperimentConfig config_for(Check check, const CommonOptions& o) {
  harness::ExperimentConfig c;
  c.checks = {check};
  if (const auto s = env_seed()) c.seed = *s;
  if (o.seed) c.seed = *o.seed;
  if (!o.dims.empty()) {
    c.dims.assign(o.dims.begin(), o.dims.end());
    c.check_dims.erase(check);
  }
  if (o.trials) {
    c.trials = *o.trials;
    c.check_trials.erase(check);
  }
  if (o.tol) c.tol = *o.tol;
  if (!o.betas.empty()) c.beta_values = o.betas;
  return c;
}

void print_summary(const harness::ExperimentReport& report) {
  std::cout << std::setprecision(15);
  std::cout << "kernel backend: " << report.kernel_backend << "\n";
  for (const auto& c : report.checks) {
    std::cout << std::left << std::setw(16) << harness::check_name(c.check)
              << " trials=" << c.trials << " fixed=" << c.fixed
              << " failures=" << c.failure_count << "  " << (c.pass() ? "PASS" : "FAIL")
              << "\n";
    for (const auto& [name, s] : c.metrics) {
      std::cout << "    " << std::setw(22) << name << " max=" << std::setw(24)
                << (s.evaluated > 0 ? s.max : 0.0) << " limit=" << s.limit
                << " evaluated=" << s.evaluated << "\n";
    }
    for (const auto& [name, n] : c.counters) {
      std::cout << "    " << std::setw(22) << name << " count=" << n << "\n";
    }
  }
  std::cout << "duration " << report.duration_seconds << " s\n";
  std::cout << (report.pass() ? "ALL PASS" : "FAILURES PRESENT") << "\n";
}

int finish(const harness::ExperimentReport& report, const CommonOptions& o) {
  if (!o.out.empty()) io::write_json_file(o.out, harness::report_to_json(report));
  if (o.json) {
    std::cout << std::setprecision(15) << harness::report_to_json(report).dump(2) << "\n";
  } else {
    print_summary(report);
  }
  return report.pass() ? kExitPass : kExitFail;
}

int run_model_file(const std::string& path, const CommonOptions& o) {
  const auto model = io::model_from_json(io::read_json_file(path));
  const double tol = o.tol.value_or(1e-9);
  const auto validation = stat_model::validate_model(model);
  std::cout << std::setprecision(15);
  if (!validation.ok()) {
    for (const auto& v : validation.violations) {
      std::cout << "violated: " << v.constraint << " residual=" << v.residual << "\n";
    }
    return kExitFail;
  }
  const double forward = stat_model::j_equation_residual(model);
  const double reverse = stat_model::j_equation_reverse_residual(model);
  const auto chain = stat_model::entropy_chain(model);
  const bool pass = forward <= tol && reverse <= tol &&
                    chain.h_p <= chain.h_q + 1e-10 &&
                    (chain.cross.is_infinite() || chain.h_q <= chain.cross.value() + 1e-10);
  if (o.json) {
    io::json out = {{"valid", true},
                    {"j_residual", forward},
                    {"j_reverse_residual", reverse},
                    {"h_p", chain.h_p},
                    {"h_q", chain.h_q},
                    {"cross", io::maybe_infinite_to_json(chain.cross)},
                    {"pass", pass}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "model valid\n"
              << "J-equation residual         " << forward << "\n"
              << "reverse J-equation residual " << reverse << "\n"
              << "H(p)                        " << chain.h_p << "\n"
              << "H(q)                        " << chain.h_q << "\n"
              << "cross term                  " << chain.cross << "\n"
              << (pass ? "PASS" : "FAIL") << "\n";
  }
  return pass ? kExitPass : kExitFail;
}

std::string format_matrix(const ComplexMatrix& m) {
  std::ostringstream os;
  os << std::setprecision(15);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << "  [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) os << ", ";
      os << m(r, c).real();
      if (m(r, c).imag() != 0.0) os << (m(r, c).imag() < 0 ? "-" : "+") << std::abs(m(r, c).imag()) << "i";
    }
    os << "]\n";
  }
  return os.str();
}

int run_counterexample(bool as_json, bool bits) {
  const auto pair = entropy::counterexample_pair();
  const auto report = entropy::make_entropy_report(pair.rho, pair.sigma);
  const auto minimal = entropy::is_minimal_pair(pair.rho, pair.sigma);
  const double unit = bits ? std::log(2.0) : 1.0;
  if (as_json) {
    io::json out = io::entropy_report_to_json(report);
    out["rho"] = io::matrix_to_json(pair.rho.matrix());
    out["sigma"] = io::matrix_to_json(pair.sigma.matrix());
    out["clusters"] = {{"eigenvalues", minimal.cluster_eigenvalues},
                       {"degeneracies", minimal.cluster_degeneracies},
                       {"q", minimal.q},
                       {"p_tilde", minimal.p_tilde}};
    std::cout << std::setprecision(15) << out.dump(2) << "\n";
  } else {
    const char* u = bits ? "bits" : "nats";
    std::cout << std::setprecision(15) << "rho =\n"
              << format_matrix(pair.rho.matrix()) << "sigma =\n"
              << format_matrix(pair.sigma.matrix()) << "S(rho)        = "
              << report.s_rho / unit << " " << u << "\n"
              << "S(sigma)      = " << report.s_sigma / unit << " " << u << "\n"
              << "S(rho||sigma) = ";
    if (report.rel_entropy.is_infinite()) std::cout << "inf\n";
    else std::cout << report.rel_entropy.value() / unit << " " << u << "\n";
    std::cout << "clusters of sigma (eigenvalue, degeneracy, q, p~):\n";
    for (std::size_t k = 0; k < minimal.q.size(); ++k) {
      std::cout << "  " << minimal.cluster_eigenvalues[k] << ", "
                << minimal.cluster_degeneracies[k] << ", " << minimal.q[k] << ", "
                << minimal.p_tilde[k] << "\n";
    }
    std::cout << "minimal pair: " << (report.is_minimal ? "yes" : "no") << "\n";
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential-measurement model checks"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string model_path;
  auto* jcheck = app.add_subcommand("jcheck", "J-equation on random quantum-built models");
  add_common(jcheck, opts, false);
  jcheck->add_option("--model", model_path, "Evaluate a model JSON file instead");

  std::vector<std::pair<CLI::App*, Check>> simple;
  const std::vector<std::pair<const char*, Check>> names{
      {"chain", Check::Chain},         {"klein", Check::Klein},
      {"luders", Check::Luders},       {"minimal", Check::Minimal},
      {"jarzynski", Check::Jarzynski}, {"dilation", Check::Dilation},
      {"consistency", Check::Consistency}};
  for (const auto& [name, check] : names) {
    auto* cmd = app.add_subcommand(name, std::string("Run the ") + name + " check");
    add_common(cmd, opts, check == Check::Jarzynski);
    simple.emplace_back(cmd, check);
  }

  bool ce_json = false;
  bool bits = false;
  auto* ce = app.add_subcommand("counterexample", "Print the non-minimal pair and its entropies");
  ce->add_flag("--json", ce_json, "Emit JSON");
  ce->add_flag("--bits", bits, "Display entropies in bits");

  std::string config_path;
  CommonOptions suite_opts;
  auto* suite = app.add_subcommand("suite", "Run every check in a config file");
  suite->add_option("--config", config_path, "Experiment config JSON")->required();
  suite->add_option("--out", suite_opts.out, "Write the JSON report to this file");
  suite->add_flag("--json", suite_opts.json, "Print the full JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (jcheck->parsed()) {
      if (!model_path.empty()) return run_model_file(model_path, opts);
      return finish(harness::run_suite(config_for(Check::JCheck, opts)), opts);
    }
    for (const auto& [cmd, check] : simple) {
      if (cmd->parsed()) return finish(harness::run_suite(config_for(check, opts)), opts);
    }
    if (ce->parsed()) return run_counterexample(ce_json, bits);
    if (suite->parsed()) {
      auto config = harness::config_from_json(io::read_json_file(config_path));
      if (const auto s = env_seed()) config.seed = *s;
      return finish(harness::run_suite(config), suite_opts);
    }
  } catch (const ShapeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvariantError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
