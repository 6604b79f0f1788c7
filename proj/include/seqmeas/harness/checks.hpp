#pragma once

// Theorem checks run by the suite. Each check draws an instance from a trial
// generator, serialises it, and evaluates named metrics. A metric passes when
// value <= limit; inequalities a <= b + slack are recorded as value = a - b,
// limit = slack.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqmeas/harness/random.hpp"
#include "seqmeas/io.hpp"

namespace seqmeas::harness {

enum class Check {
  JCheck,
  Chain,
  Klein,
  Luders,
  Minimal,
  Jarzynski,
  Dilation,
  Counterexample,
  Consistency,
};

std::string_view check_name(Check c);
std::optional<Check> parse_check(std::string_view name);
const std::vector<Check>& all_checks();

/// Pinned tolerances. identity_tol governs exact identities evaluated by
/// summation (J-equation, Jarzynski, the minimal-pair identity, dilation ordering) and
/// is the only one a config can change.
struct Tolerances {
  double identity_tol = 1e-9;
  double inequality_slack = 1e-10;
  double exact_tol = 1e-12;
  double normalisation_tol = 1e-10;
  double minimality_tol = 1e-10;
  double consistency_tol = 1e-10;
  double counterexample_entropy_tol = 1e-6;
};

struct Metric {
  double value;
  double limit;

  bool pass() const { return value <= limit; }
};

struct TrialResult {
  std::map<std::string, Metric> metrics;
  std::map<std::string, int> counters;  // per-trial flags (0/1) summed by the suite

  bool pass() const;
  std::vector<std::string> failed_metrics() const;
};

/// Parameters that select the instance of one trial.
struct TrialSpec {
  Check check;
  std::uint64_t seed;
  std::uint64_t trial;
  Eigen::Index dim;
  double beta = 1.0;  // jarzynski only
};

/// Draws the instance for a trial; deterministic in the spec.
io::json generate_instance(const TrialSpec& spec);

/// Evaluates a serialised instance. Throws on structurally invalid input.
TrialResult evaluate_instance(Check check, const io::json& instance,
                              const Tolerances& tol);

/// Fixed instances evaluated once per run (counterexample pair, SWAP reset).
std::vector<io::json> fixed_instances(Check check);

/// Re-runs a failure bundle produced by the suite.
TrialResult replay(const io::json& bundle, const Tolerances& tol);

/// The two-qubit SWAP reset: rho = 1/2, phi = |0>, ancilla measured in the
/// computational basis.
io::json swap_reset_instance();

}  // namespace seqmeas::harness
