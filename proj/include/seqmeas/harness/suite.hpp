#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "seqmeas/harness/checks.hpp"

namespace seqmeas::harness {

struct ExperimentConfig {
  std::uint64_t seed = 20240101;
  std::vector<Eigen::Index> dims{2, 3, 4, 5, 6, 7, 8};
  int trials = 1000;
  double tol = 1e-9;
  std::vector<double> beta_values{0.1, 1.0, 10.0};
  std::vector<Check> checks = all_checks();
  /// Per-check overrides of dims and trial counts. Dilation dims are factor
  /// dimensions (d means d (x) d).
  std::map<Check, std::vector<Eigen::Index>> check_dims{
      {Check::Jarzynski, {2, 3, 4, 5, 6}}, {Check::Dilation, {2, 3}}};
  std::map<Check, int> check_trials{
      {Check::Jarzynski, 300}, {Check::Dilation, 300}, {Check::Consistency, 100}};
  /// Failure bundles kept per check; the failure count is always exact.
  std::size_t max_failure_bundles = 20;

  /// Throws InputError when a field violates its range.
  void validate() const;
  const std::vector<Eigen::Index>& dims_for(Check c) const;
  int trials_for(Check c) const;
  Tolerances tolerances() const;
};

struct MetricSummary {
  double max = -std::numeric_limits<double>::infinity();
  double limit = 0.0;
  int evaluated = 0;
  int violations = 0;
};

struct CheckReport {
  Check check;
  int trials = 0;
  int fixed = 0;
  std::map<std::string, MetricSummary> metrics;
  std::map<std::string, int> counters;
  int failure_count = 0;
  std::vector<io::json> failures;  // repro bundles

  bool pass() const { return failure_count == 0; }
  /// Largest metric value relative to its own limit's scale: the max over
  /// metrics of their max value.
  double max_residual() const;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string kernel_backend;
  std::vector<CheckReport> checks;
  double duration_seconds = 0.0;

  bool pass() const;
  const CheckReport* find(Check c) const;
};

ExperimentReport run_suite(const ExperimentConfig& config);

/// Single-check convenience wrapper.
CheckReport run_check(const ExperimentConfig& config, Check check);

io::json config_to_json(const ExperimentConfig& c);
/// Missing keys keep their defaults. Throws InputError for invalid values.
ExperimentConfig config_from_json(const io::json& j);

/// Report as JSON. include_duration=false gives the deterministic content.
io::json report_to_json(const ExperimentReport& r, bool include_duration = true);

}  // namespace seqmeas::harness
