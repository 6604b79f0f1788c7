#pragma once

// Abstract statistical model of two sequential measurements.
//
// A model is the quintuple (I, J, Pi, x, x_tilde) with outcome sets indexed
// 0..n_first-1 and 0..n_second-1. The conditional matrix is stored as
// pi(j, i) = Pi(j|i). Both weighted sums of Pi must equal one; everything
// else in this header is derived from those two normalisations.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqmeas/extended.hpp"
#include "seqmeas/linalg.hpp"

namespace seqmeas::stat_model {

inline constexpr double kDefaultTolerance = 1e-10;
/// Entries below this magnitude are treated as zero before taking logarithms.
inline constexpr double kLogClamp = 1e-14;

struct SequentialModel {
  RealMatrix pi;         // (n_second x n_first), pi(j, i) = Pi(j|i)
  RealVector x;          // over I
  RealVector x_tilde;    // over J

  Eigen::Index n_first() const { return x.size(); }
  Eigen::Index n_second() const { return x_tilde.size(); }
};

struct Violation {
  std::string constraint;
  double residual;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  double max_residual() const;
};

struct JointDistribution {
  RealMatrix forward;  // (n_first x n_second), P(i, j) = Pi(j|i) x(i)
  RealMatrix reverse;  // (n_second x n_first), P~(j, i) = Pi(j|i) x~(j)
};

struct Degeneracies {
  RealVector d;        // over I, row sums of Pi over j
  RealVector d_tilde;  // over J
};

struct MarginalSet {
  RealVector d;
  RealVector d_tilde;
  RealVector p;        // d(i) x(i)
  RealVector q;        // sum_i Pi(j|i) x(i)
  RealVector p_tilde;  // d~(j) x~(j)
  RealVector q_tilde;  // sum_j Pi(j|i) x~(j)
};

/// Conditional probabilities pi(j|i) = Pi(j|i)/d(i). Column i is present only
/// when p(i) > 0; otherwise it is undefined and left empty.
struct ConditionalMatrix {
  std::vector<std::optional<RealVector>> columns;  // indexed by i, each over J

  bool defined(Eigen::Index i) const {
    return columns[static_cast<std::size_t>(i)].has_value();
  }
};

/// Random variable X(i, j) = c(i, j) / x(i), represented by its numerator.
struct RatioObservable {
  RealMatrix c;  // (n_first x n_second)
};

struct EntropyChain {
  double h_p;
  double h_q;
  MaybeInfinite cross;
};

/// Throws ShapeError when the shapes are inconsistent. Otherwise lists every
/// violated constraint with its residual.
ValidationReport validate_model(const SequentialModel& m,
                                double tol = kDefaultTolerance);

/// Throws InvariantError naming the first violation.
void require_valid(const SequentialModel& m, double tol = kDefaultTolerance);

Degeneracies degeneracy_marginals(const SequentialModel& m);
JointDistribution joint_distributions(const SequentialModel& m);
MarginalSet marginal_set(const SequentialModel& m);
ConditionalMatrix conditional_pi(const SequentialModel& m);

/// Expectation of c(i,j)/x(i). Points with x(i) = 0 contribute c(i,j) Pi(j|i)
/// (x(i) cancelled against P(i,j) = Pi(j|i) x(i)); no 0/0 is ever formed.
double expectation_regularized(const SequentialModel& m,
                               const RatioObservable& obs);

/// |<x~(j)/x(i)> - 1|
double j_equation_residual(const SequentialModel& m);

/// |<x(i)/x~(j)>_reverse - 1|, expectation under P~, regularised at x~(j) = 0.
double j_equation_reverse_residual(const SequentialModel& m);

/// x~(j) = q(j)/d~(j), the choice that makes p~ = q.
RealVector minimal_x_tilde(const SequentialModel& m);

/// Copy of m with x_tilde replaced.
SequentialModel with_x_tilde(SequentialModel m, RealVector x_tilde);

/// -sum p(i) log(p(i)/d(i)) in nats, with 0 log 0 = 0.
double modified_shannon_entropy(std::span<const double> p,
                                std::span<const double> d);

/// H(p) w.r.t. d, H(q) w.r.t. d~, and the cross term
/// -sum_j q(j) log(p~(j)/d~(j)). Expected ordering: H(p) <= H(q) <= cross.
EntropyChain entropy_chain(const SequentialModel& m);

/// <log X> for the J-equation observable; requires x(i) > 0 everywhere and
/// x~(j) > 0 wherever P(i,j) > 0. Used to check the Jensen direction.
double j_log_expectation(const SequentialModel& m);

}  // namespace seqmeas::stat_model
