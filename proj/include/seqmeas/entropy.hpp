#pragma once

// Von Neumann and relative entropy, plus checkers for Klein's inequality,
// minimal pairs, and entropy growth under Lueders channels. All entropies are
// in nats.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqmeas/extended.hpp"
#include "seqmeas/quantum.hpp"

namespace seqmeas::entropy {

/// Eigenvalues in [-kEigenClamp, 0) are treated as zero inside entropy sums.
inline constexpr double kEigenClamp = 1e-10;
/// Divergence rule: r_i > kSupportEigen, s_j < kSupportEigen and
/// Tr(P_i Q_j) > kSupportOverlap make S(rho||sigma) infinite.
inline constexpr double kSupportEigen = 1e-12;
inline constexpr double kSupportOverlap = 1e-10;
inline constexpr double kKleinTolerance = 1e-10;
inline constexpr double kMinimalTolerance = 1e-10;

using quantum::DensityOperator;
using quantum::ProjectorFamily;

double von_neumann_entropy(const DensityOperator& rho);

/// -sum lambda log lambda over a spectrum, with 0 log 0 = 0.
double spectrum_entropy(std::span<const double> eigenvalues);

struct RelativeEntropy {
  MaybeInfinite value;
  /// Set when some (r_i, s_j, overlap) triple sits within a factor of ten of
  /// the divergence thresholds, i.e. the finite/infinite verdict is fragile.
  bool near_support_boundary = false;
};

/// S(rho||sigma) = Tr(rho log rho) - Tr(rho log sigma), evaluated through the
/// spectral decompositions of both operators.
RelativeEntropy relative_entropy(const DensityOperator& rho,
                                 const DensityOperator& sigma,
                                 double cluster_tol = quantum::kClusterTolerance);

struct KleinReport {
  MaybeInfinite relative_entropy;
  double residual;  // max(0, -S(rho||sigma)); 0 when infinite
  bool pass;
};

KleinReport klein_check(const DensityOperator& rho, const DensityOperator& sigma,
                        double cluster_tol = quantum::kClusterTolerance);

struct MinimalityReport {
  bool minimal;
  std::vector<double> cluster_eigenvalues;  // s_j, ascending
  std::vector<int> cluster_degeneracies;
  std::vector<double> q;        // Tr(rho Q_j)
  std::vector<double> p_tilde;  // Tr(sigma Q_j)
  std::vector<double> residuals;

  double max_residual() const;
};

/// Compares Tr(sigma Q_j) with Tr(rho Q_j) on the eigenprojections Q_j of
/// sigma (after clustering degenerate eigenvalues).
MinimalityReport is_minimal_pair(const DensityOperator& rho,
                                 const DensityOperator& sigma,
                                 double cluster_tol = quantum::kClusterTolerance,
                                 double tol = kMinimalTolerance);

struct MinimalIdentity {
  double s_rho;
  double s_sigma;
  MaybeInfinite relative_entropy;
  /// |S(rho||sigma) - (S(sigma) - S(rho))|; empty when the relative entropy
  /// is infinite.
  std::optional<double> residual;
};

MinimalIdentity minimal_identity_check(const DensityOperator& rho,
                                       const DensityOperator& sigma,
                                       double cluster_tol = quantum::kClusterTolerance);

struct CounterexamplePair {
  DensityOperator rho;
  DensityOperator sigma;
};

/// rho = |phi><phi| with phi = (|01> + sqrt(3)|10>)/2 on C^2 (x) C^2, and
/// sigma = Tr_2(rho) (x) Tr_1(rho). Not minimal, yet
/// S(rho||sigma) = S(sigma) - S(rho).
CounterexamplePair counterexample_pair();

struct LudersEntropyReport {
  double s_before;
  double s_after;
  double gap;  // s_after - s_before
  bool pass;
  MinimalityReport minimality;  // for the pair (rho, luders_channel(rho, fam))
  MinimalIdentity identity;
};

LudersEntropyReport luders_entropy_check(const DensityOperator& rho,
                                         const ProjectorFamily& fam,
                                         double tol = kKleinTolerance);

/// Summary of a (rho, sigma) comparison; serialised by io::to_json.
struct EntropyReport {
  double s_rho;
  double s_sigma;
  MaybeInfinite rel_entropy;
  double gap;
  bool is_minimal;
  std::map<std::string, double> residuals;
};

EntropyReport make_entropy_report(const DensityOperator& rho,
                                  const DensityOperator& sigma,
                                  double cluster_tol = quantum::kClusterTolerance);

}  // namespace seqmeas::entropy
