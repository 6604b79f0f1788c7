#pragma once

// Finite-dimensional quantum realisation of the sequential-measurement model:
// validated operator types, spectral and joint eigenprojections, Lueders
// instruments, model construction from quantum data, the two-point work
// protocol, and measurement dilation.
//
// Tensor products use the left-factor-major convention: the basis of
// H1 (x) H2 is ordered (a1 b1, a1 b2, ..., a2 b1, ...), so
// (A (x) B)(a*dB + b, a'*dB + b') = A(a, a') B(b, b').

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "seqmeas/linalg.hpp"
#include "seqmeas/stat_model.hpp"

namespace seqmeas::quantum {

inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kProjectorTolerance = 1e-9;
inline constexpr double kDegeneracyTolerance = 1e-6;
inline constexpr double kClusterTolerance = 1e-8;
inline constexpr double kProbabilityClamp = 1e-12;
inline constexpr double kSelectThreshold = 1e-12;
inline constexpr double kCommutatorTolerance = 1e-8;

/// Hermitian, positive semidefinite, unit trace.
class DensityOperator {
 public:
  /// Validates and stores M. Throws InvariantError with the first violated
  /// constraint.
  static DensityOperator from_matrix(ComplexMatrix m,
                                     double tol = kStateTolerance);
  /// |psi><psi| / <psi|psi>
  static DensityOperator pure(const ComplexVector& psi);
  static DensityOperator maximally_mixed(Eigen::Index dim);

  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  explicit DensityOperator(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

class Unitary {
 public:
  static Unitary from_matrix(ComplexMatrix m, double tol = kStateTolerance);
  static Unitary identity(Eigen::Index dim);

  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  explicit Unitary(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

struct FamilyResiduals {
  double idempotency = 0.0;
  double hermiticity = 0.0;
  double orthogonality = 0.0;
  double completeness = 0.0;
  double degeneracy = 0.0;  // max |Tr P - round(Tr P)|
};

/// Complete family of mutually orthogonal projectors (a PVM).
class ProjectorFamily {
 public:
  /// Validates every invariant. Labels default to 0..n-1.
  static ProjectorFamily from_projectors(std::vector<ComplexMatrix> projectors,
                                         std::vector<int> labels = {});
  /// The trivial family {identity}.
  static ProjectorFamily trivial(Eigen::Index dim);
  /// Rank-1 projectors onto the computational basis.
  static ProjectorFamily computational_basis(Eigen::Index dim);

  static FamilyResiduals residuals(const std::vector<ComplexMatrix>& projectors);

  Eigen::Index dim() const { return projectors_.front().rows(); }
  std::size_t size() const { return projectors_.size(); }
  const ComplexMatrix& operator[](std::size_t k) const { return projectors_[k]; }
  const std::vector<ComplexMatrix>& projectors() const { return projectors_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<int>& degeneracies() const { return degeneracies_; }

 private:
  ProjectorFamily() = default;
  std::vector<ComplexMatrix> projectors_;
  std::vector<int> labels_;
  std::vector<int> degeneracies_;
};

/// Eigenvalue clusters (ascending) and their eigenprojections.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  ProjectorFamily family;

  ComplexMatrix reconstruct() const;
};

struct JointDecomposition {
  ProjectorFamily family;
  std::vector<std::vector<double>> eigenvalue_tuples;  // one tuple per projector
  int attempts = 1;
};

struct AssumptionReport {
  bool holds = true;  // Lueders states equal P_i/d(i) on p(i) > 0 outcomes
  bool all_outcomes_positive = true;     // p(i) > 0 for every outcome
  std::vector<double> probabilities;
  std::vector<std::optional<double>> residuals;  // empty for p(i) = 0
};

/// linalg::hermitian_eigendecomposition re-exported for callers of this module.
using linalg::Eigensystem;
using linalg::hermitian_eigendecomposition;

SpectralDecomposition spectral_projectors(const ComplexMatrix& a,
                                          double cluster_tol = kClusterTolerance);

/// Common eigenprojections of mutually commuting Hermitian operators. Draws
/// generic combination coefficients from rng; up to three attempts.
JointDecomposition joint_eigenprojections(const std::vector<ComplexMatrix>& ops,
                                          std::mt19937_64& rng,
                                          double cluster_tol = kClusterTolerance);

/// p(i) = Tr(rho P_i), clamped into [0, 1]; |p(i)| < kProbabilityClamp gives 0.
std::vector<double> outcome_probabilities(const DensityOperator& rho,
                                          const ProjectorFamily& fam);

/// P rho P / Tr(rho P). Throws InputError when Tr(rho P) <= threshold.
DensityOperator luders_select(const DensityOperator& rho0,
                              const ComplexMatrix& projector,
                              double threshold = kSelectThreshold);

/// sum_i P_i rho P_i
DensityOperator luders_channel(const DensityOperator& rho,
                               const ProjectorFamily& fam);

AssumptionReport assumption_holds(const DensityOperator& rho0,
                                  const ProjectorFamily& fam,
                                  double tol = 1e-9);

/// (J x I) matrix Tr(Q_j U P_i U^dagger). State independent.
RealMatrix transition_matrix(const ProjectorFamily& first_fam, const Unitary& u,
                             const ProjectorFamily& second_fam);

/// Pi(j|i) = Tr(Q_j U P_i U^dagger), x(i) = p(i)/d(i), x~(j) = p~(j)/d~(j).
/// Refuses (InvariantError) when the first-measurement states are not
/// P_i/d(i), or when p_tilde is not a strictly positive distribution.
stat_model::SequentialModel build_sequential_model(
    const DensityOperator& rho0, const ProjectorFamily& first_fam,
    const Unitary& u, const ProjectorFamily& second_fam,
    std::span<const double> p_tilde, double tol = 1e-9);

/// Joint outcome probabilities Tr(Q_j U P_i rho0 P_i U^dagger), (I x J).
RealMatrix sequential_probabilities(const DensityOperator& rho0,
                                    const ProjectorFamily& first_fam,
                                    const Unitary& u,
                                    const ProjectorFamily& second_fam);

/// p~(j) = d~(j) exp(-beta F_j) / Z for cluster energies F_j.
std::vector<double> boltzmann_p_tilde(std::span<const double> energies,
                                      std::span<const int> degeneracies,
                                      double beta);

/// p~(j) = q(j) = Tr(Q_j U rho U^dagger) with rho the post-first-measurement
/// state; the minimal-case choice.
std::vector<double> minimal_p_tilde(const DensityOperator& rho0,
                                    const ProjectorFamily& first_fam,
                                    const Unitary& u,
                                    const ProjectorFamily& second_fam);

/// exp(-beta H) / Z via eigendecomposition, plus log Z.
struct GibbsState {
  DensityOperator rho;
  double log_partition;
};
GibbsState gibbs_state(const ComplexMatrix& h, double beta);

struct WorkOutcome {
  int initial;   // index into the H0 eigenvalue clusters
  int final;     // index into the H1 eigenvalue clusters
  double work;   // F_j - E_i
  double probability;
};

struct WorkStatistics {
  std::vector<WorkOutcome> outcomes;
  double delta_free_energy;  // -(1/beta) log(Z1/Z0)
  double lhs;                // <exp(-beta w)>
  double rhs;                // exp(-beta delta F)
  stat_model::SequentialModel model;

  double residual() const { return std::abs(lhs - rhs); }
};

WorkStatistics two_point_work_protocol(const ComplexMatrix& h0,
                                       const ComplexMatrix& h1,
                                       const Unitary& u, double beta,
                                       double cluster_tol = kClusterTolerance);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// keep = 1 traces out the second factor, keep = 2 the first.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Eigen::Index d1,
                            Eigen::Index d2, int keep);

struct DilationResult {
  DensityOperator sigma;      // reduced object state after the instrument
  DensityOperator rho_prime;  // sum_n Q_n (rho (x) P_phi) Q_n
  double s1;                  // S(rho)
  double s2;                  // S(rho')
  double s31;                 // S(Tr_2 rho')
  double s32;                 // S(Tr_1 rho')
  double s3;                  // s31 + s32
  double s_sigma;             // S(sigma)
};

/// Instrument realised by coupling to an ancilla in the pure state phi,
/// evolving with U_total, Lueders-measuring the ancilla, and tracing it out.
DilationResult dilation_analysis(const DensityOperator& rho,
                                 const Unitary& u_total,
                                 const ProjectorFamily& ancilla_family,
                                 const ComplexVector& phi);

/// Unit vector psi with rho = |psi><psi|. Throws InputError if rho is mixed.
ComplexVector pure_state_vector(const DensityOperator& rho, double tol = 1e-10);

}  // namespace seqmeas::quantum
