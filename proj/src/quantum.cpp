#include "seqmeas/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "seqmeas/entropy.hpp"
#include "seqmeas/error.hpp"

namespace seqmeas::quantum {

using linalg::max_abs;
using linalg::multiply;
using linalg::trace_product_real;

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ShapeError(std::string(what) + ": matrix must be square and non-empty");
  }
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ShapeError(os.str());
  }
}

double clamp_probability(double p) {
  // round-off on an exactly-zero outcome has either sign
  if (std::abs(p) < kProbabilityClamp) return 0.0;
  return std::clamp(p, 0.0, 1.0);
}

bool all_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

}  // namespace

// ---------------------------------------------------------------------------
// Validated value types

DensityOperator DensityOperator::from_matrix(ComplexMatrix m, double tol) {
  require_square(m, "density operator");
  if (!all_finite(m)) {
    throw InvariantError("density operator entries finite",
                         std::numeric_limits<double>::infinity());
  }
  const double herm = linalg::hermiticity_residual(m);
  if (herm >= tol) throw InvariantError("density operator Hermitian", herm);
  const double trace_err = std::abs(m.trace() - cplx{1.0, 0.0});
  if (trace_err >= tol) throw InvariantError("density operator unit trace", trace_err);
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  const double min_eig = linalg::hermitian_eigendecomposition(sym).values(0);
  if (min_eig <= -tol) {
    throw InvariantError("density operator positive semidefinite", -min_eig);
  }
  return DensityOperator(std::move(sym));
}

DensityOperator DensityOperator::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (psi.size() == 0 || !(norm > 0.0)) {
    throw InputError("pure state: vector must be non-zero");
  }
  return from_matrix(linalg::outer(psi / norm));
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  if (dim < 1) throw ShapeError("maximally mixed state: dim must be positive");
  return DensityOperator(linalg::identity(dim) / static_cast<double>(dim));
}

Unitary Unitary::from_matrix(ComplexMatrix m, double tol) {
  require_square(m, "unitary");
  if (!all_finite(m)) {
    throw InvariantError("unitary entries finite",
                         std::numeric_limits<double>::infinity());
  }
  const double r = linalg::unitarity_residual(m);
  if (r >= tol) throw InvariantError("unitary U^dagger U = 1", r);
  return Unitary(std::move(m));
}

Unitary Unitary::identity(Eigen::Index dim) {
  if (dim < 1) throw ShapeError("identity unitary: dim must be positive");
  return Unitary(linalg::identity(dim));
}

FamilyResiduals ProjectorFamily::residuals(
    const std::vector<ComplexMatrix>& projectors) {
  FamilyResiduals r;
  if (projectors.empty()) return r;
  const Eigen::Index dim = projectors.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (std::size_t a = 0; a < projectors.size(); ++a) {
    const ComplexMatrix& p = projectors[a];
    r.idempotency = std::max(r.idempotency, max_abs(multiply(p, p) - p));
    r.hermiticity = std::max(r.hermiticity, linalg::hermiticity_residual(p));
    const double tr = p.trace().real();
    r.degeneracy = std::max(r.degeneracy, std::abs(tr - std::round(tr)));
    sum += p;
    for (std::size_t b = a + 1; b < projectors.size(); ++b) {
      r.orthogonality = std::max(r.orthogonality, max_abs(multiply(p, projectors[b])));
    }
  }
  r.completeness = max_abs(sum - linalg::identity(dim));
  return r;
}

ProjectorFamily ProjectorFamily::from_projectors(
    std::vector<ComplexMatrix> projectors, std::vector<int> labels) {
  if (projectors.empty()) throw ShapeError("projector family: no projectors");
  const Eigen::Index dim = projectors.front().rows();
  for (const auto& p : projectors) {
    require_square(p, "projector");
    require_same_dim(p.rows(), dim, "projector family");
    if (!all_finite(p)) {
      throw InvariantError("projector entries finite",
                           std::numeric_limits<double>::infinity());
    }
  }
  if (labels.empty()) {
    labels.resize(projectors.size());
    std::iota(labels.begin(), labels.end(), 0);
  } else if (labels.size() != projectors.size()) {
    throw ShapeError("projector family: label count differs from projector count");
  }

  const FamilyResiduals r = residuals(projectors);
  if (r.hermiticity >= kProjectorTolerance) throw InvariantError("projector Hermitian", r.hermiticity);
  if (r.idempotency >= kProjectorTolerance) throw InvariantError("projector idempotent", r.idempotency);
  if (r.orthogonality >= kProjectorTolerance) throw InvariantError("projectors mutually orthogonal", r.orthogonality);
  if (r.completeness >= kProjectorTolerance) throw InvariantError("projectors complete", r.completeness);
  if (r.degeneracy >= kDegeneracyTolerance) throw InvariantError("projector trace integral", r.degeneracy);

  ProjectorFamily fam;
  fam.degeneracies_.reserve(projectors.size());
  for (const auto& p : projectors) {
    const int d = static_cast<int>(std::lround(p.trace().real()));
    if (d < 1) throw InvariantError("projector rank positive", 1.0 - d);
    fam.degeneracies_.push_back(d);
  }
  fam.projectors_ = std::move(projectors);
  fam.labels_ = std::move(labels);
  return fam;
}

ProjectorFamily ProjectorFamily::trivial(Eigen::Index dim) {
  if (dim < 1) throw ShapeError("trivial family: dim must be positive");
  return from_projectors({linalg::identity(dim)});
}

ProjectorFamily ProjectorFamily::computational_basis(Eigen::Index dim) {
  if (dim < 1) throw ShapeError("computational basis: dim must be positive");
  std::vector<ComplexMatrix> ps;
  for (Eigen::Index k = 0; k < dim; ++k) {
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    p(k, k) = 1.0;
    ps.push_back(std::move(p));
  }
  return from_projectors(std::move(ps));
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  const Eigen::Index dim = family.dim();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    out += eigenvalues[k] * family[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral machinery

SpectralDecomposition spectral_projectors(const ComplexMatrix& a,
                                          double cluster_tol) {
  require_square(a, "spectral_projectors");
  const auto es = linalg::hermitian_eigendecomposition(a);
  const Eigen::Index n = es.values.size();

  std::vector<double> reps;
  std::vector<ComplexMatrix> projectors;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && es.values(end) - es.values(end - 1) <= cluster_tol) ++end;
    const auto block = es.vectors.middleCols(start, end - start);
    projectors.push_back(block * block.adjoint());
    reps.push_back(es.values.segment(start, end - start).mean());
    start = end;
  }
  return {std::move(reps), ProjectorFamily::from_projectors(std::move(projectors))};
}

JointDecomposition joint_eigenprojections(const std::vector<ComplexMatrix>& ops,
                                          std::mt19937_64& rng,
                                          double cluster_tol) {
  if (ops.empty()) throw ShapeError("joint_eigenprojections: no operators");
  const Eigen::Index dim = ops.front().rows();
  for (const auto& op : ops) {
    require_square(op, "joint_eigenprojections");
    require_same_dim(op.rows(), dim, "joint_eigenprojections");
    const double herm = linalg::hermiticity_residual(op);
    if (herm > 1e-10 * std::max(1.0, max_abs(op))) {
      throw InputError("joint_eigenprojections: operator is not Hermitian");
    }
  }
  for (std::size_t a = 0; a < ops.size(); ++a) {
    for (std::size_t b = a + 1; b < ops.size(); ++b) {
      const double comm = max_abs(multiply(ops[a], ops[b]) - multiply(ops[b], ops[a]));
      if (comm >= kCommutatorTolerance) {
        std::ostringstream os;
        os << "joint_eigenprojections: operators " << a << " and " << b
           << " do not commute (residual " << comm << ")";
        throw InputError(os.str());
      }
    }
  }

  if (ops.size() == 1) {
    SpectralDecomposition sd = spectral_projectors(ops.front(), cluster_tol);
    JointDecomposition out{std::move(sd.family), {}, 1};
    for (double v : sd.eigenvalues) out.eigenvalue_tuples.push_back({v});
    return out;
  }

  constexpr int kMaxAttempts = 3;
  std::uniform_real_distribution<double> coeff(0.5, 1.5);
  const std::size_t n_ops = ops.size();
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    ComplexMatrix combo = ComplexMatrix::Zero(dim, dim);
    for (const auto& op : ops) combo += coeff(rng) * op;
    const auto es = linalg::hermitian_eigendecomposition(combo);

    struct Group {
      std::vector<double> tuple;
      std::vector<Eigen::Index> members;
    };
    std::vector<Group> groups;
    for (Eigen::Index k = 0; k < dim; ++k) {
      const ComplexVector v = es.vectors.col(k);
      std::vector<double> t(n_ops);
      for (std::size_t l = 0; l < n_ops; ++l) {
        t[l] = v.dot(ops[l] * v).real();
      }
      auto match = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
        for (std::size_t l = 0; l < n_ops; ++l) {
          if (std::abs(g.tuple[l] - t[l]) > cluster_tol) return false;
        }
        return true;
      });
      if (match == groups.end()) groups.push_back({t, {k}});
      else match->members.push_back(k);
    }
    std::sort(groups.begin(), groups.end(),
              [](const Group& a, const Group& b) { return a.tuple < b.tuple; });

    std::vector<ComplexMatrix> projectors;
    std::vector<std::vector<double>> tuples;
    for (const auto& g : groups) {
      ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
      for (Eigen::Index k : g.members) p += linalg::outer(es.vectors.col(k));
      projectors.push_back(std::move(p));
      tuples.push_back(g.tuple);
    }

    bool reconstructs = true;
    for (std::size_t l = 0; l < n_ops && reconstructs; ++l) {
      ComplexMatrix rebuilt = ComplexMatrix::Zero(dim, dim);
      for (std::size_t k = 0; k < projectors.size(); ++k) {
        rebuilt += tuples[k][l] * projectors[k];
      }
      reconstructs = max_abs(rebuilt - ops[l]) < 1e-8;
    }
    if (!reconstructs) continue;
    return {ProjectorFamily::from_projectors(std::move(projectors)),
            std::move(tuples), attempt};
  }
  throw InputError("joint_eigenprojections: no generic combination separated "
                   "the joint eigenspaces after 3 attempts");
}

// ---------------------------------------------------------------------------
// Measurements

std::vector<double> outcome_probabilities(const DensityOperator& rho,
                                          const ProjectorFamily& fam) {
  require_same_dim(rho.dim(), fam.dim(), "outcome_probabilities");
  std::vector<double> p(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    p[i] = clamp_probability(trace_product_real(rho.matrix(), fam[i]));
  }
  return p;
}

DensityOperator luders_select(const DensityOperator& rho0,
                              const ComplexMatrix& projector,
                              double threshold) {
  require_same_dim(rho0.dim(), projector.rows(), "luders_select");
  const double p = trace_product_real(rho0.matrix(), projector);
  if (!(p > threshold)) {
    std::ostringstream os;
    os << "luders_select: outcome probability " << p
       << " is not above the threshold " << threshold;
    throw InputError(os.str());
  }
  return DensityOperator::from_matrix(multiply(projector, rho0.matrix(), projector) / p);
}

DensityOperator luders_channel(const DensityOperator& rho,
                               const ProjectorFamily& fam) {
  require_same_dim(rho.dim(), fam.dim(), "luders_channel");
  ComplexMatrix sigma = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& p : fam.projectors()) sigma += multiply(p, rho.matrix(), p);
  return DensityOperator::from_matrix(std::move(sigma));
}

AssumptionReport assumption_holds(const DensityOperator& rho0,
                                  const ProjectorFamily& fam, double tol) {
  require_same_dim(rho0.dim(), fam.dim(), "assumption_holds");
  AssumptionReport report;
  report.probabilities = outcome_probabilities(rho0, fam);
  report.residuals.resize(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (!(report.probabilities[i] > kSelectThreshold)) {
      report.all_outcomes_positive = false;
      continue;
    }
    const DensityOperator selected = luders_select(rho0, fam[i]);
    const double r = max_abs(selected.matrix() -
                             fam[i] / static_cast<double>(fam.degeneracies()[i]));
    report.residuals[i] = r;
    if (!(r < tol)) report.holds = false;
  }
  return report;
}

RealMatrix transition_matrix(const ProjectorFamily& first_fam, const Unitary& u,
                             const ProjectorFamily& second_fam) {
  require_same_dim(first_fam.dim(), u.dim(), "transition_matrix");
  require_same_dim(first_fam.dim(), second_fam.dim(), "transition_matrix");
  RealMatrix pi(static_cast<Eigen::Index>(second_fam.size()),
                static_cast<Eigen::Index>(first_fam.size()));
  const ComplexMatrix u_adj = u.matrix().adjoint();
  for (std::size_t i = 0; i < first_fam.size(); ++i) {
    const ComplexMatrix evolved = multiply(u.matrix(), first_fam[i], u_adj);
    for (std::size_t j = 0; j < second_fam.size(); ++j) {
      pi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          trace_product_real(second_fam[j], evolved);
    }
  }
  return pi;
}

stat_model::SequentialModel build_sequential_model(
    const DensityOperator& rho0, const ProjectorFamily& first_fam,
    const Unitary& u, const ProjectorFamily& second_fam,
    std::span<const double> p_tilde, double tol) {
  require_same_dim(rho0.dim(), first_fam.dim(), "build_sequential_model (first family)");
  require_same_dim(rho0.dim(), u.dim(), "build_sequential_model (unitary)");
  require_same_dim(rho0.dim(), second_fam.dim(), "build_sequential_model (second family)");
  if (p_tilde.size() != second_fam.size()) {
    throw ShapeError("build_sequential_model: p_tilde length differs from second family size");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < p_tilde.size(); ++j) {
    if (!(p_tilde[j] > 0.0) || !std::isfinite(p_tilde[j])) {
      throw InputError("build_sequential_model: p_tilde(" + std::to_string(j) +
                       ") must be strictly positive");
    }
    total += p_tilde[j];
  }
  if (std::abs(total - 1.0) > stat_model::kDefaultTolerance) {
    throw InputError("build_sequential_model: p_tilde does not sum to 1");
  }

  const AssumptionReport assumption = assumption_holds(rho0, first_fam, tol);
  if (!assumption.holds) {
    double worst = 0.0;
    for (const auto& r : assumption.residuals) worst = std::max(worst, r.value_or(0.0));
    throw InvariantError("first-measurement states equal P_i/d(i)", worst);
  }

  const auto n_first = static_cast<Eigen::Index>(first_fam.size());
  const auto n_second = static_cast<Eigen::Index>(second_fam.size());
  stat_model::SequentialModel m;
  m.pi = transition_matrix(first_fam, u, second_fam);
  m.x.resize(n_first);
  m.x_tilde.resize(n_second);
  for (Eigen::Index i = 0; i < n_first; ++i) {
    const auto si = static_cast<std::size_t>(i);
    m.x(i) = assumption.probabilities[si] / first_fam.degeneracies()[si];
  }
  for (Eigen::Index j = 0; j < n_second; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    m.x_tilde(j) = p_tilde[sj] / second_fam.degeneracies()[sj];
  }
  return m;
}

RealMatrix sequential_probabilities(const DensityOperator& rho0,
                                    const ProjectorFamily& first_fam,
                                    const Unitary& u,
                                    const ProjectorFamily& second_fam) {
  require_same_dim(rho0.dim(), first_fam.dim(), "sequential_probabilities");
  require_same_dim(rho0.dim(), u.dim(), "sequential_probabilities");
  require_same_dim(rho0.dim(), second_fam.dim(), "sequential_probabilities");
  RealMatrix out(static_cast<Eigen::Index>(first_fam.size()),
                 static_cast<Eigen::Index>(second_fam.size()));
  const ComplexMatrix u_adj = u.matrix().adjoint();
  for (std::size_t i = 0; i < first_fam.size(); ++i) {
    const ComplexMatrix post = multiply(
        multiply(u.matrix(), first_fam[i]),
        multiply(rho0.matrix(), first_fam[i], u_adj));
    for (std::size_t j = 0; j < second_fam.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          trace_product_real(second_fam[j], post);
    }
  }
  return out;
}

std::vector<double> boltzmann_p_tilde(std::span<const double> energies,
                                      std::span<const int> degeneracies,
                                      double beta) {
  if (energies.size() != degeneracies.size() || energies.empty()) {
    throw ShapeError("boltzmann_p_tilde: energies and degeneracies must match");
  }
  const double e_min = *std::min_element(energies.begin(), energies.end());
  std::vector<double> w(energies.size());
  double z = 0.0;
  for (std::size_t j = 0; j < energies.size(); ++j) {
    w[j] = degeneracies[j] * std::exp(-beta * (energies[j] - e_min));
    z += w[j];
  }
  for (double& v : w) v /= z;
  return w;
}

std::vector<double> minimal_p_tilde(const DensityOperator& rho0,
                                    const ProjectorFamily& first_fam,
                                    const Unitary& u,
                                    const ProjectorFamily& second_fam) {
  const DensityOperator after_first = luders_channel(rho0, first_fam);
  const DensityOperator evolved = DensityOperator::from_matrix(
      multiply(u.matrix(), after_first.matrix(), u.matrix().adjoint()));
  return outcome_probabilities(evolved, second_fam);
}

GibbsState gibbs_state(const ComplexMatrix& h, double beta) {
  require_square(h, "gibbs_state");
  if (!std::isfinite(beta)) throw InputError("gibbs_state: beta must be finite");
  const auto es = linalg::hermitian_eigendecomposition(h);
  const double e_min = es.values.minCoeff();
  RealVector w(es.values.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    w(k) = std::exp(-beta * (es.values(k) - e_min));
  }
  const double z = w.sum();
  ComplexMatrix rho = es.vectors * (w / z).cast<cplx>().asDiagonal() *
                      es.vectors.adjoint();
  return {DensityOperator::from_matrix(std::move(rho)), -beta * e_min + std::log(z)};
}

WorkStatistics two_point_work_protocol(const ComplexMatrix& h0,
                                       const ComplexMatrix& h1,
                                       const Unitary& u, double beta,
                                       double cluster_tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InputError("two_point_work_protocol: beta must be positive and finite");
  }
  require_square(h0, "two_point_work_protocol (H0)");
  require_square(h1, "two_point_work_protocol (H1)");
  require_same_dim(h0.rows(), h1.rows(), "two_point_work_protocol");
  require_same_dim(h0.rows(), u.dim(), "two_point_work_protocol");

  const SpectralDecomposition first = spectral_projectors(h0, cluster_tol);
  const SpectralDecomposition second = spectral_projectors(h1, cluster_tol);

  auto log_partition = [beta](const SpectralDecomposition& sd) {
    const double e_min = sd.eigenvalues.front();
    double z = 0.0;
    for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
      z += sd.family.degeneracies()[k] * std::exp(-beta * (sd.eigenvalues[k] - e_min));
    }
    return -beta * e_min + std::log(z);
  };
  const double log_z0 = log_partition(first);
  const double log_z1 = log_partition(second);

  // rho0 = exp(-beta H0)/Z0 is a function of the first family, so the
  // assumption on post-measurement states holds exactly and x(i) is the
  // Boltzmann factor itself. Working in logs keeps x(i) exp(beta E_i) exact
  // when x(i) underflows any sensible clamp.
  WorkStatistics stats;
  stats.model.pi = transition_matrix(first.family, u, second.family);
  stats.model.x.resize(static_cast<Eigen::Index>(first.eigenvalues.size()));
  for (std::size_t i = 0; i < first.eigenvalues.size(); ++i) {
    stats.model.x(static_cast<Eigen::Index>(i)) =
        std::exp(-beta * first.eigenvalues[i] - log_z0);
  }
  stats.model.x_tilde.resize(static_cast<Eigen::Index>(second.eigenvalues.size()));
  for (std::size_t j = 0; j < second.eigenvalues.size(); ++j) {
    stats.model.x_tilde(static_cast<Eigen::Index>(j)) =
        std::exp(-beta * second.eigenvalues[j] - log_z1);
  }
  stats.delta_free_energy = -(log_z1 - log_z0) / beta;
  stats.rhs = std::exp(log_z1 - log_z0);
  stats.lhs = 0.0;
  for (std::size_t i = 0; i < first.eigenvalues.size(); ++i) {
    for (std::size_t j = 0; j < second.eigenvalues.size(); ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      const double pi_ji = stats.model.pi(jj, ii);
      const double w = second.eigenvalues[j] - first.eigenvalues[i];
      stats.outcomes.push_back({static_cast<int>(i), static_cast<int>(j), w,
                                pi_ji * stats.model.x(ii)});
      stats.lhs += pi_ji * std::exp(-beta * second.eigenvalues[j] - log_z0);
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Composite systems

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Eigen::Index d1,
                            Eigen::Index d2, int keep) {
  if (d1 < 1 || d2 < 1 || rho.rows() != d1 * d2 || rho.cols() != d1 * d2) {
    std::ostringstream os;
    os << "partial_trace: a " << rho.rows() << "x" << rho.cols()
       << " matrix does not factor as " << d1 << " x " << d2;
    throw ShapeError(os.str());
  }
  if (keep == 1) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Eigen::Index a = 0; a < d1; ++a)
      for (Eigen::Index a2 = 0; a2 < d1; ++a2)
        for (Eigen::Index b = 0; b < d2; ++b) out(a, a2) += rho(a * d2 + b, a2 * d2 + b);
    return out;
  }
  if (keep == 2) {
    ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
    for (Eigen::Index b = 0; b < d2; ++b)
      for (Eigen::Index b2 = 0; b2 < d2; ++b2)
        for (Eigen::Index a = 0; a < d1; ++a) out(b, b2) += rho(a * d2 + b, a * d2 + b2);
    return out;
  }
  throw InputError("partial_trace: keep must be 1 or 2");
}

ComplexVector pure_state_vector(const DensityOperator& rho, double tol) {
  const auto es = linalg::hermitian_eigendecomposition(rho.matrix());
  const Eigen::Index top = es.values.size() - 1;
  if (es.values(top) < 1.0 - tol) {
    throw InputError("state is not pure (largest eigenvalue " +
                     std::to_string(es.values(top)) + ")");
  }
  return es.vectors.col(top);
}

DilationResult dilation_analysis(const DensityOperator& rho,
                                 const Unitary& u_total,
                                 const ProjectorFamily& ancilla_family,
                                 const ComplexVector& phi) {
  const Eigen::Index d1 = rho.dim();
  const Eigen::Index d2 = ancilla_family.dim();
  require_same_dim(u_total.dim(), d1 * d2, "dilation_analysis (total unitary)");
  require_same_dim(phi.size(), d2, "dilation_analysis (ancilla state)");
  if (std::abs(phi.norm() - 1.0) > 1e-10) {
    throw InputError("dilation_analysis: ancilla state is not normalised");
  }

  const ComplexMatrix initial = tensor_product(rho.matrix(), linalg::outer(phi));
  const ComplexMatrix& u = u_total.matrix();
  const ComplexMatrix u_adj = u.adjoint();
  const ComplexMatrix evolved = multiply(u, initial, u_adj);
  const ComplexMatrix id1 = linalg::identity(d1);

  ComplexMatrix measured = ComplexMatrix::Zero(d1 * d2, d1 * d2);
  ComplexMatrix rho_prime = ComplexMatrix::Zero(d1 * d2, d1 * d2);
  for (const auto& pn : ancilla_family.projectors()) {
    const ComplexMatrix lifted = tensor_product(id1, pn);
    measured += multiply(lifted, evolved, lifted);
    const ComplexMatrix qn = multiply(u_adj, lifted, u);
    rho_prime += multiply(qn, initial, qn);
  }

  DilationResult out{
      DensityOperator::from_matrix(partial_trace(measured, d1, d2, 1)),
      DensityOperator::from_matrix(std::move(rho_prime)),
      0, 0, 0, 0, 0, 0};
  out.s1 = entropy::von_neumann_entropy(rho);
  out.s2 = entropy::von_neumann_entropy(out.rho_prime);
  out.s31 = entropy::von_neumann_entropy(
      DensityOperator::from_matrix(partial_trace(out.rho_prime.matrix(), d1, d2, 1)));
  out.s32 = entropy::von_neumann_entropy(
      DensityOperator::from_matrix(partial_trace(out.rho_prime.matrix(), d1, d2, 2)));
  out.s3 = out.s31 + out.s32;
  out.s_sigma = entropy::von_neumann_entropy(out.sigma);
  return out;
}

}  // namespace seqmeas::quantum
