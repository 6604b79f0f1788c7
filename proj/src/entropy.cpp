#include "seqmeas/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "seqmeas/error.hpp"

namespace seqmeas::entropy {

namespace {

void require_same_dim(const DensityOperator& a, const DensityOperator& b,
                      const char* what) {
  if (a.dim() != b.dim()) {
    throw ShapeError(std::string(what) + ": operators have different dimensions");
  }
}

double clamp_eigen(double v) { return (v < 0.0 && v >= -kEigenClamp) ? 0.0 : v; }

}  // namespace

double spectrum_entropy(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double raw : eigenvalues) {
    const double v = clamp_eigen(raw);
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
  const auto es = linalg::hermitian_eigendecomposition(rho.matrix());
  return spectrum_entropy({es.values.data(), static_cast<std::size_t>(es.values.size())});
}

RelativeEntropy relative_entropy(const DensityOperator& rho,
                                 const DensityOperator& sigma,
                                 double cluster_tol) {
  require_same_dim(rho, sigma, "relative_entropy");
  const auto rho_sd = quantum::spectral_projectors(rho.matrix(), cluster_tol);
  const auto sigma_sd = quantum::spectral_projectors(sigma.matrix(), cluster_tol);

  RelativeEntropy out{MaybeInfinite::finite(0.0), false};
  double rho_log_rho = 0.0;
  for (std::size_t i = 0; i < rho_sd.eigenvalues.size(); ++i) {
    const double r = clamp_eigen(rho_sd.eigenvalues[i]);
    // Eigenvalues at or below the support threshold are dropped from both
    // traces so that S(rho||rho) cancels exactly.
    if (r > kSupportEigen) rho_log_rho += r * std::log(r) * rho_sd.family.degeneracies()[i];
  }

  double rho_log_sigma = 0.0;
  bool diverges = false;
  for (std::size_t i = 0; i < rho_sd.eigenvalues.size(); ++i) {
    const double r = clamp_eigen(rho_sd.eigenvalues[i]);
    if (!(r > kSupportEigen)) continue;
    for (std::size_t j = 0; j < sigma_sd.eigenvalues.size(); ++j) {
      const double s = clamp_eigen(sigma_sd.eigenvalues[j]);
      const double overlap =
          linalg::trace_product_real(rho_sd.family[i], sigma_sd.family[j]);
      if (s < kSupportEigen) {
        if (overlap > kSupportOverlap) diverges = true;
        if (overlap > 0.1 * kSupportOverlap && overlap <= 10.0 * kSupportOverlap) {
          out.near_support_boundary = true;
        }
        continue;
      }
      if (s < 10.0 * kSupportEigen && overlap > kSupportOverlap) {
        out.near_support_boundary = true;
      }
      rho_log_sigma += r * std::log(s) * overlap;
    }
  }
  out.value = diverges ? MaybeInfinite::infinity()
                       : MaybeInfinite::finite(rho_log_rho - rho_log_sigma);
  return out;
}

KleinReport klein_check(const DensityOperator& rho, const DensityOperator& sigma,
                        double cluster_tol) {
  const RelativeEntropy rel = relative_entropy(rho, sigma, cluster_tol);
  KleinReport report{rel.value, 0.0, true};
  if (rel.value.is_finite()) {
    report.residual = std::max(0.0, -rel.value.value());
    report.pass = rel.value.value() >= -kKleinTolerance;
  }
  return report;
}

double MinimalityReport::max_residual() const {
  double r = 0.0;
  for (double v : residuals) r = std::max(r, v);
  return r;
}

MinimalityReport is_minimal_pair(const DensityOperator& rho,
                                 const DensityOperator& sigma,
                                 double cluster_tol, double tol) {
  require_same_dim(rho, sigma, "is_minimal_pair");
  const auto sd = quantum::spectral_projectors(sigma.matrix(), cluster_tol);
  MinimalityReport report{true, sd.eigenvalues, sd.family.degeneracies(), {}, {}, {}};
  for (std::size_t j = 0; j < sd.family.size(); ++j) {
    const double q = linalg::trace_product_real(rho.matrix(), sd.family[j]);
    const double pt = linalg::trace_product_real(sigma.matrix(), sd.family[j]);
    report.q.push_back(q);
    report.p_tilde.push_back(pt);
    report.residuals.push_back(std::abs(pt - q));
    if (!(std::abs(pt - q) < tol)) report.minimal = false;
  }
  return report;
}

MinimalIdentity minimal_identity_check(const DensityOperator& rho,
                                       const DensityOperator& sigma,
                                       double cluster_tol) {
  MinimalIdentity out{von_neumann_entropy(rho), von_neumann_entropy(sigma),
                      relative_entropy(rho, sigma, cluster_tol).value, std::nullopt};
  if (out.relative_entropy.is_finite()) {
    out.residual =
        std::abs(out.relative_entropy.value() - (out.s_sigma - out.s_rho));
  }
  return out;
}

CounterexamplePair counterexample_pair() {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(1) = 0.5;
  phi(2) = std::sqrt(3.0) / 2.0;
  const ComplexMatrix rho = linalg::outer(phi);
  const ComplexMatrix sigma =
      quantum::tensor_product(quantum::partial_trace(rho, 2, 2, 1),
                              quantum::partial_trace(rho, 2, 2, 2));
  return {DensityOperator::from_matrix(rho), DensityOperator::from_matrix(sigma)};
}

LudersEntropyReport luders_entropy_check(const DensityOperator& rho,
                                         const ProjectorFamily& fam, double tol) {
  const DensityOperator sigma = quantum::luders_channel(rho, fam);
  LudersEntropyReport report{};
  report.s_before = von_neumann_entropy(rho);
  report.s_after = von_neumann_entropy(sigma);
  report.gap = report.s_after - report.s_before;
  report.pass = report.gap >= -tol;
  report.minimality = is_minimal_pair(rho, sigma);
  report.identity = minimal_identity_check(rho, sigma);
  return report;
}

EntropyReport make_entropy_report(const DensityOperator& rho,
                                  const DensityOperator& sigma,
                                  double cluster_tol) {
  const MinimalIdentity id = minimal_identity_check(rho, sigma, cluster_tol);
  const MinimalityReport minimal = is_minimal_pair(rho, sigma, cluster_tol);
  EntropyReport report{id.s_rho, id.s_sigma, id.relative_entropy,
                       id.s_sigma - id.s_rho, minimal.minimal, {}};
  report.residuals["minimality"] = minimal.max_residual();
  report.residuals["klein"] =
      id.relative_entropy.is_finite() ? std::max(0.0, -id.relative_entropy.value()) : 0.0;
  if (id.residual) report.residuals["minimal_identity"] = *id.residual;
  return report;
}

}  // namespace seqmeas::entropy
