#pragma once

// Thin operator-algebra layer over Eigen. Products and trace inner products go
// through the runtime-dispatched kernels in kernels.hpp.

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace seqmeas {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace linalg {

/// A * B via the active kernel backend.
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);

/// A * B * C
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b,
                       const ComplexMatrix& c);

/// Tr(A^dagger B) = sum_ij conj(A_ij) B_ij. Equals Tr(A B) when A is Hermitian.
cplx trace_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Real part of Tr(A B) for Hermitian A and B.
double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& a);

/// max |A - A^dagger|
double hermiticity_residual(const ComplexMatrix& a);

/// max |U^dagger U - 1|
double unitarity_residual(const ComplexMatrix& u);

/// Outer product |v><v|
ComplexMatrix outer(const ComplexVector& v);

ComplexMatrix identity(Eigen::Index dim);

struct Eigensystem {
  RealVector values;       // ascending
  ComplexMatrix vectors;   // columns are orthonormal eigenvectors
};

/// Eigendecomposition of the Hermitian part of A. Throws InputError if A is
/// not Hermitian to within tol * max(1, max|A|).
Eigensystem hermitian_eigendecomposition(const ComplexMatrix& a,
                                         double tol = 1e-10);

/// f(A) = V f(Lambda) V^dagger for Hermitian A.
template <typename F>
ComplexMatrix hermitian_function(const ComplexMatrix& a, F&& f) {
  const Eigensystem es = hermitian_eigendecomposition(a);
  ComplexVector fvals(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) fvals(k) = f(es.values(k));
  return es.vectors * fvals.asDiagonal() * es.vectors.adjoint();
}

}  // namespace linalg
}  // namespace seqmeas
