#include "seqmeas/linalg.hpp"

#include <algorithm>
#include <string>

#include "seqmeas/error.hpp"
#include "seqmeas/kernels.hpp"

namespace seqmeas::linalg {

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("multiply: inner dimensions differ (" +
                     std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
  ComplexMatrix c(a.rows(), b.cols());
  kernels::active().cgemm(static_cast<std::size_t>(a.rows()),
                          static_cast<std::size_t>(b.cols()),
                          static_cast<std::size_t>(a.cols()), a.data(),
                          b.data(), c.data());
  return c;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b,
                       const ComplexMatrix& c) {
  return multiply(multiply(a, b), c);
}

cplx trace_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("trace_inner: shape mismatch");
  }
  return kernels::active().cdotc(static_cast<std::size_t>(a.size()), a.data(),
                                 b.data());
}

double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  return trace_inner(a, b).real();
}

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("hermiticity: matrix not square");
  return max_abs(a - a.adjoint());
}

double unitarity_residual(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw ShapeError("unitarity: matrix not square");
  return max_abs(multiply(u.adjoint(), u) - identity(u.rows()));
}

ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

ComplexMatrix identity(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

Eigensystem hermitian_eigendecomposition(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) {
    throw ShapeError("eigendecomposition: matrix not square");
  }
  const double scale = std::max(1.0, max_abs(a));
  const double herm = hermiticity_residual(a);
  if (herm > tol * scale) {
    throw InputError("eigendecomposition: matrix is not Hermitian (residual " +
                     std::to_string(herm) + ")");
  }
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw InputError("eigendecomposition: solver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace seqmeas::linalg
