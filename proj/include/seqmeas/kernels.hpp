#pragma once

// Dense complex kernels used on the hot paths of the operator algebra.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The variant is selected once at runtime from CPUID and
// can be overridden with SEQMEAS_KERNELS=scalar|avx2 or set_backend().
// Matrices are column-major with leading dimension equal to the row count
// (the Eigen default layout).

#include <complex>
#include <cstddef>
#include <string_view>

namespace seqmeas::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  /// sum_k conj(a[k]) * b[k]
  cplx (*cdotc)(std::size_t n, const cplx* a, const cplx* b);
  /// C (m x n) = A (m x k) * B (k x n); C must not alias A or B.
  void (*cgemm)(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
                const cplx* b, cplx* c);
};

namespace scalar {
cplx cdotc(std::size_t n, const cplx* a, const cplx* b);
void cgemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
           const cplx* b, cplx* c);
}  // namespace scalar

#if defined(SEQMEAS_HAVE_AVX2_KERNELS)
namespace avx2 {
cplx cdotc(std::size_t n, const cplx* a, const cplx* b);
void cgemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
           const cplx* b, cplx* c);
}  // namespace avx2
#endif

/// True when the AVX2 variant is compiled in and the CPU reports avx2 and fma.
bool avx2_available();

/// The table currently used by the linear-algebra layer.
const KernelTable& active();

/// Table for a specific backend. Falls back to scalar if unavailable.
const KernelTable& table(Backend backend);

/// Forces a backend. Returns false (and leaves the selection unchanged) if the
/// requested backend is not available on this machine.
bool set_backend(Backend backend);

std::string_view backend_name(Backend backend);

}  // namespace seqmeas::kernels
