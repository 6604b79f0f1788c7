#include "seqmeas/kernels.hpp"

namespace seqmeas::kernels::scalar {

cplx cdotc(std::size_t n, const cplx* a, const cplx* b) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void cgemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
           const cplx* b, cplx* c) {
  for (std::size_t j = 0; j < n; ++j) {
    cplx* cj = c + j * m;
    for (std::size_t i = 0; i < m; ++i) cj[i] = cplx{0.0, 0.0};
    for (std::size_t p = 0; p < k; ++p) {
      const cplx bpj = b[j * k + p];
      const double br = bpj.real(), bi = bpj.imag();
      const cplx* ap = a + p * m;
      for (std::size_t i = 0; i < m; ++i) {
        const double ar = ap[i].real(), ai = ap[i].imag();
        cj[i] = cplx{cj[i].real() + (ar * br - ai * bi),
                     cj[i].imag() + (ai * br + ar * bi)};
      }
    }
  }
}

}  // namespace seqmeas::kernels::scalar
