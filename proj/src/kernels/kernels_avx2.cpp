// Compiled with -mavx2 -mfma. Only reached after a CPUID check in dispatch.cpp,
// so nothing in this file may be inlined into code that runs unconditionally.

#include <immintrin.h>

#include "seqmeas/kernels.hpp"

namespace seqmeas::kernels::avx2 {

namespace {

// Lanes hold [re0, im0, re1, im1].
inline double hsum_even_odd_diff(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] - lanes[1]) + (lanes[2] - lanes[3]);
}

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

cplx cdotc(std::size_t n, const cplx* a, const cplx* b) {
  const auto* pa = reinterpret_cast<const double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  __m256d re_acc = _mm256_setzero_pd();  // ar*br, ai*bi
  __m256d im_acc = _mm256_setzero_pd();  // ar*bi, ai*br
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * k);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * k);
    re_acc = _mm256_fmadd_pd(va, vb, re_acc);
    im_acc = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), im_acc);
  }
  double re = hsum(re_acc);
  double im = hsum_even_odd_diff(im_acc);
  for (; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void cgemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
           const cplx* b, cplx* c) {
  const auto* pa = reinterpret_cast<const double*>(a);
  auto* pc = reinterpret_cast<double*>(c);
  for (std::size_t j = 0; j < n; ++j) {
    double* cj = pc + 2 * j * m;
    for (std::size_t i = 0; i < 2 * m; ++i) cj[i] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx bpj = b[j * k + p];
      const __m256d br = _mm256_set1_pd(bpj.real());
      const __m256d bi = _mm256_set1_pd(bpj.imag());
      const double* ap = pa + 2 * p * m;
      std::size_t i = 0;
      for (; i + 2 <= m; i += 2) {
        const __m256d va = _mm256_loadu_pd(ap + 2 * i);
        const __m256d swapped = _mm256_mul_pd(_mm256_permute_pd(va, 0b0101), bi);
        // even lanes: ar*br - ai*bi, odd lanes: ai*br + ar*bi
        const __m256d prod = _mm256_fmaddsub_pd(va, br, swapped);
        _mm256_storeu_pd(cj + 2 * i,
                         _mm256_add_pd(_mm256_loadu_pd(cj + 2 * i), prod));
      }
      for (; i < m; ++i) {
        const double ar = ap[2 * i], ai = ap[2 * i + 1];
        cj[2 * i] += ar * bpj.real() - ai * bpj.imag();
        cj[2 * i + 1] += ai * bpj.real() + ar * bpj.imag();
      }
    }
  }
}

}  // namespace seqmeas::kernels::avx2
