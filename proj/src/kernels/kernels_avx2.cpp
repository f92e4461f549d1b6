#include "ssrbell/kernels.hpp"

#ifdef SSRBELL_HAVE_AVX2

#include <immintrin.h>

namespace ssrbell::kernels::avx2 {

// Complex vectors are interleaved (re, im) doubles, so one __m256d holds two
// complex values.  A real coefficient pair (r0, r1) is expanded to
// (r0, r0, r1, r1) to line up with the interleaving.
void real_matvec_cplx(const double* m, std::size_t rows, std::size_t cols,
                      const std::complex<double>* x, std::complex<double>* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = m + r * cols;
    __m256d acc = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 2 <= cols; c += 2) {
      __m128d coef2 = _mm_loadu_pd(row + c);
      __m256d coef = _mm256_permute_pd(
          _mm256_insertf128_pd(_mm256_castpd128_pd256(coef2), coef2, 1), 0b1100);
      __m256d xv = _mm256_loadu_pd(xd + 2 * c);
      acc = _mm256_fmadd_pd(coef, xv, acc);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d sum = _mm_add_pd(lo, hi);
    double re = _mm_cvtsd_f64(sum);
    double im = _mm_cvtsd_f64(_mm_unpackhi_pd(sum, sum));
    for (; c < cols; ++c) {
      re += row[c] * x[c].real();
      im += row[c] * x[c].imag();
    }
    y[r] = {re, im};
  }
}

void accumulate_sq_mag(const std::complex<double>* src, std::size_t n,
                       double w, double* dst) {
  const double* sd = reinterpret_cast<const double*>(src);
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(sd + 2 * i);      // re0 im0 re1 im1
    __m256d b = _mm256_loadu_pd(sd + 2 * i + 4);  // re2 im2 re3 im3
    __m256d sq = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    // hadd lane order is (a0, b0, a1, b1); restore (a0, a1, b0, b1).
    sq = _mm256_permute4x64_pd(sq, 0b11011000);
    __m256d d = _mm256_loadu_pd(dst + i);
    _mm256_storeu_pd(dst + i, _mm256_fmadd_pd(wv, sq, d));
  }
  for (; i < n; ++i) {
    const double re = src[i].real(), im = src[i].imag();
    dst[i] += w * (re * re + im * im);
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  __m128d sum = _mm_add_pd(_mm256_castpd256_pd128(acc),
                           _mm256_extractf128_pd(acc, 1));
  double out = _mm_cvtsd_f64(sum) + _mm_cvtsd_f64(_mm_unpackhi_pd(sum, sum));
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

double sum_sq_mag(const std::complex<double>* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  __m128d sum = _mm_add_pd(_mm256_castpd256_pd128(acc),
                           _mm256_extractf128_pd(acc, 1));
  double out = _mm_cvtsd_f64(sum) + _mm_cvtsd_f64(_mm_unpackhi_pd(sum, sum));
  for (; i < n; ++i) out += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return out;
}

}  // namespace ssrbell::kernels::avx2

#endif  // SSRBELL_HAVE_AVX2
