#pragma once

#include <complex>
#include <cstddef>

// Arithmetic inner loops shared by the state-transform and probability paths.
// Every kernel has a scalar reference implementation and, on x86-64 with AVX2,
// a vectorized variant selected once at startup.  The environment variable
// SSRBELL_SIMD=scalar|avx2|auto overrides the automatic choice.

namespace ssrbell::kernels {

// y[r] = sum_c m[r*cols + c] * x[c]   (m real, row-major; x, y complex)
void real_matvec_cplx(const double* m, std::size_t rows, std::size_t cols,
                      const std::complex<double>* x, std::complex<double>* y);

// dst[i] += w * |src[i]|^2
void accumulate_sq_mag(const std::complex<double>* src, std::size_t n,
                       double w, double* dst);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i |x[i]|^2
double sum_sq_mag(const std::complex<double>* x, std::size_t n);

// Name of the backend the dispatched entry points above are using.
const char* active_backend();

namespace scalar {
void real_matvec_cplx(const double* m, std::size_t rows, std::size_t cols,
                      const std::complex<double>* x, std::complex<double>* y);
void accumulate_sq_mag(const std::complex<double>* src, std::size_t n,
                       double w, double* dst);
double dot(const double* a, const double* b, std::size_t n);
double sum_sq_mag(const std::complex<double>* x, std::size_t n);
}  // namespace scalar

#ifdef SSRBELL_HAVE_AVX2
namespace avx2 {
void real_matvec_cplx(const double* m, std::size_t rows, std::size_t cols,
                      const std::complex<double>* x, std::complex<double>* y);
void accumulate_sq_mag(const std::complex<double>* src, std::size_t n,
                       double w, double* dst);
double dot(const double* a, const double* b, std::size_t n);
double sum_sq_mag(const std::complex<double>* x, std::size_t n);
}  // namespace avx2

// True when the running CPU supports the AVX2 variants.
bool avx2_supported();
#endif

}  // namespace ssrbell::kernels
