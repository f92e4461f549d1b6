#include "ssrbell/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace ssrbell::kernels {

namespace {

struct Backend {
  const char* name;
  void (*real_matvec_cplx)(const double*, std::size_t, std::size_t,
                           const std::complex<double>*, std::complex<double>*);
  void (*accumulate_sq_mag)(const std::complex<double>*, std::size_t, double,
                            double*);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_sq_mag)(const std::complex<double>*, std::size_t);
};

constexpr Backend kScalar = {"scalar", &scalar::real_matvec_cplx,
                             &scalar::accumulate_sq_mag, &scalar::dot,
                             &scalar::sum_sq_mag};

#ifdef SSRBELL_HAVE_AVX2
constexpr Backend kAvx2 = {"avx2", &avx2::real_matvec_cplx,
                           &avx2::accumulate_sq_mag, &avx2::dot,
                           &avx2::sum_sq_mag};
#endif

const Backend& select_backend() {
  const char* env = std::getenv("SSRBELL_SIMD");
  const std::string mode = env ? env : "auto";
  if (mode == "scalar") return kScalar;
#ifdef SSRBELL_HAVE_AVX2
  if (mode == "avx2") {
    if (!avx2_supported())
      throw std::runtime_error("SSRBELL_SIMD=avx2 requested but the CPU lacks AVX2");
    return kAvx2;
  }
  if (mode == "auto" && avx2_supported()) return kAvx2;
#else
  if (mode == "avx2")
    throw std::runtime_error("SSRBELL_SIMD=avx2 requested but this build has no AVX2 kernels");
#endif
  if (mode != "auto" && mode != "scalar")
    throw std::runtime_error("unknown SSRBELL_SIMD value: " + mode);
  return kScalar;
}

const Backend& backend() {
  static const Backend& b = select_backend();
  return b;
}

}  // namespace

#ifdef SSRBELL_HAVE_AVX2
bool avx2_supported() {
  static const bool ok = __builtin_cpu_supports("avx2") &&
                         __builtin_cpu_supports("fma");
  return ok;
}
#endif

void real_matvec_cplx(const double* m, std::size_t rows, std::size_t cols,
                      const std::complex<double>* x, std::complex<double>* y) {
  backend().real_matvec_cplx(m, rows, cols, x, y);
}

void accumulate_sq_mag(const std::complex<double>* src, std::size_t n,
                       double w, double* dst) {
  backend().accumulate_sq_mag(src, n, w, dst);
}

double dot(const double* a, const double* b, std::size_t n) {
  return backend().dot(a, b, n);
}

double sum_sq_mag(const std::complex<double>* x, std::size_t n) {
  return backend().sum_sq_mag(x, n);
}

const char* active_backend() { return backend().name; }

}  // namespace ssrbell::kernels
