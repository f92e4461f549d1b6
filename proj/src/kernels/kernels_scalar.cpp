#include "ssrbell/kernels.hpp"

namespace ssrbell::kernels::scalar {

void real_matvec_cplx(const double* m, std::size_t rows, std::size_t cols,
                      const std::complex<double>* x, std::complex<double>* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double acc_re = 0.0, acc_im = 0.0;
    const double* row = m + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      acc_re += row[c] * x[c].real();
      acc_im += row[c] * x[c].imag();
    }
    y[r] = {acc_re, acc_im};
  }
}

void accumulate_sq_mag(const std::complex<double>* src, std::size_t n,
                       double w, double* dst) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = src[i].real(), im = src[i].imag();
    dst[i] += w * (re * re + im * im);
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq_mag(const std::complex<double>* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

}  // namespace ssrbell::kernels::scalar
