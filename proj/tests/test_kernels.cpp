#include <random>
#include <vector>

#include "doctest.h"
#include "ssrbell/kernels.hpp"

using ssrbell::kernels::scalar::accumulate_sq_mag;
using ssrbell::kernels::scalar::dot;
using ssrbell::kernels::scalar::real_matvec_cplx;
using ssrbell::kernels::scalar::sum_sq_mag;
using Complex = std::complex<double>;

namespace {

std::vector<Complex> random_cvec(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

std::vector<double> random_rvec(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar real_matvec_cplx matches direct evaluation") {
  std::mt19937 rng(7);
  const std::size_t rows = 3, cols = 5;
  const auto m = random_rvec(rng, rows * cols);
  const auto x = random_cvec(rng, cols);
  std::vector<Complex> y(rows);
  real_matvec_cplx(m.data(), rows, cols, x.data(), y.data());
  for (std::size_t r = 0; r < rows; ++r) {
    Complex want{0.0, 0.0};
    for (std::size_t c = 0; c < cols; ++c) want += m[r * cols + c] * x[c];
    CHECK(std::abs(y[r] - want) < 1e-14);
  }
}

#ifdef SSRBELL_HAVE_AVX2
TEST_CASE("avx2 kernels agree with scalar reference") {
  if (!ssrbell::kernels::avx2_supported()) {
    MESSAGE("AVX2 not available on this CPU; skipping equivalence checks");
    return;
  }
  std::mt19937 rng(11);
  // Odd sizes on purpose so the vector tails get exercised.
  for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 8u, 13u, 64u, 455u}) {
    const auto x = random_cvec(rng, n);
    const auto a = random_rvec(rng, n);
    const auto b = random_rvec(rng, n);

    CHECK(ssrbell::kernels::avx2::dot(a.data(), b.data(), n) ==
          doctest::Approx(dot(a.data(), b.data(), n)).epsilon(1e-12));
    CHECK(ssrbell::kernels::avx2::sum_sq_mag(x.data(), n) ==
          doctest::Approx(sum_sq_mag(x.data(), n)).epsilon(1e-12));

    std::vector<double> acc1(n, 0.25), acc2(n, 0.25);
    accumulate_sq_mag(x.data(), n, 0.7, acc1.data());
    ssrbell::kernels::avx2::accumulate_sq_mag(x.data(), n, 0.7, acc2.data());
    for (std::size_t i = 0; i < n; ++i)
      CHECK(acc1[i] == doctest::Approx(acc2[i]).epsilon(1e-13));

    const std::size_t rows = (n % 5) + 2;
    const auto m = random_rvec(rng, rows * n);
    std::vector<Complex> y1(rows), y2(rows);
    real_matvec_cplx(m.data(), rows, n, x.data(), y1.data());
    ssrbell::kernels::avx2::real_matvec_cplx(m.data(), rows, n, x.data(),
                                             y2.data());
    for (std::size_t r = 0; r < rows; ++r)
      CHECK(std::abs(y1[r] - y2[r]) < 1e-12);
  }
}
#endif

TEST_CASE("dispatched kernels report a backend and work") {
  const char* name = ssrbell::kernels::active_backend();
  CHECK((std::string(name) == "scalar" || std::string(name) == "avx2"));
  std::vector<double> a{1.0, 2.0, 3.0}, b{4.0, 5.0, 6.0};
  CHECK(ssrbell::kernels::dot(a.data(), b.data(), 3) == doctest::Approx(32.0));
}
