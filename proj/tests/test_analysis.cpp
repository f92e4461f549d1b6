#include <cmath>
#include <random>

#include "doctest.h"
#include "ssrbell/analysis.hpp"
#include "ssrbell/errors.hpp"

using namespace ssrbell;
using namespace ssrbell::analysis;
using bell::BellSettings;
using bell::JointDistribution;
using bell::MeasurementSetting;
using fock::Complex;
using fock::FockBasis;
using fock::FockVector;
using fock::PureState;

namespace {

states::TwoCopyArrangement bec_pair(int n) {
  return states::two_copy(states::bec_state(n), states::bec_state(n));
}

states::TwoCopyArrangement squeezed_pair(double c) {
  return states::two_copy(states::squeezed_state(c), states::squeezed_state(c));
}

constexpr double kSqrt2 = 1.4142135623730951;

}  // namespace

TEST_CASE("optimizer reaches the known maxima of the closed-form families") {
  // sin^2(d/2) family peaks at 1 + sqrt(2); sin^4 and sin^6 at the frozen
  // values below (independent scan + simplex on the closed forms).
  auto r1 = optimize_bell(bec_pair(1), 32, true);
  CHECK(r1.best_value == doctest::Approx(1.0 + kSqrt2).epsilon(1e-6));
  CHECK(r1.refined);
  CHECK(r1.grid_resolution == 32);

  auto r2 = optimize_bell(bec_pair(2), 32, true);
  CHECK(r2.best_value == doctest::Approx(2.3623033012349066).epsilon(1e-6));

  auto r3 = optimize_bell(bec_pair(3), 32, true);
  CHECK(r3.best_value == doctest::Approx(2.3484848469681197).epsilon(1e-6));

  // result invariant: reported value equals the Bell term at the settings
  CHECK(bell::bell_term(bec_pair(2), r2.best_settings) ==
        doctest::Approx(r2.best_value).epsilon(1e-12));
}

TEST_CASE("optimizer is deterministic") {
  auto a = optimize_bell(bec_pair(1), 16, true);
  auto b = optimize_bell(bec_pair(1), 16, true);
  CHECK(a.best_value == b.best_value);
  for (int i = 0; i < 2; ++i) {
    CHECK(a.best_settings.alice[i].params.phase() ==
          b.best_settings.alice[i].params.phase());
    CHECK(a.best_settings.bob[i].params.phase() ==
          b.best_settings.bob[i].params.phase());
  }
}

TEST_CASE("grid-only optimization is a lower bound that refinement improves") {
  auto coarse = optimize_bell(bec_pair(1), 8, false);
  auto fine = optimize_bell(bec_pair(1), 8, true);
  CHECK(!coarse.refined);
  CHECK(coarse.best_value <= fine.best_value + 1e-12);
  CHECK(fine.best_value == doctest::Approx(1.0 + kSqrt2).epsilon(1e-5));
}

TEST_CASE("surface of the flat family is constant") {
  auto surf = bell_surface(squeezed_pair(0.0), 0.0, 1.0, {}, {}, 24);
  double lo = 1e9, hi = -1e9;
  for (double v : surf.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo < 1e-10);
  CHECK(hi <= 2.0 + 1e-9);
}

TEST_CASE("surface contains the caption optimum at the caption Alice angles") {
  auto surf = bell_surface(bec_pair(1), 0.0, 1.57, {}, {}, 101);
  CHECK(surf.max_value == doctest::Approx(2.41).epsilon(0.01));
  CHECK(surf.values.size() == 101u * 101u);
  CHECK(surf.at(0, 0) == surf.values.front());
}

TEST_CASE("surface translation covariance under common shifts") {
  const double shift = 0.83;
  auto base = bell_surface(bec_pair(2), 0.0, 1.07, {0.0, 2.0}, {1.0, 3.0}, 17);
  auto moved = bell_surface(bec_pair(2), shift, 1.07 + shift,
                            {0.0 + shift, 2.0 + shift},
                            {1.0 + shift, 3.0 + shift}, 17);
  for (std::size_t i = 0; i < base.values.size(); ++i)
    CHECK(std::abs(base.values[i] - moved.values[i]) < 1e-10);
}

TEST_CASE("degenerate two-point surface is well-formed") {
  auto surf = bell_surface(bec_pair(1), 0.0, 1.57, {}, {}, 2);
  CHECK(surf.b1_values.size() == 2);
  CHECK(surf.values.size() == 4);
}

TEST_CASE("squeezing parameter: coherent split gives exactly 1") {
  for (int n = 1; n <= 6; ++n)
    CHECK(squeezing_parameter(states::bec_state(n)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("squeezing parameter closed form 1/(2c) on the squeezed family") {
  for (double c : {0.3, 0.45, 0.55, 0.6, 0.7})
    CHECK(squeezing_parameter(states::squeezed_state(c)) ==
          doctest::Approx(1.0 / (2.0 * c)).epsilon(1e-12));
  // squeezed above the coherent point, not below
  CHECK(squeezing_parameter(states::squeezed_state(0.55)) < 1.0);
  CHECK(squeezing_parameter(states::squeezed_state(0.45)) >= 1.0);
  // both family endpoints have a vanishing mean spin
  CHECK_THROWS_AS(squeezing_parameter(states::squeezed_state(0.0)),
                  UndefinedSqueezingError);
  CHECK_THROWS_AS(squeezing_parameter(states::squeezed_state(0.7071067811865476)),
                  UndefinedSqueezingError);
}

TEST_CASE("squeezing parameter agrees with a dense-operator oracle") {
  // Independent route: build S_x, S_y as dense matrices in the N=2 sector and
  // evaluate the defining expression directly.
  auto dense_es = [](const PureState& s) {
    const int t = s.total();
    const auto& basis = s.basis();
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd sy = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto& v = basis.vector_at(static_cast<std::size_t>(k));
      const int na = v[0], nb = v[1];
      if (nb > 0) {
        const auto j = static_cast<Eigen::Index>(
            basis.index_of(FockVector({na + 1, nb - 1})));
        const double amp = std::sqrt(static_cast<double>(nb) * (na + 1));
        sx(j, k) += 0.5 * amp;
        sy(j, k) += Complex{0.0, 0.5} * amp;
      }
      if (na > 0) {
        const auto j = static_cast<Eigen::Index>(
            basis.index_of(FockVector({na - 1, nb + 1})));
        const double amp = std::sqrt(static_cast<double>(na) * (nb + 1));
        sx(j, k) += 0.5 * amp;
        sy(j, k) -= Complex{0.0, 0.5} * amp;
      }
    }
    Eigen::VectorXcd psi(dim);
    for (Eigen::Index k = 0; k < dim; ++k)
      psi[k] = s.amplitudes()[static_cast<std::size_t>(k)];
    const double mx = (psi.adjoint() * sx * psi)(0, 0).real();
    const double my = (psi.adjoint() * sy * psi)(0, 0).real();
    const double my2 = (psi.adjoint() * sy * sy * psi)(0, 0).real();
    return std::sqrt(t * (my2 - my * my) / (mx * mx + my * my));
  };
  std::mt19937 rng(211);
  std::uniform_real_distribution<double> d(0.1, 0.7);
  for (int rep = 0; rep < 20; ++rep) {
    const double c = d(rng);
    const PureState s = states::squeezed_state(c);
    CHECK(squeezing_parameter(s) == doctest::Approx(dense_es(s)).epsilon(1e-12));
  }
}

TEST_CASE("projected entropy of the single-particle pair is 1/2 bit") {
  CHECK(projected_entropy(bec_pair(1)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("projected entropy of the two-particle pair (sector bookkeeping)") {
  // By hand: q = (1/16)(1, 4, 6, 4, 1), sector entropies (0, 1, 1.2516, 1, 0).
  const double s2 = -(1.0 / 6.0) * std::log2(1.0 / 6.0) * 2.0 -
                    (4.0 / 6.0) * std::log2(4.0 / 6.0);
  const double want = 0.25 + 0.375 * s2 + 0.25;
  CHECK(projected_entropy(bec_pair(2)) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("projected entropy of extreme-superposition pairs is constant") {
  const double base = projected_entropy(
      states::two_copy(states::noon_state(2, 0), states::noon_state(2, 0)));
  CHECK(base == doctest::Approx(0.5).epsilon(1e-9));
  for (int n : {3, 4}) {
    const double v = projected_entropy(
        states::two_copy(states::noon_state(n, 0), states::noon_state(n, 0)));
    CHECK(v == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("projected entropy of a separable product is zero") {
  PureState mott(FockBasis(2, 2), {0.0, 1.0, 0.0});  // |11>
  CHECK(projected_entropy(states::two_copy(mott, mott)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cglmp at d=2 reduces to a CHSH combination") {
  // On arbitrary (not necessarily quantum) distributions,
  // I_2 = E11 + E12 - E21 + E22 with outcomes mapped to +-1.
  std::mt19937 rng(223);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::array<std::map<JointDistribution::Outcome, double>, 4> raw;
    std::array<double, 4> corr{};
    for (int s = 0; s < 4; ++s) {
      // outcomes (1,0) and (0,1) within the one-particle sector per party
      std::array<double, 4> p{d(rng), d(rng), d(rng), d(rng)};
      const double sum = p[0] + p[1] + p[2] + p[3];
      for (auto& x : p) x /= sum;
      raw[s][{1, 0, 1, 0}] = p[0];
      raw[s][{1, 0, 0, 1}] = p[1];
      raw[s][{0, 1, 1, 0}] = p[2];
      raw[s][{0, 1, 0, 1}] = p[3];
      corr[s] = p[0] - p[1] - p[2] + p[3];
    }
    const std::array<JointDistribution, 4> dists{
        JointDistribution(raw[0], 2), JointDistribution(raw[1], 2),
        JointDistribution(raw[2], 2), JointDistribution(raw[3], 2)};
    const double i2 = cglmp_value(dists, default_outcome_map(2), 2);
    const double chsh = corr[0] + corr[1] - corr[2] + corr[3];
    CHECK(i2 == doctest::Approx(chsh).epsilon(1e-12));
  }
}

TEST_CASE("cglmp magnitude stays within the algebraic ceiling") {
  std::mt19937 rng(227);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  const int total = 2;
  FockBasis basis(4, total);
  for (int rep = 0; rep < 20; ++rep) {
    std::array<std::map<JointDistribution::Outcome, double>, 4> raw;
    for (int s = 0; s < 4; ++s) {
      double sum = 0.0;
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto& v = basis.vector_at(k);
        const double p = d(rng);
        raw[s][{v[0], v[1], v[2], v[3]}] = p;
        sum += p;
      }
      for (auto& [o, p] : raw[s]) p /= sum;
    }
    const int dd = total + 1;
    const std::array<JointDistribution, 4> dists{
        JointDistribution(raw[0], total), JointDistribution(raw[1], total),
        JointDistribution(raw[2], total), JointDistribution(raw[3], total)};
    double ceiling = 0.0;
    for (int k = 0; k < dd / 2; ++k)
      ceiling += 4.0 * std::abs(1.0 - 2.0 * k / (dd - 1)) * 2.0;
    CHECK(std::abs(cglmp_value(dists, default_outcome_map(dd), dd)) <= ceiling);
  }
}

TEST_CASE("cglmp optimum of the single-particle pair stays classical") {
  auto opt = optimize_cglmp(bec_pair(1), 3, 12, true);
  CHECK(opt.best_value <= 2.0 + 1e-9);
  CHECK(opt.best_value > 1.0);  // the landscape is not degenerate
}

TEST_CASE("transmissivity co-optimization stays below 2 for mismatched copies") {
  auto arr = states::two_copy(states::bec_state(1), states::bec_state(2));
  auto opt = optimize_bell_with_transmissivity(arr, 5, 16, true);
  CHECK(opt.result.best_value <= 2.0 + 1e-9);
  CHECK(opt.alpha_alice > 0.0);
  CHECK(opt.alpha_alice < 1.0);
}

TEST_CASE("optimizer rejects too-coarse grids") {
  CHECK_THROWS_AS(optimize_bell(bec_pair(1), 4, false), std::invalid_argument);
}
