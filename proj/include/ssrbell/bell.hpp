#pragma once

#include <array>
#include <map>

#include "ssrbell/optics.hpp"
#include "ssrbell/states.hpp"

namespace ssrbell::bell {

// Sharp binning sign for an output occupation pair:
// (-1)^(m + (m+n)(m+n+1)/2).
int epsilon(int n, int m);

// One party's beamsplitter measurement setting.
struct MeasurementSetting {
  optics::BeamsplitterParams params;

  static MeasurementSetting balanced(double phase) {
    return {optics::BeamsplitterParams::balanced(phase)};
  }
};

struct BellSettings {
  std::array<MeasurementSetting, 2> alice;
  std::array<MeasurementSetting, 2> bob;

  static BellSettings balanced(double a1, double a2, double b1, double b2) {
    return {{MeasurementSetting::balanced(a1), MeasurementSetting::balanced(a2)},
            {MeasurementSetting::balanced(b1), MeasurementSetting::balanced(b2)}};
  }
};

// Probability table over (n_c, m_C, n_d, m_D) output occupations.
class JointDistribution {
 public:
  using Outcome = std::array<int, 4>;

  JointDistribution(std::map<Outcome, double> probabilities, int total);

  const std::map<Outcome, double>& probabilities() const { return probs_; }
  int total() const { return total_; }
  double sum() const;
  std::map<std::array<int, 2>, double> alice_marginal() const;
  std::map<std::array<int, 2>, double> bob_marginal() const;

  // Number of possible one-party outcomes (n, m) with n + m <= total.
  static int alice_outcome_count(int total) {
    return (total + 1) * (total + 2) / 2;
  }

 private:
  std::map<Outcome, double> probs_;
  int total_;
};

JointDistribution joint_distribution(const states::TwoCopyArrangement& state,
                                     const MeasurementSetting& alice,
                                     const MeasurementSetting& bob);

// E = g(T) * sum eps(n_c,m_C) eps(n_d,m_D) P(n_c m_C; n_d m_D).  The +-1
// outcome labels are defined only up to a global flip per party; g(T) =
// (-1)^(T(T+1)/2) fixes that gauge so the reference families reproduce their
// closed-form correlations (sin^2, sin^4, cos^2).  |bell_term| is invariant
// under the choice.
double correlation(const states::TwoCopyArrangement& state,
                   const MeasurementSetting& alice, const MeasurementSetting& bob);

// |E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)|
double bell_term(const states::TwoCopyArrangement& state,
                 const BellSettings& settings);

// Probability that Alice's two modes hold exactly `alice_particles`.
double projection_probability(const states::TwoCopyArrangement& state,
                              int alice_particles);

// Renormalized restriction to Alice-total = alice_particles; throws
// ZeroProjectionError when the projection probability is below 1e-12.
states::TwoCopyArrangement project_alice_total(
    const states::TwoCopyArrangement& state, int alice_particles);

double postselected_bell_term(const states::TwoCopyArrangement& state,
                              const BellSettings& settings, int alice_particles);

// Correlation of the two-copy toy model: each party measures the unsharp
// single-particle-sector observable 2 alpha beta (cos(phi) Sx + sin(phi) Sy)
// on its mode pair (zero outside the one-particle sector).  Requires a
// two-particle composite.  Equals 8 (p - 1/2)^2 alpha^2 beta^2 cos(phiA - phiB)
// on two copies of the toy mixed state.
double toy_correlation(const states::TwoCopyArrangement& state,
                       const MeasurementSetting& alice,
                       const MeasurementSetting& bob);

// Parity-sign correlation of a single bi-mode copy measured in the particle
// number basis; -1 for every one-particle state regardless of entanglement.
double number_basis_correlation(const fock::MixedState& state);

}  // namespace ssrbell::bell
