#include "ssrbell/bell.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "ssrbell/errors.hpp"
#include "ssrbell/kernels.hpp"

namespace ssrbell::bell {

using fock::Complex;
using fock::FockBasis;
using fock::MixedState;
using fock::PureState;
using states::TwoCopyArrangement;

int epsilon(int n, int m) {
  if (n < 0 || m < 0) throw std::invalid_argument("occupations must be >= 0");
  const int exponent = m + (m + n) * (m + n + 1) / 2;
  return (exponent % 2 == 0) ? 1 : -1;
}

namespace {

double binning_gauge(int total) {
  return (total * (total + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
}

// eps(v0,v1) * eps(v2,v3) per basis vector, cached per (mode_count=4, total).
const std::vector<double>& epsilon_products(const FockBasis& basis) {
  static std::map<int, std::vector<double>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(basis.total());
  if (it != cache.end()) return it->second;
  std::vector<double> signs(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto& v = basis.vector_at(k);
    signs[k] = epsilon(v[0], v[1]) * epsilon(v[2], v[3]);
  }
  return cache.emplace(basis.total(), std::move(signs)).first->second;
}

void check_arrangement(const TwoCopyArrangement& state) {
  if (state.composite.mode_count() != 4)
    throw std::invalid_argument("expected a four-mode arrangement");
}

// Ensemble-averaged output probabilities over the composite basis.
std::vector<double> output_probabilities(const TwoCopyArrangement& state,
                                         const MeasurementSetting& alice,
                                         const MeasurementSetting& bob) {
  check_arrangement(state);
  std::vector<double> probs;
  for (const auto& comp : state.composite.components()) {
    PureState rotated = optics::apply_beamsplitter(comp.state, {0, 1}, alice.params);
    rotated = optics::apply_beamsplitter(rotated, {2, 3}, bob.params);
    const auto amps = rotated.amplitudes();
    if (probs.empty()) probs.assign(amps.size(), 0.0);
    kernels::accumulate_sq_mag(amps.data(), amps.size(), comp.weight, probs.data());
  }
  return probs;
}

}  // namespace

JointDistribution::JointDistribution(std::map<Outcome, double> probabilities,
                                     int total)
    : probs_(std::move(probabilities)), total_(total) {
  double sum = 0.0;
  for (auto& [outcome, p] : probs_) {
    if (outcome[0] + outcome[1] + outcome[2] + outcome[3] != total_)
      throw std::invalid_argument("outcome violates the particle-number total");
    if (p < -1e-12)
      throw std::logic_error("negative probability beyond float tolerance");
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("probabilities must sum to 1");
}

double JointDistribution::sum() const {
  double s = 0.0;
  for (const auto& [o, p] : probs_) s += p;
  return s;
}

std::map<std::array<int, 2>, double> JointDistribution::alice_marginal() const {
  std::map<std::array<int, 2>, double> m;
  for (const auto& [o, p] : probs_) m[{o[0], o[1]}] += p;
  return m;
}

std::map<std::array<int, 2>, double> JointDistribution::bob_marginal() const {
  std::map<std::array<int, 2>, double> m;
  for (const auto& [o, p] : probs_) m[{o[2], o[3]}] += p;
  return m;
}

JointDistribution joint_distribution(const TwoCopyArrangement& state,
                                     const MeasurementSetting& alice,
                                     const MeasurementSetting& bob) {
  const auto probs = output_probabilities(state, alice, bob);
  const FockBasis& basis = state.composite.components().front().state.basis();
  std::map<JointDistribution::Outcome, double> table;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const auto& v = basis.vector_at(k);
    table[{v[0], v[1], v[2], v[3]}] = probs[k];
  }
  return JointDistribution(std::move(table), state.total());
}

double correlation(const TwoCopyArrangement& state, const MeasurementSetting& alice,
                   const MeasurementSetting& bob) {
  const auto probs = output_probabilities(state, alice, bob);
  const FockBasis& basis = state.composite.components().front().state.basis();
  const auto& signs = epsilon_products(basis);
  return binning_gauge(state.total()) *
         kernels::dot(signs.data(), probs.data(), probs.size());
}

double bell_term(const TwoCopyArrangement& state, const BellSettings& s) {
  return std::abs(correlation(state, s.alice[0], s.bob[0]) +
                  correlation(state, s.alice[0], s.bob[1]) +
                  correlation(state, s.alice[1], s.bob[0]) -
                  correlation(state, s.alice[1], s.bob[1]));
}

double projection_probability(const TwoCopyArrangement& state, int alice_particles) {
  check_arrangement(state);
  if (alice_particles < 0 || alice_particles > state.total())
    throw std::invalid_argument("alice_particles out of range");
  double q = 0.0;
  for (const auto& comp : state.composite.components()) {
    const FockBasis& basis = comp.state.basis();
    const auto amps = comp.state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
      const auto& v = basis.vector_at(k);
      if (v[0] + v[1] == alice_particles) q += comp.weight * std::norm(amps[k]);
    }
  }
  return q;
}

TwoCopyArrangement project_alice_total(const TwoCopyArrangement& state,
                                       int alice_particles) {
  check_arrangement(state);
  if (alice_particles < 0 || alice_particles > state.total())
    throw std::invalid_argument("alice_particles out of range");
  const double q = projection_probability(state, alice_particles);
  if (q <= 1e-12)
    throw ZeroProjectionError("projection onto Alice-total " +
                              std::to_string(alice_particles) +
                              " has zero probability");
  std::vector<MixedState::Component> comps;
  for (const auto& comp : state.composite.components()) {
    const FockBasis& basis = comp.state.basis();
    std::vector<Complex> amps(comp.state.amplitudes().begin(),
                              comp.state.amplitudes().end());
    double qc = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
      const auto& v = basis.vector_at(k);
      if (v[0] + v[1] != alice_particles) {
        amps[k] = 0.0;
      } else {
        qc += std::norm(amps[k]);
      }
    }
    if (qc <= 1e-15) continue;
    const double scale = 1.0 / std::sqrt(qc);
    for (auto& a : amps) a *= scale;
    comps.push_back({comp.weight * qc / q, PureState(basis, std::move(amps))});
  }
  return TwoCopyArrangement{MixedState(std::move(comps)), state.first_total,
                            state.second_total};
}

double postselected_bell_term(const TwoCopyArrangement& state,
                              const BellSettings& settings, int alice_particles) {
  return bell_term(project_alice_total(state, alice_particles), settings);
}

double toy_correlation(const TwoCopyArrangement& state,
                       const MeasurementSetting& alice,
                       const MeasurementSetting& bob) {
  check_arrangement(state);
  if (state.total() != 2)
    throw std::invalid_argument("toy_correlation expects one particle per copy");

  auto observable = [](const MeasurementSetting& s) {
    const double a = s.params.alpha(), b = s.params.beta();
    Eigen::Matrix2cd m;
    m << 0.0, 2.0 * a * b * std::polar(1.0, -s.params.phase()),
        2.0 * a * b * std::polar(1.0, s.params.phase()), 0.0;
    return m;
  };
  const Eigen::Matrix2cd a_obs = observable(alice);
  const Eigen::Matrix2cd b_obs = observable(bob);

  double e = 0.0;
  for (const auto& comp : state.composite.components()) {
    // chi[i][j]: Alice one-particle index i (0: particle in mode a), Bob j.
    Eigen::Matrix2cd chi = Eigen::Matrix2cd::Zero();
    const FockBasis& basis = comp.state.basis();
    const auto amps = comp.state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
      const auto& v = basis.vector_at(k);
      if (v[0] + v[1] == 1 && v[2] + v[3] == 1)
        chi(v[0] == 1 ? 0 : 1, v[2] == 1 ? 0 : 1) = amps[k];
    }
    e += comp.weight * (chi.adjoint() * a_obs * chi * b_obs.transpose()).trace().real();
  }
  return e;
}

double number_basis_correlation(const MixedState& state) {
  if (state.mode_count() != 2)
    throw std::invalid_argument("expected a single bi-mode copy");
  double e = 0.0;
  for (const auto& comp : state.components()) {
    const FockBasis& basis = comp.state.basis();
    const auto amps = comp.state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
      const auto& v = basis.vector_at(k);
      const double sign = ((v[0] + v[1]) % 2 == 0) ? 1.0 : -1.0;
      e += comp.weight * sign * std::norm(amps[k]);
    }
  }
  return e;
}

}  // namespace ssrbell::bell
