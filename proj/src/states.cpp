#include "ssrbell/states.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace ssrbell::states {

using fock::Complex;
using fock::FockBasis;
using fock::FockVector;
using fock::MixedState;
using fock::PureState;

PureState bec_state(int n) {
  if (n < 1) throw std::invalid_argument("bec_state requires n >= 1");
  FockBasis basis(2, n);
  std::vector<Complex> amps(basis.size());
  double binom = 1.0;  // C(n, k) built up iteratively
  const double scale = std::pow(0.5, 0.5 * n);
  for (int k = 0; k <= n; ++k) {
    // basis index of (n-k, k) is k in canonical order
    amps[static_cast<std::size_t>(k)] = std::sqrt(binom) * scale;
    binom = binom * (n - k) / (k + 1);
  }
  return PureState(std::move(basis), std::move(amps));
}

PureState noon_state(int n, int m) {
  if (n < 1) throw std::invalid_argument("noon_state requires n >= 1");
  if (m < 0 || 2 * m >= n)
    throw std::invalid_argument("noon_state requires 0 <= m < n/2");
  FockBasis basis(2, n);
  std::vector<Complex> amps(basis.size(), Complex{0.0, 0.0});
  const double r = 1.0 / std::sqrt(2.0);
  amps[basis.index_of(FockVector({n - m, m}))] = r;
  amps[basis.index_of(FockVector({m, n - m}))] = r;
  return PureState(std::move(basis), std::move(amps));
}

PureState squeezed_state(double c) {
  const double cmax = 1.0 / std::sqrt(2.0);
  if (!(c >= 0.0) || c > cmax + 1e-12)
    throw std::invalid_argument("squeezed_state requires 0 <= c <= 1/sqrt(2)");
  const double s = std::sqrt(std::max(0.0, 1.0 - 2.0 * c * c));
  FockBasis basis(2, 2);
  return PureState(std::move(basis), {c, s, c});
}

MixedState toy_mixed_state(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
  FockBasis basis(2, 1);
  const double r = 1.0 / std::sqrt(2.0);
  PureState plus(basis, {r, r});    // (|10> + |01>)/sqrt(2)
  PureState minus(basis, {-r, r});  // (|01> - |10>)/sqrt(2)
  return MixedState({{p, plus}, {1.0 - p, minus}});
}

TwoCopyArrangement two_copy(const MixedState& first, const MixedState& second) {
  if (first.mode_count() != 2 || second.mode_count() != 2)
    throw std::invalid_argument("two_copy expects bi-mode states");
  const int n1 = first.components().front().state.total();
  const int n2 = second.components().front().state.total();
  for (const auto& c : first.components())
    if (c.state.total() != n1)
      throw std::invalid_argument("first input mixes particle-number sectors");
  for (const auto& c : second.components())
    if (c.state.total() != n2)
      throw std::invalid_argument("second input mixes particle-number sectors");

  // Tensor order is (a, b, A, B); party order (a, A, b, B) swaps modes 1 and 2.
  static constexpr std::array<int, 4> kPartyOrder{0, 2, 1, 3};
  std::vector<MixedState::Component> comps;
  for (const auto& f : first.components()) {
    for (const auto& s : second.components()) {
      comps.push_back({f.weight * s.weight,
                       permute_modes(tensor(f.state, s.state), kPartyOrder)});
    }
  }
  return TwoCopyArrangement{MixedState(std::move(comps)), n1, n2};
}

TwoCopyArrangement two_copy(const PureState& first, const PureState& second) {
  return two_copy(MixedState(first), MixedState(second));
}

}  // namespace ssrbell::states
