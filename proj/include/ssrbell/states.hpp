#pragma once

#include "ssrbell/fock.hpp"

namespace ssrbell::states {

// Symmetric two-mode splitting of N non-interacting bosons: square-rooted
// binomial amplitudes over |n, N-n>.
fock::PureState bec_state(int n);

// (|N-m, m> + |m, N-m>)/sqrt(2); requires 0 <= m < N/2 so the kets differ.
fock::PureState noon_state(int n, int m);

// c|20> + sqrt(1-2c^2)|11> + c|02> for 0 <= c <= 1/sqrt(2).
fock::PureState squeezed_state(double c);

// p |psi+><psi+| + (1-p) |psi-><psi-| with |psi+-> = (|01> +- |10>)/sqrt(2).
fock::MixedState toy_mixed_state(double p);

// Two copies of a bi-mode state arranged into party order: Alice owns modes
// 0, 1 (one mode of each copy) and Bob owns modes 2, 3.
struct TwoCopyArrangement {
  fock::MixedState composite;
  int first_total;
  int second_total;

  int total() const { return first_total + second_total; }
  bool is_pure() const { return composite.is_pure(); }
  const fock::PureState& pure_state() const { return composite.pure_state(); }
};

TwoCopyArrangement two_copy(const fock::MixedState& first,
                            const fock::MixedState& second);
TwoCopyArrangement two_copy(const fock::PureState& first,
                            const fock::PureState& second);

}  // namespace ssrbell::states
