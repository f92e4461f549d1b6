#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ssrbell/fock.hpp"

namespace ssrbell::optics {

// Two-mode beamsplitter: transmissivity amplitudes (alpha, beta) and the
// relative phase applied to the second input mode.
class BeamsplitterParams {
 public:
  BeamsplitterParams(double alpha, double beta, double phase);

  static BeamsplitterParams balanced(double phase);
  // beta is filled in from alpha^2 + beta^2 = 1.
  static BeamsplitterParams with_alpha(double alpha, double phase);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double phase() const { return phase_; }

 private:
  double alpha_, beta_, phase_;
};

// U = [[alpha, beta e^{-i phase}], [beta, -alpha e^{-i phase}]]
Eigen::Matrix2cd single_particle_matrix(const BeamsplitterParams& params);

// Rotates a mode pair of `state` into the beamsplitter output basis.  The
// total particle number is preserved exactly (the lift acts per pair-sector).
fock::PureState apply_beamsplitter(const fock::PureState& state,
                                   std::pair<int, int> mode_pair,
                                   const BeamsplitterParams& params);

// Multiplies each amplitude by e^{i theta n_mode}.
fock::PureState apply_phase(const fock::PureState& state, int mode, double theta);

// Expansion of the output basis state |n_out, m_out> over input occupations
// (total, 0), (total-1, 1), ..., (0, total).  Squared magnitudes sum to 1.
std::vector<fock::Complex> measurement_projector_amplitudes(
    int n_out, int m_out, const BeamsplitterParams& params, int total);

}  // namespace ssrbell::optics
