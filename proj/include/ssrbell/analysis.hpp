#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "ssrbell/bell.hpp"

namespace ssrbell::analysis {

struct OptimizeOptions {
  double alpha_alice = 0.7071067811865476;  // balanced by default
  double alpha_bob = 0.7071067811865476;
  int restarts = 0;          // extra seeded simplex starts around the grid best
  std::uint64_t seed = 0;
  unsigned threads = 0;      // 0: SSRBELL_THREADS or hardware concurrency
  double simplex_tol = 1e-6; // simplex diameter termination, radians
  int simplex_max_iter = 4000;
};

struct OptimizationResult {
  double best_value = 0.0;
  bell::BellSettings best_settings = bell::BellSettings::balanced(0, 0, 0, 0);
  int grid_resolution = 0;
  bool refined = false;
};

// Exhaustive grid over the three free phases (phi_A1 gauge-fixed to 0),
// optionally followed by simplex descent from the best cell.  Deterministic:
// ties resolve to the lexicographically smallest angle tuple.
OptimizationResult optimize_bell(const states::TwoCopyArrangement& state,
                                 int grid_points_per_angle, bool refine,
                                 const OptimizeOptions& options = {});

struct TransmissivityOptimum {
  OptimizationResult result;
  double alpha_alice = 0.0;
  double alpha_bob = 0.0;
};

// Co-optimizes per-party transmissivities along with the phases.
TransmissivityOptimum optimize_bell_with_transmissivity(
    const states::TwoCopyArrangement& state, int alpha_grid_points,
    int phase_grid_points, bool refine, const OptimizeOptions& options = {});

struct AngleRange {
  double start = 0.0;
  double stop = 6.283185307179586;  // semi-open [start, stop)
};

struct Surface {
  double phi_a1 = 0.0, phi_a2 = 0.0;   // fixed Alice angles
  std::vector<double> b1_values;        // swept phi_B1 grid
  std::vector<double> b2_values;        // swept phi_B2 grid
  std::vector<double> values;           // row-major: values[i * b2 + j]
  double max_value = 0.0;
  double max_b1 = 0.0, max_b2 = 0.0;

  double at(std::size_t i, std::size_t j) const {
    return values[i * b2_values.size() + j];
  }
};

// Bell term as a function of Bob's two angles with Alice's fixed.
Surface bell_surface(const states::TwoCopyArrangement& state, double phi_a1,
                     double phi_a2, const AngleRange& b1_range,
                     const AngleRange& b2_range, int resolution,
                     const OptimizeOptions& options = {});

// Table of correlations E(alice_angles[i], bob_angles[j]).
std::vector<double> correlation_table(const states::TwoCopyArrangement& state,
                                      const std::vector<double>& alice_angles,
                                      const std::vector<double>& bob_angles,
                                      const OptimizeOptions& options = {});

// Spin squeezing parameter E_S of a bi-mode state: N Var(S_y) over the squared
// mean spin length, with the mean spin along x for the families studied here.
// E_S < 1 certifies squeezing.  Throws UndefinedSqueezingError when the mean
// spin vanishes (e.g. the |11> state).
double squeezing_parameter(const fock::PureState& state);

// Average over Alice-total sectors of the entanglement entropy of the
// renormalized projections, weighted by projection probability (bits).
double projected_entropy(const states::TwoCopyArrangement& state);

// Maps a one-party outcome (n, m) to an index in 0..d-1.
using OutcomeMap = std::function<int(int, int)>;

// Default map: rank within the n+m sector by descending n - m, folded mod d.
OutcomeMap default_outcome_map(int d);

// Collins et al. I_d combination for the four setting pairs, ordered
// (A1B1, A1B2, A2B1, A2B2).  Classical bound 2.
double cglmp_value(const std::array<bell::JointDistribution, 4>& distributions,
                   const OutcomeMap& outcome_map, int d);

struct CglmpOptimum {
  double best_value = 0.0;
  bell::BellSettings best_settings = bell::BellSettings::balanced(0, 0, 0, 0);
};

CglmpOptimum optimize_cglmp(const states::TwoCopyArrangement& state, int d,
                            int grid_points_per_angle, bool refine,
                            const OptimizeOptions& options = {});

}  // namespace ssrbell::analysis
