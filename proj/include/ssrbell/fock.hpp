#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ssrbell::fock {

using Complex = std::complex<double>;

// Occupation-number label |n_1, n_2, ...> over an ordered list of modes.
class FockVector {
 public:
  explicit FockVector(std::vector<int> occupations);

  int mode_count() const { return static_cast<int>(occ_.size()); }
  int total() const;
  int operator[](int mode) const { return occ_[static_cast<std::size_t>(mode)]; }
  std::span<const int> occupations() const { return occ_; }

  bool operator==(const FockVector& other) const { return occ_ == other.occ_; }

 private:
  std::vector<int> occ_;
};

// True when `a` precedes `b` in the canonical (lexicographic descending) order.
bool canonical_before(const FockVector& a, const FockVector& b);

// All occupation vectors with a given mode count and total particle number,
// canonically ordered.  Copies are cheap (shared immutable storage).
class FockBasis {
 public:
  FockBasis(int mode_count, int total);

  int mode_count() const;
  int total() const;
  std::size_t size() const;
  const FockVector& vector_at(std::size_t index) const;
  std::size_t index_of(const FockVector& v) const;  // throws if absent

  bool operator==(const FockBasis& other) const {
    return mode_count() == other.mode_count() && total() == other.total();
  }

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

FockBasis enumerate_basis(int mode_count, int total);

// Normalized state in a single fixed-total-particle-number sector.
class PureState {
 public:
  static constexpr double kNormTolerance = 1e-9;

  PureState(FockBasis basis, std::vector<Complex> amplitudes);

  static PureState basis_state(FockBasis basis, const FockVector& v);

  const FockBasis& basis() const { return basis_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  Complex amplitude(const FockVector& v) const;
  int mode_count() const { return basis_.mode_count(); }
  int total() const { return basis_.total(); }
  double norm() const;

 private:
  FockBasis basis_;
  std::vector<Complex> amps_;
};

// Finite ensemble of pure states, block diagonal in total particle number.
class MixedState {
 public:
  struct Component {
    double weight;
    PureState state;
  };

  explicit MixedState(std::vector<Component> components);
  MixedState(const PureState& pure);  // weight-1 ensemble

  const std::vector<Component>& components() const { return components_; }
  int mode_count() const;
  bool is_pure() const { return components_.size() == 1; }
  const PureState& pure_state() const;  // throws unless is_pure()

 private:
  std::vector<Component> components_;
};

PureState tensor(const PureState& left, const PureState& right);

// Reorders modes: output slot k holds what was in mode permutation[k].
PureState permute_modes(const PureState& state, std::span<const int> permutation);

struct DensityMatrix {
  std::vector<FockVector> labels;  // kept-mode occupations, grouped by total
  Eigen::MatrixXcd matrix;
};

DensityMatrix reduced_density(const PureState& state,
                              std::span<const int> kept_modes);

// Von Neumann entropy in bits; validates the density matrix to 1e-8.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

}  // namespace ssrbell::fock
