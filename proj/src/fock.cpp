#include "ssrbell/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ssrbell/kernels.hpp"

namespace ssrbell::fock {

FockVector::FockVector(std::vector<int> occupations) : occ_(std::move(occupations)) {
  if (occ_.empty()) throw std::invalid_argument("FockVector needs at least one mode");
  for (int n : occ_) {
    if (n < 0) throw std::invalid_argument("negative occupation number");
  }
}

int FockVector::total() const {
  int t = 0;
  for (int n : occ_) t += n;
  return t;
}

bool canonical_before(const FockVector& a, const FockVector& b) {
  return std::lexicographical_compare(b.occupations().begin(), b.occupations().end(),
                                      a.occupations().begin(), a.occupations().end());
}

struct FockBasis::Data {
  int mode_count;
  int total;
  std::vector<FockVector> vectors;
};

namespace {

void enumerate_rec(int modes_left, int total_left, std::vector<int>& current,
                   std::vector<FockVector>& out) {
  if (modes_left == 1) {
    current.push_back(total_left);
    out.emplace_back(current);
    current.pop_back();
    return;
  }
  for (int n = total_left; n >= 0; --n) {
    current.push_back(n);
    enumerate_rec(modes_left - 1, total_left - n, current, out);
    current.pop_back();
  }
}

}  // namespace

FockBasis::FockBasis(int mode_count, int total) {
  if (mode_count < 1) throw std::invalid_argument("mode_count must be >= 1");
  if (total < 0) throw std::invalid_argument("total must be >= 0");
  auto data = std::make_shared<Data>();
  data->mode_count = mode_count;
  data->total = total;
  std::vector<int> current;
  current.reserve(static_cast<std::size_t>(mode_count));
  enumerate_rec(mode_count, total, current, data->vectors);
  data_ = std::move(data);
}

int FockBasis::mode_count() const { return data_->mode_count; }
int FockBasis::total() const { return data_->total; }
std::size_t FockBasis::size() const { return data_->vectors.size(); }

const FockVector& FockBasis::vector_at(std::size_t index) const {
  return data_->vectors.at(index);
}

std::size_t FockBasis::index_of(const FockVector& v) const {
  const auto& vecs = data_->vectors;
  auto it = std::lower_bound(vecs.begin(), vecs.end(), v, canonical_before);
  if (it == vecs.end() || !(*it == v))
    throw std::invalid_argument("occupation vector not in basis");
  return static_cast<std::size_t>(it - vecs.begin());
}

FockBasis enumerate_basis(int mode_count, int total) {
  return FockBasis(mode_count, total);
}

PureState::PureState(FockBasis basis, std::vector<Complex> amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
  if (amps_.size() != basis_.size())
    throw std::invalid_argument("amplitude count does not match basis size");
  if (std::abs(norm() - 1.0) > kNormTolerance)
    throw std::invalid_argument("state is not normalized");
}

PureState PureState::basis_state(FockBasis basis, const FockVector& v) {
  std::vector<Complex> amps(basis.size(), Complex{0.0, 0.0});
  amps[basis.index_of(v)] = 1.0;
  return PureState(std::move(basis), std::move(amps));
}

Complex PureState::amplitude(const FockVector& v) const {
  return amps_[basis_.index_of(v)];
}

double PureState::norm() const {
  return std::sqrt(kernels::sum_sq_mag(amps_.data(), amps_.size()));
}

MixedState::MixedState(std::vector<Component> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("empty ensemble");
  double sum = 0.0;
  const int modes = components_.front().state.mode_count();
  for (const auto& c : components_) {
    if (c.weight < 0.0) throw std::invalid_argument("negative ensemble weight");
    if (c.state.mode_count() != modes)
      throw std::invalid_argument("ensemble components must share mode count");
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("ensemble weights must sum to 1");
  std::erase_if(components_, [](const Component& c) { return c.weight == 0.0; });
}

MixedState::MixedState(const PureState& pure) : components_{{1.0, pure}} {}

int MixedState::mode_count() const { return components_.front().state.mode_count(); }

const PureState& MixedState::pure_state() const {
  if (!is_pure()) throw std::logic_error("ensemble is not pure");
  return components_.front().state;
}

PureState tensor(const PureState& left, const PureState& right) {
  FockBasis basis(left.mode_count() + right.mode_count(),
                  left.total() + right.total());
  std::vector<Complex> amps(basis.size(), Complex{0.0, 0.0});
  std::vector<int> occ(static_cast<std::size_t>(basis.mode_count()));
  const auto la = left.amplitudes();
  const auto ra = right.amplitudes();
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (la[i] == Complex{0.0, 0.0}) continue;
    const auto& lv = left.basis().vector_at(i).occupations();
    std::copy(lv.begin(), lv.end(), occ.begin());
    for (std::size_t j = 0; j < ra.size(); ++j) {
      if (ra[j] == Complex{0.0, 0.0}) continue;
      const auto& rv = right.basis().vector_at(j).occupations();
      std::copy(rv.begin(), rv.end(), occ.begin() + lv.size());
      amps[basis.index_of(FockVector(occ))] = la[i] * ra[j];
    }
  }
  return PureState(std::move(basis), std::move(amps));
}

PureState permute_modes(const PureState& state, std::span<const int> permutation) {
  const int modes = state.mode_count();
  if (static_cast<int>(permutation.size()) != modes)
    throw std::invalid_argument("permutation size does not match mode count");
  std::vector<bool> seen(static_cast<std::size_t>(modes), false);
  for (int p : permutation) {
    if (p < 0 || p >= modes || seen[static_cast<std::size_t>(p)])
      throw std::invalid_argument("permutation is not a bijection on modes");
    seen[static_cast<std::size_t>(p)] = true;
  }
  const FockBasis& basis = state.basis();
  std::vector<Complex> amps(basis.size(), Complex{0.0, 0.0});
  std::vector<int> occ(static_cast<std::size_t>(modes));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto& v = basis.vector_at(k);
    for (int slot = 0; slot < modes; ++slot)
      occ[static_cast<std::size_t>(slot)] = v[permutation[static_cast<std::size_t>(slot)]];
    amps[basis.index_of(FockVector(occ))] = state.amplitudes()[k];
  }
  return PureState(basis, std::move(amps));
}

DensityMatrix reduced_density(const PureState& state,
                              std::span<const int> kept_modes) {
  const int modes = state.mode_count();
  std::vector<int> kept(kept_modes.begin(), kept_modes.end());
  std::sort(kept.begin(), kept.end());
  if (kept.empty() || kept.size() >= static_cast<std::size_t>(modes))
    throw std::invalid_argument("kept_modes must be a non-empty proper subset");
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end() ||
      kept.front() < 0 || kept.back() >= modes)
    throw std::invalid_argument("kept_modes indices invalid");

  const int n = state.total();
  // Kept-mode labels grouped by total, canonical order within each total.
  std::vector<FockVector> labels;
  std::vector<std::size_t> sector_offset;
  for (int t = 0; t <= n; ++t) {
    sector_offset.push_back(labels.size());
    FockBasis sector(static_cast<int>(kept.size()), t);
    for (std::size_t i = 0; i < sector.size(); ++i)
      labels.push_back(sector.vector_at(i));
  }
  auto kept_index = [&](const std::vector<int>& occ) {
    int t = 0;
    for (int v : occ) t += v;
    FockBasis sector(static_cast<int>(kept.size()), t);
    return sector_offset[static_cast<std::size_t>(t)] + sector.index_of(FockVector(occ));
  };

  std::vector<int> env;
  for (int m = 0; m < modes; ++m)
    if (!std::binary_search(kept.begin(), kept.end(), m)) env.push_back(m);

  // Group basis states by environment occupation, then accumulate outer products.
  std::map<std::vector<int>, std::vector<std::pair<std::size_t, Complex>>> groups;
  const auto amps = state.amplitudes();
  std::vector<int> kocc(kept.size()), eocc(env.size());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (amps[i] == Complex{0.0, 0.0}) continue;
    const auto& v = state.basis().vector_at(i);
    for (std::size_t k = 0; k < kept.size(); ++k) kocc[k] = v[kept[k]];
    for (std::size_t k = 0; k < env.size(); ++k) eocc[k] = v[env[k]];
    groups[eocc].emplace_back(kept_index(kocc), amps[i]);
  }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(labels.size()),
                                                static_cast<Eigen::Index>(labels.size()));
  for (const auto& [e, entries] : groups) {
    for (const auto& [i1, a1] : entries)
      for (const auto& [i2, a2] : entries)
        rho(static_cast<Eigen::Index>(i1), static_cast<Eigen::Index>(i2)) +=
            a1 * std::conj(a2);
  }
  return DensityMatrix{std::move(labels), std::move(rho)};
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  constexpr double kTol = 1e-8;
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kTol)
    throw std::invalid_argument("density matrix must be Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > kTol ||
      std::abs(rho.trace().imag()) > kTol)
    throw std::invalid_argument("density matrix must have unit trace");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho,
                                                         Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()[i];
    if (lambda < -kTol)
      throw std::invalid_argument("density matrix is not positive semidefinite");
    if (lambda > 0.0) entropy -= lambda * std::log2(lambda);
  }
  return std::max(entropy, 0.0);
}

}  // namespace ssrbell::fock
