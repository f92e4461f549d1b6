#include "ssrbell/optics.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "ssrbell/kernels.hpp"

namespace ssrbell::optics {

using fock::Complex;
using fock::FockBasis;
using fock::FockVector;
using fock::PureState;

namespace {

constexpr int kMaxParticles = 34;

double factorial(int n) {
  static const auto table = [] {
    std::array<double, kMaxParticles + 1> t{};
    t[0] = 1.0;
    for (int i = 1; i <= kMaxParticles; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table.at(static_cast<std::size_t>(n));
}

double binomial(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

// Real part of the sector lift at phase 0, stored transposed for the apply
// path: rt[o * (t+1) + i] = <input (t-i, i) | output (t-o, o)>.  The phase
// enters only as the diagonal factor e^{-i phase i} on the input index, so one
// real matrix per (alpha, total) serves every phase.
struct SectorLift {
  int total;
  std::vector<double> rt;
};

const SectorLift& sector_lift(double alpha, double beta, int total) {
  static std::map<std::pair<double, int>, SectorLift> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(alpha, total);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  if (total > kMaxParticles)
    throw std::invalid_argument("pair sector exceeds supported particle count");
  const int t = total;
  SectorLift lift{t, std::vector<double>(static_cast<std::size_t>(t + 1) * (t + 1), 0.0)};
  for (int o = 0; o <= t; ++o) {
    const int n = t - o, m = o;
    const double norm = std::sqrt(factorial(n) * factorial(m));
    for (int j = 0; j <= n; ++j) {
      for (int l = 0; l <= m; ++l) {
        const int p = j + l;  // first input mode occupation
        const double coef = binomial(n, j) * binomial(m, l) *
                            std::pow(alpha, j) * std::pow(beta, n - j) *
                            std::pow(beta, l) * std::pow(-alpha, m - l) *
                            std::sqrt(factorial(p) * factorial(t - p)) / norm;
        lift.rt[static_cast<std::size_t>(o) * (t + 1) + (t - p)] += coef;
      }
    }
  }
  return cache.emplace(key, std::move(lift)).first->second;
}

// Index layout of one beamsplitter application: basis indices grouped by
// spectator occupations, each group ordered by the second pair mode count.
struct PairGroups {
  std::vector<std::vector<std::size_t>> groups;
};

const PairGroups& pair_groups(const FockBasis& basis, int i, int j) {
  static std::map<std::array<int, 4>, PairGroups> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  std::array<int, 4> key{basis.mode_count(), basis.total(), i, j};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  PairGroups pg;
  std::vector<bool> seen(basis.size(), false);
  std::vector<int> occ(static_cast<std::size_t>(basis.mode_count()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (seen[k]) continue;
    const auto& v = basis.vector_at(k);
    const int t = v[i] + v[j];
    std::vector<std::size_t> members(static_cast<std::size_t>(t) + 1);
    const auto vo = v.occupations();
    std::copy(vo.begin(), vo.end(), occ.begin());
    for (int r = 0; r <= t; ++r) {
      occ[static_cast<std::size_t>(i)] = t - r;
      occ[static_cast<std::size_t>(j)] = r;
      const std::size_t idx = basis.index_of(FockVector(occ));
      members[static_cast<std::size_t>(r)] = idx;
      seen[idx] = true;
    }
    pg.groups.push_back(std::move(members));
  }
  return cache.emplace(key, std::move(pg)).first->second;
}

}  // namespace

BeamsplitterParams::BeamsplitterParams(double alpha, double beta, double phase)
    : alpha_(alpha), beta_(beta), phase_(phase) {
  if (!(alpha >= 0.0) || !(beta >= 0.0))
    throw std::invalid_argument("transmissivity amplitudes must be non-negative");
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12)
    throw std::invalid_argument("alpha^2 + beta^2 must equal 1");
  if (!std::isfinite(phase)) throw std::invalid_argument("phase must be finite");
}

BeamsplitterParams BeamsplitterParams::balanced(double phase) {
  const double r = 1.0 / std::sqrt(2.0);
  return BeamsplitterParams(r, r, phase);
}

BeamsplitterParams BeamsplitterParams::with_alpha(double alpha, double phase) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in [0, 1]");
  return BeamsplitterParams(alpha, std::sqrt(std::max(0.0, 1.0 - alpha * alpha)),
                            phase);
}

Eigen::Matrix2cd single_particle_matrix(const BeamsplitterParams& params) {
  const Complex ph = std::polar(1.0, -params.phase());
  Eigen::Matrix2cd u;
  u << params.alpha(), params.beta() * ph, params.beta(), -params.alpha() * ph;
  return u;
}

PureState apply_beamsplitter(const PureState& state, std::pair<int, int> mode_pair,
                             const BeamsplitterParams& params) {
  const auto [i, j] = mode_pair;
  const int modes = state.mode_count();
  if (i < 0 || j < 0 || i >= modes || j >= modes || i == j)
    throw std::invalid_argument("mode pair indices invalid");

  const FockBasis& basis = state.basis();
  const auto& pg = pair_groups(basis, i, j);
  const auto amps = state.amplitudes();
  std::vector<Complex> out(amps.size());
  std::vector<Complex> in_buf, out_buf;
  for (const auto& members : pg.groups) {
    const int t = static_cast<int>(members.size()) - 1;
    const auto& lift = sector_lift(params.alpha(), params.beta(), t);
    in_buf.resize(members.size());
    out_buf.resize(members.size());
    for (int r = 0; r <= t; ++r)
      in_buf[static_cast<std::size_t>(r)] =
          amps[members[static_cast<std::size_t>(r)]] *
          std::polar(1.0, params.phase() * r);
    kernels::real_matvec_cplx(lift.rt.data(), members.size(), members.size(),
                              in_buf.data(), out_buf.data());
    for (int r = 0; r <= t; ++r)
      out[members[static_cast<std::size_t>(r)]] = out_buf[static_cast<std::size_t>(r)];
  }
  return PureState(basis, std::move(out));
}

PureState apply_phase(const PureState& state, int mode, double theta) {
  if (mode < 0 || mode >= state.mode_count())
    throw std::invalid_argument("mode index invalid");
  const FockBasis& basis = state.basis();
  std::vector<Complex> out(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] *= std::polar(1.0, theta * basis.vector_at(k)[mode]);
  return PureState(basis, std::move(out));
}

std::vector<Complex> measurement_projector_amplitudes(
    int n_out, int m_out, const BeamsplitterParams& params, int total) {
  if (n_out < 0 || m_out < 0 || n_out + m_out != total)
    throw std::invalid_argument("output occupations must sum to the sector total");
  const auto& lift = sector_lift(params.alpha(), params.beta(), total);
  std::vector<Complex> column(static_cast<std::size_t>(total) + 1);
  for (int i = 0; i <= total; ++i)
    column[static_cast<std::size_t>(i)] =
        lift.rt[static_cast<std::size_t>(m_out) * (total + 1) + i] *
        std::polar(1.0, -params.phase() * i);
  return column;
}

}  // namespace ssrbell::optics
