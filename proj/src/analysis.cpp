#include "ssrbell/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ssrbell/errors.hpp"
#include "ssrbell/parallel.hpp"

namespace ssrbell::analysis {

using bell::BellSettings;
using bell::MeasurementSetting;
using fock::Complex;
using fock::PureState;
using states::TwoCopyArrangement;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

MeasurementSetting setting(double alpha, double phase) {
  return {optics::BeamsplitterParams::with_alpha(alpha, phase)};
}

BellSettings make_settings(double alpha_a, double alpha_b, double a1, double a2,
                           double b1, double b2) {
  return {{setting(alpha_a, a1), setting(alpha_a, a2)},
          {setting(alpha_b, b1), setting(alpha_b, b2)}};
}

// Downhill simplex (Nelder-Mead); terminates when the simplex diameter drops
// below `tol` or after `max_iter` reflections.  Fully deterministic.
std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step, double tol, int max_iter) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> xs(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += step;
  std::vector<double> fs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        d = std::max(d, std::abs(xs[i][k] - xs[0][k]));
    return d;
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<std::size_t> order(n + 1);
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> xs2(n + 1);
    std::vector<double> fs2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      xs2[i] = xs[order[i]];
      fs2[i] = fs[order[i]];
    }
    xs = std::move(xs2);
    fs = std::move(fs2);
    if (diameter() < tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += xs[i][k] / n;

    auto blend = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t k = 0; k < n; ++k)
        x[k] = centroid[k] + coef * (xs[n][k] - centroid[k]);
      return x;
    };

    const auto reflected = blend(-1.0);
    const double fr = f(reflected);
    if (fr < fs[0]) {
      const auto expanded = blend(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        xs[n] = expanded;
        fs[n] = fe;
      } else {
        xs[n] = reflected;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = reflected;
      fs[n] = fr;
    } else {
      const auto contracted = blend(fr < fs[n] ? -0.5 : 0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, fs[n])) {
        xs[n] = contracted;
        fs[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k)
            xs[i][k] = xs[0][k] + 0.5 * (xs[i][k] - xs[0][k]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fs[i] < fs[best]) best = i;
  return {xs[best], fs[best]};
}

struct GridBest {
  double value = -1.0;
  std::array<std::size_t, 3> index{0, 0, 0};  // (a2, b1, b2)
};

// Scans |E(0,b1) + E(0,b2) + E(a2,b1) - E(a2,b2)| over the grid.  For fixed a2
// the term splits into u(b1) + v(b2), so only the extremes of u and v matter.
GridBest scan_grid(const std::vector<double>& table, std::size_t g) {
  GridBest best;
  std::vector<double> u(g), v(g);
  for (std::size_t a2 = 0; a2 < g; ++a2) {
    for (std::size_t b = 0; b < g; ++b) {
      u[b] = table[b] + table[a2 * g + b];
      v[b] = table[b] - table[a2 * g + b];
    }
    std::size_t umax = 0, umin = 0, vmax = 0, vmin = 0;
    for (std::size_t b = 1; b < g; ++b) {
      if (u[b] > u[umax]) umax = b;
      if (u[b] < u[umin]) umin = b;
      if (v[b] > v[vmax]) vmax = b;
      if (v[b] < v[vmin]) vmin = b;
    }
    const double hi = std::abs(u[umax] + v[vmax]);
    const double lo = std::abs(u[umin] + v[vmin]);
    std::array<std::size_t, 2> pick =
        (hi > lo || (hi == lo && std::array{umax, vmax} <= std::array{umin, vmin}))
            ? std::array{umax, vmax}
            : std::array{umin, vmin};
    const double cand = std::max(hi, lo);
    if (cand > best.value) {
      best.value = cand;
      best.index = {a2, pick[0], pick[1]};
    }
  }
  return best;
}

}  // namespace

std::vector<double> correlation_table(const TwoCopyArrangement& state,
                                      const std::vector<double>& alice_angles,
                                      const std::vector<double>& bob_angles,
                                      const OptimizeOptions& options) {
  std::vector<double> table(alice_angles.size() * bob_angles.size());
  parallel_for(alice_angles.size(), options.threads, [&](std::size_t i) {
    const MeasurementSetting a = setting(options.alpha_alice, alice_angles[i]);
    for (std::size_t j = 0; j < bob_angles.size(); ++j) {
      const MeasurementSetting b = setting(options.alpha_bob, bob_angles[j]);
      table[i * bob_angles.size() + j] = bell::correlation(state, a, b);
    }
  });
  return table;
}

OptimizationResult optimize_bell(const TwoCopyArrangement& state,
                                 int grid_points_per_angle, bool refine,
                                 const OptimizeOptions& options) {
  if (grid_points_per_angle < 8)
    throw std::invalid_argument("grid_points_per_angle must be >= 8");
  const std::size_t g = static_cast<std::size_t>(grid_points_per_angle);
  std::vector<double> angles(g);
  for (std::size_t k = 0; k < g; ++k) angles[k] = kTwoPi * k / g;

  const auto table = correlation_table(state, angles, angles, options);
  const GridBest grid = scan_grid(table, g);
  std::vector<double> x{angles[grid.index[0]], angles[grid.index[1]],
                        angles[grid.index[2]]};

  auto evaluate = [&](const std::vector<double>& p) {
    return bell::bell_term(state, make_settings(options.alpha_alice,
                                                options.alpha_bob, 0.0, p[0],
                                                p[1], p[2]));
  };

  if (refine) {
    auto objective = [&](const std::vector<double>& p) { return -evaluate(p); };
    const double step = kTwoPi / g / 2.0;
    auto [bx, bf] = nelder_mead(objective, x, step, options.simplex_tol,
                                options.simplex_max_iter);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> jitter(-kTwoPi / g, kTwoPi / g);
    for (int r = 0; r < options.restarts; ++r) {
      std::vector<double> start = x;
      for (auto& c : start) c += jitter(rng);
      auto [rx, rf] = nelder_mead(objective, start, step, options.simplex_tol,
                                  options.simplex_max_iter);
      if (rf < bf) {
        bf = rf;
        bx = rx;
      }
    }
    if (-bf >= grid.value) x = bx;
  }

  for (auto& c : x) c = wrap_angle(c);
  OptimizationResult result;
  result.best_settings = make_settings(options.alpha_alice, options.alpha_bob,
                                       0.0, x[0], x[1], x[2]);
  result.best_value = bell::bell_term(state, result.best_settings);
  result.grid_resolution = grid_points_per_angle;
  result.refined = refine;
  return result;
}

TransmissivityOptimum optimize_bell_with_transmissivity(
    const TwoCopyArrangement& state, int alpha_grid_points,
    int phase_grid_points, bool refine, const OptimizeOptions& options) {
  if (alpha_grid_points < 2)
    throw std::invalid_argument("alpha_grid_points must be >= 2");
  const std::size_t g = static_cast<std::size_t>(phase_grid_points);
  std::vector<double> angles(g);
  for (std::size_t k = 0; k < g; ++k) angles[k] = kTwoPi * k / g;

  double best_value = -1.0;
  std::array<double, 5> best{};  // (alphaA, alphaB, a2, b1, b2)
  for (int ia = 0; ia < alpha_grid_points; ++ia) {
    for (int ib = 0; ib < alpha_grid_points; ++ib) {
      OptimizeOptions local = options;
      local.alpha_alice = std::sqrt((ia + 1.0) / (alpha_grid_points + 1.0));
      local.alpha_bob = std::sqrt((ib + 1.0) / (alpha_grid_points + 1.0));
      const auto table = correlation_table(state, angles, angles, local);
      const GridBest gb = scan_grid(table, g);
      if (gb.value > best_value) {
        best_value = gb.value;
        best = {local.alpha_alice, local.alpha_bob, angles[gb.index[0]],
                angles[gb.index[1]], angles[gb.index[2]]};
      }
    }
  }

  // Parametrize alpha = |cos(theta)| so the simplex stays in range.
  auto evaluate = [&](const std::vector<double>& p) {
    const double aa = std::abs(std::cos(p[0]));
    const double ab = std::abs(std::cos(p[1]));
    return bell::bell_term(
        state, make_settings(aa, ab, 0.0, p[2], p[3], p[4]));
  };
  std::vector<double> x{std::acos(best[0]), std::acos(best[1]), best[2],
                        best[3], best[4]};
  if (refine) {
    auto objective = [&](const std::vector<double>& p) { return -evaluate(p); };
    auto [bx, bf] = nelder_mead(objective, x, kTwoPi / g / 2.0,
                                options.simplex_tol, options.simplex_max_iter);
    if (-bf >= best_value) x = bx;
  }

  TransmissivityOptimum out;
  out.alpha_alice = std::abs(std::cos(x[0]));
  out.alpha_bob = std::abs(std::cos(x[1]));
  out.result.best_settings =
      make_settings(out.alpha_alice, out.alpha_bob, 0.0, wrap_angle(x[2]),
                    wrap_angle(x[3]), wrap_angle(x[4]));
  out.result.best_value = bell::bell_term(state, out.result.best_settings);
  out.result.grid_resolution = phase_grid_points;
  out.result.refined = refine;
  return out;
}

Surface bell_surface(const TwoCopyArrangement& state, double phi_a1,
                     double phi_a2, const AngleRange& b1_range,
                     const AngleRange& b2_range, int resolution,
                     const OptimizeOptions& options) {
  if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  const std::size_t res = static_cast<std::size_t>(resolution);
  Surface s;
  s.phi_a1 = phi_a1;
  s.phi_a2 = phi_a2;
  s.b1_values.resize(res);
  s.b2_values.resize(res);
  for (std::size_t i = 0; i < res; ++i) {
    s.b1_values[i] = b1_range.start + (b1_range.stop - b1_range.start) * i / res;
    s.b2_values[i] = b2_range.start + (b2_range.stop - b2_range.start) * i / res;
  }
  const std::vector<double> alice{phi_a1, phi_a2};
  const auto rows1 = correlation_table(state, alice, s.b1_values, options);
  const auto rows2 = correlation_table(state, alice, s.b2_values, options);
  s.values.resize(res * res);
  s.max_value = -1.0;
  for (std::size_t i = 0; i < res; ++i) {
    const double u = rows1[i] + rows1[res + i];
    for (std::size_t j = 0; j < res; ++j) {
      const double v = rows2[j] - rows2[res + j];
      const double b = std::abs(u + v);
      s.values[i * res + j] = b;
      if (b > s.max_value) {
        s.max_value = b;
        s.max_b1 = s.b1_values[i];
        s.max_b2 = s.b2_values[j];
      }
    }
  }
  return s;
}

namespace {

// Applies 1/2 (a\dag b + e b\dag a)-type ladder maps on a bi-mode state.
std::vector<Complex> apply_ladder(const PureState& state, Complex up_coef,
                                  Complex down_coef) {
  const auto& basis = state.basis();
  const auto amps = state.amplitudes();
  std::vector<Complex> out(amps.size(), Complex{0.0, 0.0});
  for (std::size_t k = 0; k < amps.size(); ++k) {
    if (amps[k] == Complex{0.0, 0.0}) continue;
    const auto& v = basis.vector_at(k);
    const int na = v[0], nb = v[1];
    if (nb > 0) {  // a\dag b
      const std::size_t idx = basis.index_of(fock::FockVector({na + 1, nb - 1}));
      out[idx] += up_coef * std::sqrt(static_cast<double>(nb) * (na + 1)) * amps[k];
    }
    if (na > 0) {  // b\dag a
      const std::size_t idx = basis.index_of(fock::FockVector({na - 1, nb + 1}));
      out[idx] += down_coef * std::sqrt(static_cast<double>(na) * (nb + 1)) * amps[k];
    }
  }
  return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

double squeezing_parameter(const PureState& state) {
  if (state.mode_count() != 2)
    throw std::invalid_argument("squeezing_parameter expects a bi-mode state");
  const int n = state.total();
  const auto amps = state.amplitudes();

  const auto sx = apply_ladder(state, 0.5, 0.5);
  const Complex ihalf{0.0, 0.5};
  const auto sy = apply_ladder(state, ihalf, -ihalf);

  const double mean_sx = inner(amps, sx).real();
  const double mean_sy = inner(amps, sy).real();
  const double denom = mean_sx * mean_sx + mean_sy * mean_sy;
  if (denom <= 1e-12)
    throw UndefinedSqueezingError("mean spin vanishes; squeezing undefined");
  const double var_sy = inner(sy, sy).real() - mean_sy * mean_sy;
  return std::sqrt(n * var_sy / denom);
}

double projected_entropy(const TwoCopyArrangement& state) {
  if (!state.is_pure())
    throw std::invalid_argument("projected_entropy expects a pure composite");
  static constexpr std::array<int, 2> kAliceModes{0, 1};
  double total = 0.0;
  for (int m = 0; m <= state.total(); ++m) {
    const double q = bell::projection_probability(state, m);
    if (q <= 1e-12) continue;
    const auto projected = bell::project_alice_total(state, m);
    const auto rho = fock::reduced_density(projected.pure_state(), kAliceModes);
    total += q * fock::von_neumann_entropy(rho.matrix);
  }
  return total;
}

OutcomeMap default_outcome_map(int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  return [d](int, int m) { return m % d; };
}

double cglmp_value(const std::array<bell::JointDistribution, 4>& distributions,
                   const OutcomeMap& outcome_map, int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  // Fold each distribution into a d x d one-party outcome table.
  std::array<std::vector<double>, 4> tables;
  for (std::size_t s = 0; s < 4; ++s) {
    tables[s].assign(static_cast<std::size_t>(d) * d, 0.0);
    for (const auto& [o, p] : distributions[s].probabilities()) {
      const int a = outcome_map(o[0], o[1]);
      const int b = outcome_map(o[2], o[3]);
      if (a < 0 || a >= d || b < 0 || b >= d)
        throw std::invalid_argument("outcome map produced an index outside 0..d-1");
      tables[s][static_cast<std::size_t>(a) * d + b] += p;
    }
  }
  auto p_a_eq_b_plus = [&](const std::vector<double>& t, int k) {
    double s = 0.0;
    const int kk = ((k % d) + d) % d;
    for (int j = 0; j < d; ++j)
      s += t[static_cast<std::size_t>((j + kk) % d) * d + j];
    return s;
  };
  auto p_b_eq_a_plus = [&](const std::vector<double>& t, int k) {
    double s = 0.0;
    const int kk = ((k % d) + d) % d;
    for (int j = 0; j < d; ++j)
      s += t[static_cast<std::size_t>(j) * d + (j + kk) % d];
    return s;
  };
  const auto& t11 = tables[0];
  const auto& t12 = tables[1];
  const auto& t21 = tables[2];
  const auto& t22 = tables[3];
  double value = 0.0;
  for (int k = 0; k < d / 2; ++k) {
    const double w = 1.0 - 2.0 * k / (d - 1);
    const double plus = p_a_eq_b_plus(t11, k) + p_b_eq_a_plus(t21, k + 1) +
                        p_a_eq_b_plus(t22, k) + p_b_eq_a_plus(t12, k);
    const double minus = p_a_eq_b_plus(t11, -k - 1) + p_b_eq_a_plus(t21, -k) +
                         p_a_eq_b_plus(t22, -k - 1) +
                         p_b_eq_a_plus(t12, -k - 1);
    value += w * (plus - minus);
  }
  return value;
}

CglmpOptimum optimize_cglmp(const TwoCopyArrangement& state, int d,
                            int grid_points_per_angle, bool refine,
                            const OptimizeOptions& options) {
  if (grid_points_per_angle < 4)
    throw std::invalid_argument("grid_points_per_angle must be >= 4");
  const auto map = default_outcome_map(d);
  auto evaluate = [&](double a2, double b1, double b2) {
    const BellSettings s = make_settings(options.alpha_alice, options.alpha_bob,
                                         0.0, a2, b1, b2);
    const std::array<bell::JointDistribution, 4> dists{
        bell::joint_distribution(state, s.alice[0], s.bob[0]),
        bell::joint_distribution(state, s.alice[0], s.bob[1]),
        bell::joint_distribution(state, s.alice[1], s.bob[0]),
        bell::joint_distribution(state, s.alice[1], s.bob[1])};
    return cglmp_value(dists, map, d);
  };

  const std::size_t g = static_cast<std::size_t>(grid_points_per_angle);
  std::vector<double> angles(g);
  for (std::size_t k = 0; k < g; ++k) angles[k] = kTwoPi * k / g;
  std::vector<double> row_best(g, -1e9);
  std::vector<std::array<double, 3>> row_arg(g);
  parallel_for(g, options.threads, [&](std::size_t ia) {
    for (std::size_t ib1 = 0; ib1 < g; ++ib1) {
      for (std::size_t ib2 = 0; ib2 < g; ++ib2) {
        const double v = evaluate(angles[ia], angles[ib1], angles[ib2]);
        if (v > row_best[ia]) {
          row_best[ia] = v;
          row_arg[ia] = {angles[ia], angles[ib1], angles[ib2]};
        }
      }
    }
  });
  std::size_t best_row = 0;
  for (std::size_t i = 1; i < g; ++i)
    if (row_best[i] > row_best[best_row]) best_row = i;

  std::vector<double> x{row_arg[best_row][0], row_arg[best_row][1],
                        row_arg[best_row][2]};
  if (refine) {
    auto objective = [&](const std::vector<double>& p) {
      return -evaluate(p[0], p[1], p[2]);
    };
    auto [bx, bf] = nelder_mead(objective, x, kTwoPi / g / 2.0,
                                options.simplex_tol, options.simplex_max_iter);
    if (-bf >= row_best[best_row]) x = bx;
  }

  CglmpOptimum out;
  out.best_settings = make_settings(options.alpha_alice, options.alpha_bob, 0.0,
                                    wrap_angle(x[0]), wrap_angle(x[1]),
                                    wrap_angle(x[2]));
  out.best_value = evaluate(x[0], x[1], x[2]);
  return out;
}

}  // namespace ssrbell::analysis
