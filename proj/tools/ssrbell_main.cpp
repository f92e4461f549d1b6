// Command-line front end: Bell-term surfaces and optima for two-copy
// arrangements of number-conserving bi-mode states, plus the entanglement
// diagnostics, with CSV/JSON export.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ssrbell/analysis.hpp"
#include "ssrbell/errors.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ssrbell;

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kInvSqrt2 = 0.7071067811865476;

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct RunConfig {
  std::string family = "bec";
  int n = 1;
  int m = 0;
  double c = 0.5;
  double p = 0.0;
  std::string amplitudes;  // custom family: "re,im;re,im;..."

  std::string family2;     // empty: same as the first copy
  int n2 = -1;
  int m2 = -1;
  double c2 = -1.0;
  double p2 = -1.0;

  double alpha = kInvSqrt2;
  int resolution = 0;  // 0 picks the per-command default
  bool refine = true;
  std::vector<double> fixed_angles;
  std::string out;
  int d = 0;
  bool coopt_alpha = false;
  int restarts = 0;
  std::uint64_t seed = 0;
  std::string config_path;
};

void add_state_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--family", cfg.family, "bec | noon | squeezed | toy_mixed | custom")
      ->check(CLI::IsMember({"bec", "noon", "squeezed", "toy_mixed", "custom"}));
  cmd->add_option("--n", cfg.n, "particle count (bec, noon, custom)");
  cmd->add_option("--m", cfg.m, "minority occupation (noon)");
  cmd->add_option("--c", cfg.c, "squeezing parameter (squeezed)");
  cmd->add_option("--p", cfg.p, "ensemble weight (toy_mixed)");
  cmd->add_option("--amplitudes", cfg.amplitudes,
                  "custom amplitudes 're,im;re,im;...' over (n,0)...(0,n)");
  cmd->add_option("--family2", cfg.family2, "second copy family (default: first)");
  cmd->add_option("--n2", cfg.n2, "second copy particle count");
  cmd->add_option("--m2", cfg.m2, "second copy minority occupation");
  cmd->add_option("--c2", cfg.c2, "second copy squeezing parameter");
  cmd->add_option("--p2", cfg.p2, "second copy ensemble weight");
  cmd->add_option("--alpha", cfg.alpha, "beamsplitter transmissivity amplitude");
  cmd->add_option("--seed", cfg.seed, "seed for randomized refinement restarts");
  cmd->add_option("--restarts", cfg.restarts, "extra refinement starts");
  cmd->add_option("--config", cfg.config_path,
                  "plain key=value configuration file");
}

fock::MixedState build_copy(const std::string& family, int n, int m, double c,
                            double p, const std::string& amplitudes) {
  if (family == "bec") return fock::MixedState(states::bec_state(n));
  if (family == "noon") return fock::MixedState(states::noon_state(n, m));
  if (family == "squeezed") return fock::MixedState(states::squeezed_state(c));
  if (family == "toy_mixed") return states::toy_mixed_state(p);
  if (family == "custom") {
    if (amplitudes.empty())
      throw std::invalid_argument("custom family needs --amplitudes");
    std::vector<fock::Complex> amps;
    std::stringstream ss(amplitudes);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto comma = item.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("custom amplitude entries are 're,im'");
      amps.emplace_back(std::stod(item.substr(0, comma)),
                        std::stod(item.substr(comma + 1)));
    }
    return fock::MixedState(fock::PureState(fock::FockBasis(2, n), std::move(amps)));
  }
  throw std::invalid_argument("unknown family: " + family);
}

fock::MixedState first_copy(const RunConfig& cfg) {
  return build_copy(cfg.family, cfg.n, cfg.m, cfg.c, cfg.p, cfg.amplitudes);
}

fock::MixedState second_copy(const RunConfig& cfg) {
  const std::string family = cfg.family2.empty() ? cfg.family : cfg.family2;
  const int n = cfg.n2 >= 0 ? cfg.n2 : cfg.n;
  const int m = cfg.m2 >= 0 ? cfg.m2 : cfg.m;
  const double c = cfg.c2 >= 0.0 ? cfg.c2 : cfg.c;
  const double p = cfg.p2 >= 0.0 ? cfg.p2 : cfg.p;
  return build_copy(family, n, m, c, p, cfg.amplitudes);
}

states::TwoCopyArrangement build_pair(const RunConfig& cfg) {
  return states::two_copy(first_copy(cfg), second_copy(cfg));
}

json family_json(const RunConfig& cfg) {
  json j;
  j["family"] = cfg.family;
  if (cfg.family == "bec" || cfg.family == "custom") j["n"] = cfg.n;
  if (cfg.family == "noon") {
    j["n"] = cfg.n;
    j["m"] = cfg.m;
  }
  if (cfg.family == "squeezed") j["c"] = cfg.c;
  if (cfg.family == "toy_mixed") j["p"] = cfg.p;
  if (!cfg.family2.empty()) j["family2"] = cfg.family2;
  if (cfg.n2 >= 0) j["n2"] = cfg.n2;
  if (cfg.m2 >= 0) j["m2"] = cfg.m2;
  if (cfg.c2 >= 0.0) j["c2"] = cfg.c2;
  if (cfg.p2 >= 0.0) j["p2"] = cfg.p2;
  j["alpha"] = cfg.alpha;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open for writing: " + path.string());
  f << text;
  f.flush();
  if (!f.good()) throw std::ios_base::failure("write failed: " + path.string());
}

void write_json(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string surface_csv(const analysis::Surface& s) {
  std::string out = "angle1,angle2,bell_term\n";
  for (std::size_t i = 0; i < s.b1_values.size(); ++i)
    for (std::size_t j = 0; j < s.b2_values.size(); ++j)
      out += fmt12(s.b1_values[i]) + "," + fmt12(s.b2_values[j]) + "," +
             fmt12(s.at(i, j)) + "\n";
  return out;
}

json settings_json(const bell::BellSettings& s) {
  json j;
  j["phi_a1"] = s.alice[0].params.phase();
  j["phi_a2"] = s.alice[1].params.phase();
  j["phi_b1"] = s.bob[0].params.phase();
  j["phi_b2"] = s.bob[1].params.phase();
  return j;
}

analysis::OptimizeOptions options_from(const RunConfig& cfg) {
  analysis::OptimizeOptions o;
  o.alpha_alice = cfg.alpha;
  o.alpha_bob = cfg.alpha;
  o.restarts = cfg.restarts;
  o.seed = cfg.seed;
  return o;
}

// ---------------------------------------------------------------------------
// surface

int cmd_surface(const RunConfig& cfg) {
  auto pair = build_pair(cfg);
  const int res = cfg.resolution > 0 ? cfg.resolution : 101;
  double a1 = 0.0, a2 = 0.0;
  if (cfg.fixed_angles.size() == 2) {
    a1 = cfg.fixed_angles[0];
    a2 = cfg.fixed_angles[1];
  } else {
    auto opt = analysis::optimize_bell(pair, 64, cfg.refine, options_from(cfg));
    a1 = opt.best_settings.alice[0].params.phase();
    a2 = opt.best_settings.alice[1].params.phase();
  }
  auto surf = analysis::bell_surface(pair, a1, a2, {}, {}, res, options_from(cfg));

  const fs::path csv_path = cfg.out.empty() ? "surface.csv" : cfg.out;
  write_text(csv_path, surface_csv(surf));
  json sidecar = family_json(cfg);
  sidecar["phi_a1"] = a1;
  sidecar["phi_a2"] = a2;
  sidecar["resolution"] = res;
  sidecar["max_value"] = surf.max_value;
  sidecar["max_phi_b1"] = surf.max_b1;
  sidecar["max_phi_b2"] = surf.max_b2;
  fs::path side_path = csv_path;
  side_path.replace_extension(".json");
  write_json(side_path, sidecar);
  std::cout << "wrote " << csv_path.string() << " (max " << fmt12(surf.max_value)
            << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// optimize

int cmd_optimize(const RunConfig& cfg) {
  auto pair = build_pair(cfg);
  const int grid = cfg.resolution > 0 ? cfg.resolution : 64;
  auto opt = analysis::optimize_bell(pair, grid, cfg.refine, options_from(cfg));

  json report = family_json(cfg);
  report["grid_resolution"] = opt.grid_resolution;
  report["refined"] = opt.refined;
  report["best_value"] = opt.best_value;
  report["best_settings"] = settings_json(opt.best_settings);
  report["violation"] = opt.best_value > 2.0;
  if (cfg.coopt_alpha) {
    auto co = analysis::optimize_bell_with_transmissivity(
        pair, 9, grid, cfg.refine, options_from(cfg));
    json coj;
    coj["best_value"] = co.result.best_value;
    coj["alpha_alice"] = co.alpha_alice;
    coj["alpha_bob"] = co.alpha_bob;
    coj["best_settings"] = settings_json(co.result.best_settings);
    report["transmissivity_cooptimized"] = coj;
  }
  const std::string text = report.dump(2) + "\n";
  if (!cfg.out.empty()) write_text(cfg.out, text);
  std::cout << text;
  return 0;
}

// ---------------------------------------------------------------------------
// entropy / squeezing / cglmp

int cmd_entropy(const RunConfig& cfg) {
  auto pair = build_pair(cfg);
  const double value = analysis::projected_entropy(pair);
  json report = family_json(cfg);
  report["projected_entropy_bits"] = value;
  const std::string text = report.dump(2) + "\n";
  if (!cfg.out.empty()) write_text(cfg.out, text);
  std::cout << text;
  return 0;
}

int cmd_squeezing(const RunConfig& cfg) {
  auto copy = first_copy(cfg);
  if (!copy.is_pure())
    throw std::invalid_argument("squeezing needs a pure bi-mode state");
  const double value = analysis::squeezing_parameter(copy.pure_state());
  json report = family_json(cfg);
  report["squeezing_parameter"] = value;
  report["squeezed"] = value < 1.0;
  const std::string text = report.dump(2) + "\n";
  if (!cfg.out.empty()) write_text(cfg.out, text);
  std::cout << text;
  return 0;
}

int cmd_cglmp(const RunConfig& cfg) {
  auto pair = build_pair(cfg);
  const int d = cfg.d > 0 ? cfg.d : pair.total() + 1;
  const int grid = cfg.resolution > 0 ? cfg.resolution : 12;
  auto opt = analysis::optimize_cglmp(pair, d, grid, cfg.refine, options_from(cfg));
  json report = family_json(cfg);
  report["d"] = d;
  report["grid_resolution"] = grid;
  report["best_value"] = opt.best_value;
  report["best_settings"] = settings_json(opt.best_settings);
  report["classical_bound"] = 2.0;
  report["violation"] = opt.best_value > 2.0;
  const std::string text = report.dump(2) + "\n";
  if (!cfg.out.empty()) write_text(cfg.out, text);
  std::cout << text;
  return 0;
}

// ---------------------------------------------------------------------------
// reproduce

struct Check {
  std::string name;
  double value;
  std::string relation;  // "approx" or "below"
  double target;
  double tolerance;
  bool passed;
};

struct ItemReport {
  std::string item;
  std::vector<Check> checks;
  json extra;

  void approx(const std::string& name, double value, double target, double tol) {
    checks.push_back({name, value, "approx", target, tol,
                      std::abs(value - target) <= tol});
  }
  void below(const std::string& name, double value, double bound, double tol) {
    checks.push_back({name, value, "below", bound, tol, value <= bound + tol});
  }

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  void emit(const fs::path& dir) const {
    json j;
    j["item"] = item;
    j["passed"] = all_passed();
    j["checks"] = json::array();
    for (const auto& c : checks) {
      json cj;
      cj["name"] = c.name;
      cj["value"] = c.value;
      cj["relation"] = c.relation;
      cj["target"] = c.target;
      cj["tolerance"] = c.tolerance;
      cj["passed"] = c.passed;
      j["checks"].push_back(cj);
      std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << item << "/" << c.name
                << ": value " << fmt12(c.value) << " vs "
                << (c.relation == "approx" ? "target " : "bound ")
                << fmt12(c.target) << " (tol " << fmt12(c.tolerance) << ")\n";
    }
    if (!extra.is_null()) j["details"] = extra;
    write_json(dir / (item + "_report.json"), j);
  }
};

void write_surface_bundle(const fs::path& dir, const std::string& stem,
                          const analysis::Surface& surf, const json& params) {
  write_text(dir / (stem + ".csv"), surface_csv(surf));
  json sidecar = params;
  sidecar["phi_a1"] = surf.phi_a1;
  sidecar["phi_a2"] = surf.phi_a2;
  sidecar["max_value"] = surf.max_value;
  write_json(dir / (stem + ".json"), sidecar);
}

ItemReport reproduce_fig2(const fs::path& dir) {
  ItemReport rep{"fig2", {}, {}};
  const double targets[3] = {2.41, 2.36, 2.24};
  const double caption[3][4] = {{0.0, 1.57, 3.93, 2.36},
                                {0.0, 1.07, 3.68, 2.60},
                                {0.0, 1.00, 3.64, 2.68}};
  for (int n = 1; n <= 3; ++n) {
    auto pair = states::two_copy(states::bec_state(n), states::bec_state(n));
    auto opt = analysis::optimize_bell(pair, 64, true);
    rep.approx("optimum_n" + std::to_string(n), opt.best_value, targets[n - 1],
               0.01);
    const auto& cap = caption[n - 1];
    const double at_caption = bell::bell_term(
        pair, bell::BellSettings::balanced(cap[0], cap[1], cap[2], cap[3]));
    rep.approx("caption_angles_n" + std::to_string(n), at_caption,
               targets[n - 1], 0.02);
    auto surf = analysis::bell_surface(pair, cap[0], cap[1], {}, {}, 101);
    json params;
    params["family"] = "bec";
    params["n"] = n;
    write_surface_bundle(dir, "fig2_bec" + std::to_string(n) + "_surface", surf,
                         params);
  }
  return rep;
}

ItemReport reproduce_fig3(const fs::path& dir) {
  ItemReport rep{"fig3", {}, {}};
  auto pair20 = states::two_copy(states::noon_state(2, 0), states::noon_state(2, 0));
  auto pair41 = states::two_copy(states::noon_state(4, 1), states::noon_state(4, 1));
  auto opt20 = analysis::optimize_bell(pair20, 64, true);
  auto opt41 = analysis::optimize_bell(pair41, 64, true);
  rep.approx("optimum_noon20", opt20.best_value, 2.41, 0.01);
  rep.approx("optimum_noon41", opt41.best_value, 2.41, 0.01);

  const double a1 = -0.13, a2 = 0.65;  // reported settings for the left panel
  auto surf20 = analysis::bell_surface(pair20, a1, a2, {}, {}, 64);
  auto surf41 = analysis::bell_surface(pair41, a1, a2, {}, {}, 64);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < surf20.values.size(); ++i)
    max_diff = std::max(max_diff, std::abs(surf20.values[i] - surf41.values[i]));
  rep.below("surface_identity_noon20_noon41", max_diff, 0.0, 1e-10);
  json p20;
  p20["family"] = "noon";
  p20["n"] = 2;
  p20["m"] = 0;
  write_surface_bundle(dir, "fig3_noon20_surface", surf20, p20);
  json p41;
  p41["family"] = "noon";
  p41["n"] = 4;
  p41["m"] = 1;
  write_surface_bundle(dir, "fig3_noon41_surface", surf41, p41);

  auto pair30 = states::two_copy(states::noon_state(3, 0), states::noon_state(3, 0));
  auto opt30 = analysis::optimize_bell(pair30, 64, true);
  rep.approx("optimum_noon30", opt30.best_value, 1.71, 0.01);
  auto surf30 = analysis::bell_surface(
      pair30, opt30.best_settings.alice[0].params.phase(),
      opt30.best_settings.alice[1].params.phase(), {}, {}, 64);
  json p30;
  p30["family"] = "noon";
  p30["n"] = 3;
  p30["m"] = 0;
  write_surface_bundle(dir, "fig3_noon30_surface", surf30, p30);

  rep.below("no_violation_noon30", opt30.best_value, 2.0, 1e-9);
  auto pair31 = states::two_copy(states::noon_state(3, 1), states::noon_state(3, 1));
  rep.below("no_violation_noon31",
            analysis::optimize_bell(pair31, 64, true).best_value, 2.0, 1e-9);
  auto pair40 = states::two_copy(states::noon_state(4, 0), states::noon_state(4, 0));
  rep.below("no_violation_noon40",
            analysis::optimize_bell(pair40, 64, true).best_value, 2.0, 1e-9);
  return rep;
}

ItemReport reproduce_fig4(const fs::path& dir) {
  ItemReport rep{"fig4", {}, {}};
  std::string csv = "c,squeezing_parameter,bell_max\n";
  double prev = 0.0;
  bool monotone = true;
  bool witness_agrees = true;
  for (int i = 1; i <= 14; ++i) {
    const double c = 0.05 * i;
    const double es = analysis::squeezing_parameter(states::squeezed_state(c));
    auto pair = states::two_copy(states::squeezed_state(c),
                                 states::squeezed_state(c));
    const double bmax = analysis::optimize_bell(pair, 48, true).best_value;
    csv += fmt12(c) + "," + fmt12(es) + "," + fmt12(bmax) + "\n";
    if (i > 1 && bmax < prev - 1e-9) monotone = false;
    prev = bmax;
    if (std::abs(c - 0.5) > 1e-12 && ((es < 1.0) != (c > 0.5)))
      witness_agrees = false;
  }
  write_text(dir / "fig4_squeezing.csv", csv);
  rep.approx("coherent_point_unsqueezed",
             analysis::squeezing_parameter(states::squeezed_state(0.5)), 1.0,
             1e-9);
  rep.approx("squeezed_iff_above_half", witness_agrees ? 1.0 : 0.0, 1.0, 0.0);
  rep.approx("bell_max_monotone_in_c", monotone ? 1.0 : 0.0, 1.0, 0.0);
  return rep;
}

ItemReport reproduce_fig5(const fs::path& dir) {
  ItemReport rep{"fig5", {}, {}};
  const double cs[3] = {0.6, 0.65, 0.7};
  const double targets[3] = {2.394, 2.405, 2.413};
  for (int i = 0; i < 3; ++i) {
    auto pair = states::two_copy(states::squeezed_state(cs[i]),
                                 states::squeezed_state(cs[i]));
    auto opt = analysis::optimize_bell(pair, 64, true);
    rep.approx("optimum_c" + fmt12(cs[i]), opt.best_value, targets[i], 0.002);
    auto surf = analysis::bell_surface(
        pair, opt.best_settings.alice[0].params.phase(),
        opt.best_settings.alice[1].params.phase(), {}, {}, 101);
    json params;
    params["family"] = "squeezed";
    params["c"] = cs[i];
    write_surface_bundle(dir, "fig5_c" + std::to_string(i) + "_surface", surf,
                         params);
  }
  return rep;
}

ItemReport reproduce_fig6(const fs::path& dir) {
  ItemReport rep{"fig6", {}, {}};
  const double cs[4] = {0.1, 0.2, 0.3, 0.4};
  const double targets[4] = {2.032, 2.116, 2.220, 2.307};
  for (int i = 0; i < 4; ++i) {
    auto pair = states::two_copy(states::squeezed_state(cs[i]),
                                 states::squeezed_state(cs[i]));
    auto opt = analysis::optimize_bell(pair, 64, true);
    rep.approx("optimum_c" + fmt12(cs[i]), opt.best_value, targets[i], 0.002);
    auto surf = analysis::bell_surface(
        pair, opt.best_settings.alice[0].params.phase(),
        opt.best_settings.alice[1].params.phase(), {}, {}, 101);
    json params;
    params["family"] = "squeezed";
    params["c"] = cs[i];
    write_surface_bundle(dir, "fig6_c" + std::to_string(i) + "_surface", surf,
                         params);
  }
  auto flat_pair = states::two_copy(states::squeezed_state(0.0),
                                    states::squeezed_state(0.0));
  auto surf = analysis::bell_surface(flat_pair, 0.0, 1.0, {}, {}, 64);
  double lo = 1e300, hi = -1e300;
  for (double v : surf.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  json params;
  params["family"] = "squeezed";
  params["c"] = 0.0;
  write_surface_bundle(dir, "fig6_c0_surface", surf, params);
  rep.below("flat_landscape_spread_c0", hi - lo, 0.0, 1e-10);
  rep.below("no_violation_c0", hi, 2.0, 1e-9);
  return rep;
}

ItemReport reproduce_toy(const fs::path& dir) {
  ItemReport rep{"toy", {}, {}};
  std::string csv = "p,alpha_squared,phi_a,phi_b,correlation,closed_form\n";
  double worst = 0.0;
  for (double p : {0.0, 0.25, 0.5, 1.0}) {
    auto pair = states::two_copy(states::toy_mixed_state(p),
                                 states::toy_mixed_state(p));
    for (double a2 : {0.3, 0.5, 0.7}) {
      const double alpha = std::sqrt(a2);
      for (int iu = 0; iu < 4; ++iu) {
        for (int iv = 0; iv < 4; ++iv) {
          const double u = 2.0 * kPi * iu / 4.0 + 0.1;
          const double v = 2.0 * kPi * iv / 4.0 + 0.45;
          const bell::MeasurementSetting sa{
              optics::BeamsplitterParams::with_alpha(alpha, u)};
          const bell::MeasurementSetting sb{
              optics::BeamsplitterParams::with_alpha(alpha, v)};
          const double got = bell::toy_correlation(pair, sa, sb);
          const double want =
              8.0 * (p - 0.5) * (p - 0.5) * a2 * (1.0 - a2) * std::cos(u - v);
          worst = std::max(worst, std::abs(got - want));
          csv += fmt12(p) + "," + fmt12(a2) + "," + fmt12(u) + "," + fmt12(v) +
                 "," + fmt12(got) + "," + fmt12(want) + "\n";
        }
      }
    }
  }
  write_text(dir / "toy_sweep.csv", csv);
  rep.below("toy_formula_worst_error", worst, 0.0, 1e-10);
  double worst_number_basis = 0.0;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0})
    worst_number_basis = std::max(
        worst_number_basis,
        std::abs(bell::number_basis_correlation(states::toy_mixed_state(p)) + 1.0));
  rep.below("single_copy_number_basis", worst_number_basis, 0.0, 1e-12);
  return rep;
}

ItemReport reproduce_mixedN(const fs::path& dir) {
  ItemReport rep{"mixedN", {}, {}};
  std::string csv = "n1,n2,max_abs_correlation\n";
  for (const auto& [n1, n2] : std::vector<std::pair<int, int>>{
           {1, 2}, {1, 3}, {2, 3}, {3, 4}}) {
    auto pair = states::two_copy(states::bec_state(n1), states::bec_state(n2));
    double worst = 0.0;
    for (int iu = 0; iu < 5; ++iu) {
      for (int iv = 0; iv < 5; ++iv) {
        const double u = 2.0 * kPi * iu / 5.0 + 0.21;
        const double v = 2.0 * kPi * iv / 5.0 + 0.93;
        worst = std::max(
            worst, std::abs(bell::correlation(
                       pair, bell::MeasurementSetting::balanced(u),
                       bell::MeasurementSetting::balanced(v))));
      }
    }
    csv += std::to_string(n1) + "," + std::to_string(n2) + "," + fmt12(worst) +
           "\n";
    rep.below("balanced_null_" + std::to_string(n1) + std::to_string(n2), worst,
              0.0, 1e-12);
  }
  write_text(dir / "mixedN_correlations.csv", csv);

  auto pair12 = states::two_copy(states::bec_state(1), states::bec_state(2));
  auto co = analysis::optimize_bell_with_transmissivity(pair12, 9, 24, true);
  rep.below("unbalanced_12_cooptimized", co.result.best_value, 2.0, 1e-9);
  json extra;
  extra["unbalanced_12_alpha_alice"] = co.alpha_alice;
  extra["unbalanced_12_alpha_bob"] = co.alpha_bob;
  rep.extra = extra;
  return rep;
}

ItemReport reproduce_postselect(const fs::path& dir) {
  ItemReport rep{"postselect", {}, {}};
  auto pair = states::two_copy(states::bec_state(1), states::bec_state(1));

  double q_sum = 0.0;
  std::string csv = "alice_particles,probability\n";
  for (int m = 0; m <= 2; ++m) {
    const double q = bell::projection_probability(pair, m);
    q_sum += q;
    csv += std::to_string(m) + "," + fmt12(q) + "\n";
  }
  write_text(dir / "postselect_probabilities.csv", csv);
  rep.approx("projection_completeness", q_sum, 1.0, 1e-12);

  auto projected = bell::project_alice_total(pair, 1);
  analysis::OptimizeOptions tight;
  tight.simplex_tol = 1e-9;
  auto opt = analysis::optimize_bell(projected, 64, true, tight);
  rep.approx("postselected_maximum", opt.best_value, 2.0 * std::sqrt(2.0), 1e-6);

  auto unrestricted = analysis::optimize_bell(pair, 64, true, tight);
  rep.approx("unrestricted_maximum", unrestricted.best_value,
             1.0 + std::sqrt(2.0), 1e-3);
  return rep;
}

ItemReport reproduce_entropy(const fs::path& dir) {
  ItemReport rep{"entropy", {}, {}};
  std::string csv = "n,projected_entropy_bits\n";
  std::vector<double> values;
  for (int n = 1; n <= 9; ++n) {
    auto pair = states::two_copy(states::bec_state(n), states::bec_state(n));
    values.push_back(analysis::projected_entropy(pair));
    csv += std::to_string(n) + "," + fmt12(values.back()) + "\n";
  }
  write_text(dir / "entropy_bec_pairs.csv", csv);
  bool peak_at_2 = true;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (i != 1 && values[i] >= values[1]) peak_at_2 = false;
  rep.approx("bec_pairs_peak_at_n2", peak_at_2 ? 1.0 : 0.0, 1.0, 0.0);
  rep.below("bec_pairs_n9_near_zero", values[8], 0.05, 0.0);

  std::string noon_csv = "n,projected_entropy_bits\n";
  std::vector<double> noon_vals;
  for (int n = 2; n <= 4; ++n) {
    auto pair =
        states::two_copy(states::noon_state(n, 0), states::noon_state(n, 0));
    noon_vals.push_back(analysis::projected_entropy(pair));
    noon_csv += std::to_string(n) + "," + fmt12(noon_vals.back()) + "\n";
  }
  write_text(dir / "entropy_noon_pairs.csv", noon_csv);
  double spread = 0.0;
  for (double v : noon_vals) spread = std::max(spread, std::abs(v - noon_vals[0]));
  rep.below("noon_pairs_constant", spread, 0.0, 1e-9);
  return rep;
}

int cmd_reproduce(const std::string& item, const RunConfig& cfg) {
  const fs::path dir =
      cfg.out.empty() ? fs::path("reproduce_" + item) : fs::path(cfg.out);
  fs::create_directories(dir);
  ItemReport rep;
  if (item == "fig2") rep = reproduce_fig2(dir);
  else if (item == "fig3") rep = reproduce_fig3(dir);
  else if (item == "fig4") rep = reproduce_fig4(dir);
  else if (item == "fig5") rep = reproduce_fig5(dir);
  else if (item == "fig6") rep = reproduce_fig6(dir);
  else if (item == "toy") rep = reproduce_toy(dir);
  else if (item == "mixedN") rep = reproduce_mixedN(dir);
  else if (item == "postselect") rep = reproduce_postselect(dir);
  else if (item == "entropy") rep = reproduce_entropy(dir);
  rep.emit(dir);
  std::cout << (rep.all_passed() ? "all checks passed" : "some checks FAILED")
            << " (report: " << (dir / (item + "_report.json")).string() << ")\n";
  return 0;
}

}  // namespace

// Reads a "key=value" per line file ('#' starts a comment) and returns the
// entries as --key=value tokens.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config lines must be key=value: " + line);
    tokens.push_back("--" + line);
  }
  return tokens;
}

// Splices config-file values in right after the subcommand so that explicit
// command-line flags (parsed later, take-last) override them.
std::vector<std::string> assemble_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (!config_path.empty() && !args.empty()) {
    const auto extra = config_tokens(config_path);
    args.insert(args.begin() + 1, extra.begin(), extra.end());
  }
  return args;
}

int main(int argc, char** argv) {
  CLI::App app{"Bell tests on pairs of number-conserving bi-mode bosonic states"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string item;

  auto* surface = app.add_subcommand("surface", "Bell-term surface as CSV");
  add_state_options(surface, cfg);
  surface->add_option("--resolution", cfg.resolution, "points per swept angle");
  surface->add_flag("--refine,!--no-refine", cfg.refine,
                    "refine the fixed-angle optimization");
  surface->add_option("--fixed-angles", cfg.fixed_angles,
                      "comma pair phi_A1,phi_A2")
      ->delimiter(',')
      ->expected(2);
  surface->add_option("--out", cfg.out, "CSV output path");

  auto* optimize = app.add_subcommand("optimize", "maximize the Bell term");
  add_state_options(optimize, cfg);
  optimize->add_option("--resolution", cfg.resolution, "grid points per angle");
  optimize->add_flag("--refine,!--no-refine", cfg.refine, "simplex refinement");
  optimize->add_flag("--coopt-alpha", cfg.coopt_alpha,
                     "co-optimize transmissivities and report both");
  optimize->add_option("--out", cfg.out, "JSON output path");

  auto* reproduce =
      app.add_subcommand("reproduce", "regenerate a reference dataset");
  reproduce->add_option("item", item,
                        "fig2|fig3|fig4|fig5|fig6|toy|mixedN|postselect|entropy")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig6", "toy",
                             "mixedN", "postselect", "entropy"}));
  reproduce->add_option("--out", cfg.out, "output directory");

  auto* entropy = app.add_subcommand("entropy", "projected entanglement entropy");
  add_state_options(entropy, cfg);
  entropy->add_option("--out", cfg.out, "JSON output path");

  auto* squeezing = app.add_subcommand("squeezing", "spin squeezing parameter");
  add_state_options(squeezing, cfg);
  squeezing->add_option("--out", cfg.out, "JSON output path");

  auto* cglmp = app.add_subcommand("cglmp", "d-outcome Bell combination");
  add_state_options(cglmp, cfg);
  cglmp->add_option("--d", cfg.d, "outcomes per party (default: total + 1)");
  cglmp->add_option("--resolution", cfg.resolution, "grid points per angle");
  cglmp->add_flag("--refine,!--no-refine", cfg.refine, "simplex refinement");
  cglmp->add_option("--out", cfg.out, "JSON output path");

  for (auto* sub : app.get_subcommands({}))
    for (auto* opt : sub->get_options())
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::vector<std::string> args;
  try {
    args = assemble_args(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes back to front
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (surface->parsed()) return cmd_surface(cfg);
    if (optimize->parsed()) return cmd_optimize(cfg);
    if (reproduce->parsed()) return cmd_reproduce(item, cfg);
    if (entropy->parsed()) return cmd_entropy(cfg);
    if (squeezing->parsed()) return cmd_squeezing(cfg);
    if (cglmp->parsed()) return cmd_cglmp(cfg);
  } catch (const UndefinedSqueezingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
