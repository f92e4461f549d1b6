// Exercises the command-line binary end to end.  The binary path comes from
// the SSRBELL_CLI environment variable (set by CTest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string cli_path() {
  const char* env = std::getenv("SSRBELL_CLI");
  REQUIRE_MESSAGE(env != nullptr, "SSRBELL_CLI must point at the binary");
  return env;
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("ssrbell_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("surface writes a well-formed CSV with its sidecar") {
  const auto dir = temp_dir("surface");
  const auto csv = dir / "surf.csv";
  const int rc = run("surface --family bec --n 1 --resolution 41 "
                     "--fixed-angles 0.0,1.57 --out " + csv.string());
  CHECK(rc == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("angle1,angle2,bell_term\n", 0) == 0);
  std::size_t rows = 0;
  for (char ch : text)
    if (ch == '\n') ++rows;
  CHECK(rows == 1 + 41 * 41);

  const json sidecar = json::parse(slurp(dir / "surf.json"));
  CHECK(sidecar["family"] == "bec");
  CHECK(sidecar["max_value"].get<double>() == doctest::Approx(2.41).epsilon(0.01));
}

TEST_CASE("degenerate resolution-2 surface stays well-formed") {
  const auto dir = temp_dir("surface2");
  const auto csv = dir / "tiny.csv";
  CHECK(run("surface --family bec --n 1 --resolution 2 --fixed-angles 0,1.57 "
            "--out " + csv.string()) == 0);
  std::size_t rows = 0;
  for (char ch : slurp(csv))
    if (ch == '\n') ++rows;
  CHECK(rows == 1 + 4);
}

TEST_CASE("flat-family surface is constant") {
  const auto dir = temp_dir("flat");
  const auto csv = dir / "flat.csv";
  CHECK(run("surface --family squeezed --c 0.0 --resolution 21 "
            "--fixed-angles 0,1.0 --out " + csv.string()) == 0);
  std::istringstream lines(slurp(csv));
  std::string line;
  std::getline(lines, line);  // header
  double lo = 1e300, hi = -1e300;
  while (std::getline(lines, line)) {
    const double v = std::stod(line.substr(line.rfind(',') + 1));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo < 1e-10);
}

TEST_CASE("optimize reports the expected optimum as JSON") {
  const auto dir = temp_dir("optimize");
  const auto out = dir / "opt.json";
  CHECK(run("optimize --family bec --n 2 --resolution 48 --out " +
            out.string()) == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["best_value"].get<double>() == doctest::Approx(2.36).epsilon(0.01));
  CHECK(r["violation"].get<bool>());
  CHECK(r["best_settings"]["phi_a1"].get<double>() == 0.0);
}

TEST_CASE("optimize on the separable toy ensemble finds no violation") {
  const auto dir = temp_dir("toyopt");
  const auto out = dir / "toy.json";
  CHECK(run("optimize --family toy_mixed --p 0.5 --resolution 24 --out " +
            out.string()) == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["best_value"].get<double>() <= 2.0 + 1e-9);
  CHECK_FALSE(r["violation"].get<bool>());
}

TEST_CASE("invalid family parameters exit nonzero") {
  CHECK(run("optimize --family noon --n 2 --m 1 --resolution 16") == 1);
  CHECK(run("optimize --family nosuch") != 0);
  CHECK(run("reproduce nosuchitem") != 0);
}

TEST_CASE("unwritable output path gives the distinct io exit code") {
  CHECK(run("surface --family bec --n 1 --resolution 8 --fixed-angles 0,1 "
            "--out /proc/nonexistent/out.csv") == 3);
}

TEST_CASE("squeezing subcommand and its undefined edge") {
  const auto dir = temp_dir("squeeze");
  const auto out = dir / "sq.json";
  CHECK(run("squeezing --family squeezed --c 0.6 --out " + out.string()) == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["squeezing_parameter"].get<double>() ==
        doctest::Approx(1.0 / 1.2).epsilon(1e-9));
  CHECK(r["squeezed"].get<bool>());
  CHECK(run("squeezing --family squeezed --c 0.0") == 2);
}

TEST_CASE("entropy subcommand evaluates the pair diagnostic") {
  const auto dir = temp_dir("entropy");
  const auto out = dir / "ent.json";
  CHECK(run("entropy --family bec --n 1 --out " + out.string()) == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["projected_entropy_bits"].get<double>() ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("cglmp subcommand stays within the classical bound") {
  const auto dir = temp_dir("cglmp");
  const auto out = dir / "cglmp.json";
  CHECK(run("cglmp --family bec --n 1 --resolution 8 --out " + out.string()) == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["d"].get<int>() == 3);
  CHECK(r["best_value"].get<double>() <= 2.0 + 1e-9);
}

TEST_CASE("config file supplies values that flags can override") {
  const auto dir = temp_dir("config");
  const auto conf = dir / "run.conf";
  {
    std::ofstream f(conf);
    f << "family=bec\nn=2\nresolution=24\n";
  }
  const auto out = dir / "from_config.json";
  CHECK(run("optimize --config " + conf.string() + " --out " + out.string()) == 0);
  CHECK(json::parse(slurp(out))["n"].get<int>() == 2);

  const auto out2 = dir / "override.json";
  CHECK(run("optimize --config " + conf.string() + " --n 1 --out " +
            out2.string()) == 0);
  CHECK(json::parse(slurp(out2))["n"].get<int>() == 1);
}

TEST_CASE("repeated runs are byte-identical, whatever the worker count") {
  const auto dir = temp_dir("determinism");
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  const std::string args = "surface --family squeezed --c 0.3 --resolution 33 "
                           "--fixed-angles 0.2,1.3 --out ";
  const std::string one = "SSRBELL_THREADS=1 " + cli_path() + " " + args +
                          a.string() + " > /dev/null 2>&1";
  const std::string four = "SSRBELL_THREADS=4 " + cli_path() + " " + args +
                           b.string() + " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(one.c_str())) == 0);
  CHECK(WEXITSTATUS(std::system(four.c_str())) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).size() > 1000);
}
