// One PASS/FAIL line per acceptance criterion; exit status 0 only if all pass.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "hberry/error.hpp"
#include "hberry/loop_io.hpp"
#include "hberry/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Criterion {
  int number;
  std::string check;
  double time_limit_s;  // 0: none stated
};

bool report(int number, const std::string& label, bool passed, const std::string& detail) {
  std::printf("criterion %2d %-22s %s  %s\n", number, label.c_str(), passed ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return passed;
}

std::string describe(const hberry::CheckReport& r, double seconds) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "value=%.3e tol=%.1e time=%.2fs", r.value, r.tolerance, seconds);
  std::string s = buf;
  if (r.id == "variance_convergence") s += " slope=" + r.details["slope"].dump();
  if (r.id == "wavefield") s += " variance_error=" + r.details["variance_error"].dump();
  if (r.id == "rate_extraction")
    for (const auto& l : r.details["loops"])
      s += " [kappa=" + l["kappa_tilde"].dump() + " ratio=" + l["ratio"].dump() +
           " dist(-pi)=" + l["distance_to_minus_pi_mod_2pi"].dump() + "]";
  if (r.details.contains("error") && r.details["error"].is_string()) s += " error=" + r.details["error"].get<std::string>();
  return s;
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + HBERRY_CLI + "\" " + args + " --out \"" + out.string() + "\"";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

int main() {
  const fs::path suite = fs::path(HBERRY_CONFIG_DIR) / "verify.json";
  const json doc = json::parse(hberry::read_text_file(suite));
  const std::vector<Criterion> criteria{
      {1, "eigen_oracle", 5},       {2, "symplectic", 30},    {3, "constant_loop", 0},
      {4, "fundamental_matrix", 0}, {5, "variance_convergence", 120}, {6, "rate_extraction", 0},
      {7, "solid_angle", 0},        {8, "linear_limit", 0},   {9, "two_form", 0},
      {10, "wavefield", 60},
  };

  bool all = true;
  for (const Criterion& c : criteria) {
    json settings = doc.at("checks").at(c.check);
    if (!settings.contains("seed")) settings["seed"] = doc.at("seed");
    const auto t0 = std::chrono::steady_clock::now();
    hberry::CheckReport r;
    try {
      r = hberry::run_check(c.check, settings, suite.parent_path());
    } catch (const hberry::Error& e) {
      r.id = c.check;
      r.passed = false;
      r.details = {{"error", e.what()}};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit_s == 0 || seconds < c.time_limit_s;
    all &= report(c.number, c.check, r.passed && in_time, describe(r, seconds) + (in_time ? "" : " (too slow)"));
  }

  // determinism: the CLI verify twice, byte-compared
  const fs::path dir = fs::temp_directory_path() / "hberry_acceptance";
  fs::create_directories(dir);
  const int s1 = run_cli("verify", dir / "verify_1.json");
  const int s2 = run_cli("verify", dir / "verify_2.json");
  const int s3 = run_cli("sweep --loop \"" + (suite.parent_path() / "latitude_kappa.json").string() +
                             "\" --param kappa_tilde --values 0:0.2:5 --nu 1,0,1 --format csv",
                         dir / "sweep_1.csv");
  const int s4 = run_cli("sweep --loop \"" + (suite.parent_path() / "latitude_kappa.json").string() +
                             "\" --param kappa_tilde --values 0:0.2:5 --nu 1,0,1 --format csv --threads 1",
                         dir / "sweep_2.csv");
  bool same = false;
  try {
    same = hberry::read_text_file(dir / "verify_1.json") == hberry::read_text_file(dir / "verify_2.json") &&
           hberry::read_text_file(dir / "sweep_1.csv") == hberry::read_text_file(dir / "sweep_2.csv");
  } catch (const hberry::Error&) {
  }
  fs::remove_all(dir);
  char buf[160];
  std::snprintf(buf, sizeof buf, "verify exit=%d,%d sweep exit=%d,%d identical=%s", s1, s2, s3, s4,
                same ? "yes" : "no");
  all &= report(11, "determinism", s1 == 0 && s2 == 0 && s3 == 0 && s4 == 0 && same, buf);

  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
