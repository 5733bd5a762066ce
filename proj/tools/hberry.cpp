#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cli.hpp"
#include "hberry/error.hpp"

namespace {

struct Raw {
  std::string loop, suite, nu = "0,0,0", T, values, param, out, format;
  double rtol = 0.0, atol = 0.0;
};

void common(CLI::App* sub, Raw& raw) {
  sub->add_option("--loop", raw.loop, "loop config (JSON)");
  sub->add_option("--nu", raw.nu, "Fock index n1,n2,n3");
  sub->add_option("--out", raw.out, "output file (default stdout)");
  sub->add_option("--format", raw.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--rtol", raw.rtol, "integrator relative tolerance");
  sub->add_option("--atol", raw.atol, "integrator absolute tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hberry;
  CLI::App app{"Berry phases and Hannay angles for quadratic Hartree-type systems"};
  app.require_subcommand(1);
  Raw raw;
  cli::RunConfig cfg;
  unsigned threads = 0;

  auto* spectrum = app.add_subcommand("spectrum", "frequencies and E_nu along the loop");
  auto* berry = app.add_subcommand("berry", "dynamic and Berry phase record");
  auto* hannay = app.add_subcommand("hannay", "Hannay angles and solid angle");
  auto* evolve = app.add_subcommand("evolve", "moment and germ trajectories over one period");
  auto* extract = app.add_subcommand("extract", "numeric germ phase against the closed form over a list of T");
  auto* wave = app.add_subcommand("wavefunction", "sample psi_nu on a cube grid");
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  auto* sweep = app.add_subcommand("sweep", "Berry records while one scalar varies");
  for (auto* sub : {spectrum, berry, hannay, evolve, extract, wave, verify, sweep}) {
    common(sub, raw);
    sub->add_option("--threads", threads, "worker threads (0: all cores)");
  }
  for (auto* sub : {spectrum, berry, hannay, evolve, wave, sweep}) sub->add_option("--T", raw.T, "period override");
  spectrum->add_option("--samples", cfg.samples, "points in s");
  evolve->add_option("--samples", cfg.samples, "output intervals");
  extract->add_option("--T", raw.T, "periods, comma list or lo:hi:n");
  extract->add_option("--mode", cfg.mode, "germ index 1..3");
  extract->add_option("--samples", cfg.samples, "demodulation samples");
  wave->add_option("--s", cfg.s, "slow time of the parameters");
  wave->add_option("--t", cfg.t, "fast time for the exp(-iEt) factor");
  wave->add_option("--points", cfg.points, "grid points per axis");
  wave->add_option("--half-width", cfg.half_width, "grid covers [-w, w]^3");
  verify->add_option("--suite", raw.suite, "suite file (default: shipped configs)");
  sweep->add_option("--param", raw.param, "theta0, kappa_tilde, T or hbar")->required();
  sweep->add_option("--values", raw.values, "comma list or lo:hi:n")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", "invalid_argument"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.tol = cli::tolerance_profile(std::getenv("HBERRY_TOL_PROFILE"));
    if (raw.rtol != 0.0) cfg.tol.rtol = raw.rtol;
    if (raw.atol != 0.0) cfg.tol.atol = raw.atol;
    cfg.loop = raw.loop;
    cfg.suite = raw.suite;
    cfg.nu = cli::parse_nu(raw.nu);
    cfg.threads = threads;
    if (!raw.T.empty()) {
      const std::vector<double> Ts = cli::parse_values(raw.T);
      if (cfg.command == "extract")
        cfg.T_list = Ts;
      else if (Ts.size() == 1)
        cfg.T = Ts.front();
      else
        throw Error(ErrorCode::InvalidArgument, "--T takes one value here");
    }
    if (!raw.out.empty()) cfg.out = raw.out;
    if (!raw.format.empty()) cfg.format = raw.format == "csv" ? cli::Format::Csv : cli::Format::Json;
    if (cfg.command == "sweep") cfg.sweep = {raw.param, cli::parse_values(raw.values)};
  } catch (const Error& e) {
    std::cerr << nlohmann::json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return exit_status(e.code());
  }
  return cli::run(cfg, std::cout, std::cerr);
}
