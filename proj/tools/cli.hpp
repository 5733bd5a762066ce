#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hberry/integrator.hpp"
#include "hberry/spectral.hpp"

namespace hberry::cli {

enum class Format { Json, Csv };

struct SweepSpec {
  std::string param;  // theta0, kappa_tilde, T, hbar
  std::vector<double> values;
};

struct RunConfig {
  std::string command;
  std::filesystem::path loop;
  std::filesystem::path suite;
  FockIndex nu;
  std::optional<double> T;
  std::vector<double> T_list;  // extract
  Tolerances tol;
  std::optional<std::filesystem::path> out;
  std::optional<Format> format;
  SweepSpec sweep;
  int samples = 0;  // 0: command default
  int mode = 1;     // 1-based germ index
  double s = 0.0;
  double t = 0.0;
  int points = 32;
  double half_width = 6.0;
  unsigned threads = 0;

  /// Throws InvalidArgument when a command-specific field is missing or out of range.
  void check() const;
};

/// Tolerances named by HBERRY_TOL_PROFILE (default, strict, fast); unset means default.
Tolerances tolerance_profile(const char* name);

/// Executes one command. Results go to config.out or `out`; failures print one JSON object to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// "1,0,2" → ν; "50,100" → doubles; "lo:hi:n" → n evenly spaced values.
FockIndex parse_nu(const std::string& text);
std::vector<double> parse_values(const std::string& text);

}  // namespace hberry::cli
