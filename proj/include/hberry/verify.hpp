#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "hberry/integrator.hpp"

namespace hberry {

/// Outcome of one invariant check. `value` is the measured worst-case figure, compared against
/// `tolerance` (for the slope check: |slope − target|).
struct CheckReport {
  std::string id;
  std::string title;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  nlohmann::json details = nlohmann::json::object();
};

struct SuiteReport {
  std::vector<CheckReport> checks;

  bool ok() const;
  nlohmann::json to_json() const;
};

/// Checks known to run_check, in suite order.
const std::vector<std::string>& check_ids();

/// Runs one check with its settings block. Loop paths inside `settings` resolve against `base_dir`.
CheckReport run_check(const std::string& id, const nlohmann::json& settings, const std::filesystem::path& base_dir,
                      const Tolerances& tol = {});

/// Suite document: {"seed": n, "checks": {id: settings, ...}}. Checks run concurrently on up to
/// `threads` workers (0 → hardware concurrency); the report keeps suite order.
SuiteReport run_suite(const std::filesystem::path& suite_file, const Tolerances& tol = {}, unsigned threads = 0);

/// Per-loop invariants only (validation, affine terms, reparameterization, two-form agreement,
/// dynamic-phase scaling) on a single loop file.
SuiteReport verify_loop(const std::filesystem::path& loop_file, const Tolerances& tol = {});

}  // namespace hberry
